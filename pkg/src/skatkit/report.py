"""Rendering bench and replay results: CSV, aligned text, figures."""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Union

from .bench import BenchReport, CrossTab


def write_bench_csv(report: BenchReport, path: Union[str, Path]) -> Path:
    path = Path(path)
    rows = report.summary_rows()
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0].keys()))
        writer.writeheader()
        writer.writerows(rows)
    return path


def bench_text(report: BenchReport) -> str:
    head = (
        f"bench seed={report.seed} mode={report.mode} deals={report.deals} "
        f"scored={report.scored} folds={report.folds} overbids={report.overbids}"
    )
    columns = ("policy", "games", "wins", "win_rate", "series_per_36", "mean_payoff")
    rows = [columns] + [
        tuple(str(r[c]) for c in columns) for r in report.summary_rows()
    ]
    widths = [max(len(row[i]) for row in rows) for i in range(len(columns))]
    lines = [head, ""]
    for row in rows:
        lines.append("  ".join(cell.rjust(w) for cell, w in zip(row, widths)))
    return "\n".join(lines) + "\n"


def render_bench_figures(report: BenchReport, directory: Union[str, Path]) -> list[Path]:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    names = [p.name for p in report.policies]
    out = []

    fig, (left, right) = plt.subplots(1, 2, figsize=(10, 4))
    left.bar(names, [p.series_mean for p in report.policies], color="#4878a8")
    left.set_ylabel("series score per 36 games")
    left.set_title("extended series score")
    right.bar(names, [p.win_rate for p in report.policies], color="#6aa66a")
    right.set_ylabel("win rate")
    right.set_ylim(0, 1)
    right.set_title("declarer win rate")
    for ax in (left, right):
        ax.tick_params(axis="x", rotation=30)
    fig.suptitle(f"bench: {report.scored} scored deals, {report.mode} playout")
    fig.tight_layout()
    path = directory / "bench_policies.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    out.append(path)

    if report.policies and report.policies[0].games:
        fig, ax = plt.subplots(figsize=(7, 4))
        base = report.policies[0]
        for other in report.policies[1:]:
            diffs = [a - b for a, b in zip(base.payoffs, other.payoffs)]
            ax.hist(diffs, bins=40, alpha=0.5, label=f"{base.name} - {other.name}")
        ax.set_xlabel("per-deal payoff difference")
        ax.set_ylabel("deals")
        ax.set_title("paired payoff differences")
        if len(report.policies) > 1:
            ax.legend()
        fig.tight_layout()
        path = directory / "bench_paired_diffs.png"
        fig.savefig(path, dpi=120)
        plt.close(fig)
        out.append(path)
    return out


def write_crosstab_csv(tab: CrossTab, path: Union[str, Path]) -> Path:
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(
            fh, fieldnames=["reference", "glassbox", "policy", "games"]
        )
        writer.writeheader()
        writer.writerows(tab.rows())
    return path


def crosstab_text(tab: CrossTab) -> str:
    lines = [
        f"replay policy={tab.policy} scored={tab.scored} skipped={tab.skipped}",
        f"series per 36: reference={tab.reference_score:.2f} "
        f"glassbox={tab.glassbox_score:.2f} policy={tab.policy_score:.2f}",
        "",
        "ref  glass  policy  games",
    ]
    for row in tab.rows():
        lines.append(
            f"{row['reference']:>3}  {row['glassbox']:>5}  "
            f"{row['policy']:>6}  {row['games']:>5}"
        )
    return "\n".join(lines) + "\n"


def render_crosstab_figure(tab: CrossTab, directory: Union[str, Path]) -> Path:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    rows = tab.rows()
    labels = [
        f"{r['reference']}/{r['glassbox']}/{r['policy']}" for r in rows
    ]
    fig, ax = plt.subplots(figsize=(8, 4))
    ax.bar(labels, [r["games"] for r in rows], color="#a87848")
    ax.set_xlabel("won: reference / glassbox / policy")
    ax.set_ylabel("games")
    ax.set_title(f"replay cross-tab, policy {tab.policy} ({tab.scored} games)")
    fig.tight_layout()
    path = directory / f"replay_crosstab_{tab.policy}.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
