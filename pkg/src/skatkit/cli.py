"""Command-line front end.

Exit codes: 0 on success, 1 on input errors (bad arguments, unreadable
files, malformed hands), 2 on internal failures.  Table and coefficient
paths fall back to the SKATKIT_TABLES and SKATKIT_LAMBDAS environment
variables.
"""

from __future__ import annotations

import sys
from pathlib import Path
from typing import Optional

import click

from .bench import DEFAULT_WORLDS, PLAYOUT_MODES, bench as run_bench, replay as run_replay
from .bidding import Bidder, run_auction
from .cards import CardSet, GameType, Position, parse_hand
from .dealing import Deal, random_deals
from .ddsolver import initial_state, solve, solve_win
from .gamedef import game_value
from .probmodel import NullSuitTable, ProbTable, TableSet, build_tables, load_tables, save_tables
from .records import convert_columns, read_records, write_records
from .report import (
    bench_text,
    crosstab_text,
    render_bench_figures,
    render_crosstab_figure,
    write_bench_csv,
    write_crosstab_csv,
)
from .selfplay import generate_records
from .skatselect import (
    GameContext,
    LambdaTable,
    default_lambda_table,
    load_lambda_table,
    select_put,
)

_TABLES_OPTION = click.option(
    "--tables", "tables_path", envvar="SKATKIT_TABLES", default=None,
    type=click.Path(exists=True, file_okay=False, path_type=Path),
    help="win-probability tables directory (default: untrained tables)",
)
_LAMBDAS_OPTION = click.option(
    "--lambdas", "lambdas_path", envvar="SKATKIT_LAMBDAS", default=None,
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="soft-score coefficients file (default: built-in rows)",
)


def _load_tables(path: Optional[Path]) -> TableSet:
    if path is None:
        return TableSet(grand=ProbTable("grand"), suit=ProbTable("suit"), null=NullSuitTable())
    return load_tables(path)


def _load_lambdas(path: Optional[Path]) -> LambdaTable:
    return default_lambda_table() if path is None else load_lambda_table(path)


@click.group()
def cli() -> None:
    """Skat discard selection toolkit."""


@cli.command()
@click.option("--seed", default=0, show_default=True)
@click.option("--count", default=1, show_default=True)
@click.option("--stream", default=0, show_default=True)
def deal(seed: int, count: int, stream: int) -> None:
    """Print random deals (forehand / middlehand / rearhand / skat)."""
    for d in random_deals(seed, count, stream=stream):
        click.echo(d.to_codes())


@cli.command()
@click.option("--hand", required=True, help="the declarer's 12 cards, e.g. 'CJ SJ CA ...'")
@click.option("--game", "game_name", required=True)
@click.option("--position", "position_name", default="forehand", show_default=True)
@click.option("--bid", default=0, show_default=True)
@click.option("--policy", default="proposal", show_default=True)
@click.option("--top", default=5, show_default=True)
@click.option("--all", "show_all", is_flag=True, help="include vetoed puts with their rule")
@_TABLES_OPTION
@_LAMBDAS_OPTION
def select(
    hand: str,
    game_name: str,
    position_name: str,
    bid: int,
    policy: str,
    top: int,
    show_all: bool,
    tables_path: Optional[Path],
    lambdas_path: Optional[Path],
) -> None:
    """Rank the 66 puts of a 12-card hand."""
    hand12 = parse_hand(hand, 12)
    game = GameType.from_name(game_name)
    position = Position.from_name(position_name)
    ctx = GameContext.for_hand(hand12, game, position, bid)
    ranked = select_put(
        hand12, game, ctx, policy,
        tables=_load_tables(tables_path), lambdas=_load_lambdas(lambdas_path),
    )
    click.echo(f"game {game}  subtype {ctx.subtype}  value {game_value(hand12, game).value}")
    click.echo("rank  put    soft_score   win_prob  exp_cost  note")
    shown = 0
    for cand in ranked:
        if cand.filtered_by is not None and not show_all:
            continue
        note = cand.filtered_by or ("relaxed" if cand.relaxed else "")
        put = " ".join(sorted(c.code for c in cand.put))
        click.echo(
            f"{shown + 1:>4}  {put:<6} {cand.soft_score:>10.3f} "
            f"{cand.win_prob:>10.4f} {cand.expected_cost:>9.2f}  {note}"
        )
        shown += 1
        if shown >= top and not show_all:
            break


@cli.command()
@click.option("--seed", default=0, show_default=True)
@click.option("--count", default=10, show_default=True)
@click.option("--threshold", default=0.0, show_default=True)
@click.option("--loss-base", default=50.0, show_default=True)
@_TABLES_OPTION
def auction(
    seed: int, count: int, threshold: float, loss_base: float, tables_path: Optional[Path]
) -> None:
    """Run all-engine auctions on random deals."""
    bidder = Bidder(_load_tables(tables_path), threshold=threshold, loss_base=loss_base)
    folds = 0
    for d in random_deals(seed, count):
        declarer, bid, folded = run_auction(d, bidder)
        if folded:
            folds += 1
            click.echo("folded")
        else:
            click.echo(f"{declarer.code} holds {bid}")
    click.echo(f"# folds {folds}/{count} ({folds / count:.1%})")


@cli.command(name="solve")
@click.option("--deal", "deal_codes", required=True,
              help="'fore / mid / rear / buried' card codes")
@click.option("--game", "game_name", required=True)
@click.option("--declarer", "declarer_name", required=True)
@click.option("--exact", is_flag=True, help="exact eye count instead of the win flag")
def solve_cmd(deal_codes: str, game_name: str, declarer_name: str, exact: bool) -> None:
    """Solve a declared game with open cards (buried cards count as won)."""
    d = Deal.from_codes(deal_codes)
    game = GameType.from_name(game_name)
    declarer = Position.from_name(declarer_name)
    state = initial_state(d.hands, game, declarer, skat=d.skat)
    if game is GameType.NULL:
        click.echo(f"won {str(solve_win(state)).lower()}")
    elif exact:
        eyes = solve(state)
        click.echo(f"eyes {eyes}  won {str(eyes >= 61).lower()}")
    else:
        click.echo(f"won {str(solve_win(state)).lower()}")


@cli.command()
@click.option("--count", default=1000, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--null-share", default=0.12, show_default=True)
@click.option("-o", "--out", required=True, type=click.Path(dir_okay=False, path_type=Path))
def selfplay(count: int, seed: int, null_share: float, out: Path) -> None:
    """Generate an exactly-played game corpus."""

    def ticking():
        for i, record in enumerate(
            generate_records(count, seed, null_share=null_share), start=1
        ):
            if i % 500 == 0:
                click.echo(f"{i}/{count} records", err=True)
            yield record

    written = write_records(out, ticking())
    click.echo(f"wrote {written} records to {out}")


@cli.group()
def table() -> None:
    """Win-probability table maintenance."""


@table.command(name="build")
@click.option("--records", "records_path", required=True,
              type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("-o", "--out", required=True, type=click.Path(file_okay=False, path_type=Path))
@click.option("--min-samples", default=None, type=int,
              help="foreground cell threshold (default: library default)")
def table_build(records_path: Path, out: Path, min_samples: Optional[int]) -> None:
    """Accumulate win counts from a record file."""
    reader = read_records(records_path, on_error="skip")
    kwargs = {} if min_samples is None else {"min_samples": min_samples}
    tables = build_tables(reader, **kwargs)
    save_tables(tables, out)
    click.echo(
        f"built tables from {records_path} (skipped {reader.skipped} bad lines) -> {out}"
    )


@cli.command(name="bench")
@click.option("--count", default=100, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--policies", default="proposal,random", show_default=True,
              help="comma-separated policy names")
@click.option("--mode", default="glassbox", show_default=True,
              type=click.Choice(PLAYOUT_MODES))
@click.option("--worlds", default=DEFAULT_WORLDS, show_default=True)
@click.option("--threshold", default=0.0, show_default=True)
@click.option("--loss-base", default=50.0, show_default=True)
@click.option("--report", "report_dir", default=None,
              type=click.Path(file_okay=False, path_type=Path),
              help="write CSV and figures into this directory")
@_TABLES_OPTION
@_LAMBDAS_OPTION
def bench_cmd(
    count: int,
    seed: int,
    policies: str,
    mode: str,
    worlds: int,
    threshold: float,
    loss_base: float,
    report_dir: Optional[Path],
    tables_path: Optional[Path],
    lambdas_path: Optional[Path],
) -> None:
    """Paired policy benchmark on random deals."""
    names = [p.strip() for p in policies.split(",") if p.strip()]
    result = run_bench(
        count,
        names,
        _load_tables(tables_path),
        _load_lambdas(lambdas_path),
        seed=seed,
        mode=mode,
        worlds=worlds,
        threshold=threshold,
        loss_base=loss_base,
    )
    click.echo(bench_text(result), nl=False)
    if report_dir is not None:
        report_dir.mkdir(parents=True, exist_ok=True)
        csv_path = write_bench_csv(result, report_dir / "bench.csv")
        figures = render_bench_figures(result, report_dir)
        (report_dir / "bench.txt").write_text(bench_text(result), encoding="utf-8")
        click.echo(f"report: {csv_path} + {len(figures)} figure(s)")


@cli.command(name="replay")
@click.option("--records", "records_path", required=True,
              type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--policy", default="proposal", show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--limit", default=None, type=int, help="stop after this many records")
@click.option("--report", "report_dir", default=None,
              type=click.Path(file_okay=False, path_type=Path))
@_TABLES_OPTION
@_LAMBDAS_OPTION
def replay_cmd(
    records_path: Path,
    policy: str,
    seed: int,
    limit: Optional[int],
    report_dir: Optional[Path],
    tables_path: Optional[Path],
    lambdas_path: Optional[Path],
) -> None:
    """Cross-tabulate recorded games against the solver and a policy."""
    reader = read_records(records_path, on_error="skip")
    stream = iter(reader)
    if limit is not None:
        import itertools

        stream = itertools.islice(stream, limit)
    tab = run_replay(
        stream, policy, _load_tables(tables_path), _load_lambdas(lambdas_path), seed=seed
    )
    tab.skipped += reader.skipped
    click.echo(crosstab_text(tab), nl=False)
    if report_dir is not None:
        report_dir.mkdir(parents=True, exist_ok=True)
        csv_path = write_crosstab_csv(tab, report_dir / f"replay_{policy}.csv")
        figure = render_crosstab_figure(tab, report_dir)
        (report_dir / f"replay_{policy}.txt").write_text(
            crosstab_text(tab), encoding="utf-8"
        )
        click.echo(f"report: {csv_path} + {figure}")


@cli.command()
@click.option("--columns", "src", required=True,
              type=click.Path(exists=True, dir_okay=False, path_type=Path),
              help="tab-separated third-party corpus")
@click.option("-o", "--out", required=True, type=click.Path(dir_okay=False, path_type=Path))
@click.option("--skip-bad", is_flag=True, help="count bad lines instead of failing")
def convert(src: Path, out: Path, skip_bad: bool) -> None:
    """Convert a column-format corpus to the record format."""
    written, skipped = convert_columns(src, out, on_error="skip" if skip_bad else "raise")
    click.echo(f"wrote {written} records to {out} (skipped {skipped})")


@cli.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
@click.option("--budget", default=1.0, show_default=True, help="advise time budget, seconds")
@click.option("--static", "static_dir", default=None,
              type=click.Path(exists=True, file_okay=False, path_type=Path),
              help="serve this directory at / (the web UI build)")
@_TABLES_OPTION
@_LAMBDAS_OPTION
def serve(
    host: str,
    port: int,
    budget: float,
    static_dir: Optional[Path],
    tables_path: Optional[Path],
    lambdas_path: Optional[Path],
) -> None:
    """Run the advisory HTTP service."""
    import uvicorn

    from .service import create_app

    app = create_app(
        _load_tables(tables_path),
        _load_lambdas(lambdas_path),
        budget_s=budget,
        static_dir=static_dir,
    )
    uvicorn.run(app, host=host, port=port)


def main() -> None:
    try:
        cli(standalone_mode=False)
    except click.ClickException as exc:
        exc.show()
        sys.exit(1)
    except click.Abort:
        sys.exit(1)
    except (ValueError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    except Exception as exc:  # internal failure
        click.echo(f"internal error: {exc}", err=True)
        sys.exit(2)


if __name__ == "__main__":
    main()
