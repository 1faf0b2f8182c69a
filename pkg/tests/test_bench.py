"""Paired bench, replay cross-tab, report rendering."""

import csv
import random

import pytest

from helpers import skill_tables
from skatkit.bench import CrossTab, bench, replay
from skatkit.bidding import Bidder, run_auction, select_game
from skatkit.cards import CardSet, GameType, Position
from skatkit.dealing import random_deals
from skatkit.gamedef import game_value, seeger_payoff, series_score
from skatkit.records import GameRecord
from skatkit.report import (
    bench_text,
    crosstab_text,
    render_bench_figures,
    render_crosstab_figure,
    write_bench_csv,
    write_crosstab_csv,
)
from skatkit.selfplay import generate_records, play_out
from skatkit.skatselect import GameContext, select_put


def small_corpus(count=12, seed=77):
    return list(generate_records(count, seed=seed))


def test_bench_is_paired_and_accounts_for_every_deal():
    report = bench(8, ["proposal", "random", "stegen"], skill_tables(), seed=5)
    games = {p.games for p in report.policies}
    assert len(games) == 1
    assert report.scored + report.folds + report.overbids == report.deals == 8
    assert report.scored == games.pop()
    for p in report.policies:
        assert p.wins == sum(x > 0 for x in p.payoffs)


def test_bench_same_seed_is_bit_identical():
    a = bench(5, ["proposal", "random"], skill_tables(), seed=9)
    b = bench(5, ["proposal", "random"], skill_tables(), seed=9)
    assert a.summary_rows() == b.summary_rows()
    assert [p.payoffs for p in a.policies] == [p.payoffs for p in b.policies]


def test_bench_single_deal_matches_hand_computed_payoff():
    tables = skill_tables()
    seed = 3
    report = bench(1, ["proposal"], tables, seed=seed)
    assert report.scored == 1
    deal = next(iter(random_deals(seed, 1)))
    declarer, bid, folded = run_auction(deal, Bidder(tables))
    assert not folded
    hand12 = deal.hands[declarer] | deal.skat
    game, _ = select_game(hand12, bid, declarer, tables)
    ctx = GameContext.for_hand(hand12, game, declarer, bid)
    put = select_put(hand12, game, ctx, "proposal", tables=tables)[0].put
    payoff = seeger_payoff(
        play_out(deal, declarer, game, put).won, game_value(hand12, game).value
    )
    assert report.policies[0].payoffs == [payoff]
    assert report.policies[0].series_mean == pytest.approx(series_score([payoff], 1))


def test_bench_pimc_mode_runs_deterministically():
    a = bench(2, ["stegen"], skill_tables(), seed=11, mode="pimc", worlds=4)
    b = bench(2, ["stegen"], skill_tables(), seed=11, mode="pimc", worlds=4)
    assert [p.payoffs for p in a.policies] == [p.payoffs for p in b.policies]
    with pytest.raises(ValueError):
        bench(1, ["stegen"], skill_tables(), mode="openloop")
    with pytest.raises(ValueError):
        bench(1, [], skill_tables())


def test_replay_identity_policy_mirrors_the_reference_column():
    records = small_corpus()
    tab = replay(records, "recorded", skill_tables())
    assert tab.scored == len(records) and tab.skipped == 0
    for (ref, _glass, pol), count in tab.cells.items():
        if count:
            assert pol == ref
    assert tab.policy_score == pytest.approx(tab.reference_score)


def test_replay_counts_and_scores_add_up():
    records = small_corpus()
    tab = replay(records, "proposal", skill_tables())
    assert sum(tab.cells.values()) == tab.scored == len(records)
    tab.check()
    expected_ref = series_score(
        [
            seeger_payoff(
                r.outcome.won,
                game_value(r.deal.hands[r.declarer] | r.deal.skat, r.game).value,
            )
            for r in records
        ],
        len(records),
    )
    assert tab.reference_score == pytest.approx(expected_ref)


def test_replay_skips_putless_records():
    records = small_corpus(6)
    gutted = [
        GameRecord(
            deal=records[0].deal,
            winning_bid=records[0].winning_bid,
            declarer=records[0].declarer,
            game=records[0].game,
            put=None,
            outcome=records[0].outcome,
            source="x",
        )
    ] + records[1:]
    tab = replay(gutted, "recorded", skill_tables())
    assert tab.skipped == 1
    assert tab.scored == len(records) - 1


def test_crosstab_invariant_guard_fires():
    tab = CrossTab(policy="x", cells={(True, True, True): 3}, scored=2)
    with pytest.raises(AssertionError):
        tab.check()


def test_reports_render_to_files(tmp_path):
    report = bench(4, ["proposal", "random"], skill_tables(), seed=21)
    text = bench_text(report)
    assert "proposal" in text and "series_per_36" in text
    csv_path = write_bench_csv(report, tmp_path / "bench.csv")
    with open(csv_path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert [r["policy"] for r in rows] == ["proposal", "random"]
    figures = render_bench_figures(report, tmp_path)
    assert figures and all(f.exists() and f.stat().st_size > 1000 for f in figures)

    tab = replay(small_corpus(5), "recorded", skill_tables())
    assert f"policy={tab.policy}" in crosstab_text(tab)
    tab_csv = write_crosstab_csv(tab, tmp_path / "tab.csv")
    with open(tab_csv, newline="") as fh:
        assert sum(int(r["games"]) for r in csv.DictReader(fh)) == tab.scored
    figure = render_crosstab_figure(tab, tmp_path)
    assert figure.exists() and figure.stat().st_size > 1000
