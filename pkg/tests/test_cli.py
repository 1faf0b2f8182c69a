"""Command-line verbs, file pipelines, exit codes."""

import sys

import pytest
from click.testing import CliRunner

import skatkit.cli as cli_module
from skatkit.cards import DECK, CardSet, parse_hand
from skatkit.cli import cli, main
from skatkit.dealing import Deal
from skatkit.probmodel import load_tables
from skatkit.records import read_records


@pytest.fixture()
def runner():
    return CliRunner()


def test_deal_is_seeded_and_counted(runner):
    a = runner.invoke(cli, ["deal", "--seed", "4", "--count", "3"])
    b = runner.invoke(cli, ["deal", "--seed", "4", "--count", "3"])
    assert a.exit_code == 0 and a.output == b.output
    assert len(a.output.strip().splitlines()) == 3
    c = runner.invoke(cli, ["deal", "--seed", "5", "--count", "3"])
    assert c.output != a.output


def test_select_lists_ranked_puts(runner):
    result = runner.invoke(cli, [
        "select", "--hand", "CJ SJ HJ CA CT C9 C8 HA HT H9 D8 D7",
        "--game", "grand", "--bid", "24", "--top", "3",
    ])
    assert result.exit_code == 0
    lines = result.output.strip().splitlines()
    assert lines[0].startswith("game grand")
    assert len(lines) == 5  # header, columns, 3 rows
    veto = runner.invoke(cli, [
        "select", "--hand", "CJ SJ HJ CA CT C9 C8 HA HT H9 D8 D7",
        "--game", "grand", "--all",
    ])
    assert veto.exit_code == 0
    assert len(veto.output.strip().splitlines()) == 68  # header, columns, 66 puts


def test_solve_reports_the_win_flag(runner):
    fore = parse_hand("CJ SJ HJ DJ CA CT SA ST HA HT", 10)
    rest = list(DECK - fore)
    deal = Deal(
        hands=(fore, CardSet.of(*rest[:10]), CardSet.of(*rest[10:20])),
        skat=CardSet.of(*rest[20:]),
    )
    result = runner.invoke(cli, [
        "solve", "--deal", deal.to_codes(), "--game", "grand", "--declarer", "fore",
    ])
    assert result.exit_code == 0
    assert result.output.strip() == "won true"


def test_record_pipeline_selfplay_build_select(runner, tmp_path):
    records = tmp_path / "games.jsonl"
    result = runner.invoke(cli, [
        "selfplay", "--count", "8", "--seed", "51", "-o", str(records),
    ])
    assert result.exit_code == 0, result.output
    assert "wrote 8 records" in result.output
    assert len(list(read_records(records))) == 8

    tables = tmp_path / "tables"
    result = runner.invoke(cli, [
        "table", "build", "--records", str(records), "-o", str(tables),
        "--min-samples", "2",
    ])
    assert result.exit_code == 0, result.output
    assert load_tables(tables) is not None

    result = runner.invoke(cli, [
        "select", "--hand", "CJ SJ HJ CA CT C9 C8 HA HT H9 D8 D7",
        "--game", "grand", "--tables", str(tables),
    ])
    assert result.exit_code == 0, result.output


def test_auction_verb_summarizes_folds(runner):
    result = runner.invoke(cli, ["auction", "--seed", "2", "--count", "3"])
    assert result.exit_code == 0
    assert "# folds" in result.output
    assert len(result.output.strip().splitlines()) == 4


def test_bench_and_replay_verbs_write_reports(runner, tmp_path):
    records = tmp_path / "games.jsonl"
    assert runner.invoke(
        cli, ["selfplay", "--count", "5", "--seed", "52", "-o", str(records)]
    ).exit_code == 0

    report_dir = tmp_path / "out"
    result = runner.invoke(cli, [
        "bench", "--count", "3", "--seed", "8",
        "--policies", "proposal,random", "--report", str(report_dir),
    ])
    assert result.exit_code == 0, result.output
    assert (report_dir / "bench.csv").exists()
    assert (report_dir / "bench.txt").exists()
    assert list(report_dir.glob("*.png"))

    result = runner.invoke(cli, [
        "replay", "--records", str(records), "--policy", "recorded",
        "--report", str(report_dir),
    ])
    assert result.exit_code == 0, result.output
    assert "scored=5" in result.output
    assert (report_dir / "replay_recorded.csv").exists()


def test_convert_verb_roundtrips_columns(runner, tmp_path):
    deal = "CJ C9 C8 C7 SQ SJ HA HK DJ D7 / CA CQ ST SK S7 HJ H7 DT DK D9 / CT CK S9 S8 HT HQ H9 H8 DA D8 / SA DQ"
    src = tmp_path / "corpus.tsv"
    src.write_text(f"{deal}\t18\tfore\tgrand\tSA DQ\t70\t6\tsrv\nbroken line\n")
    dst = tmp_path / "corpus.jsonl"
    result = runner.invoke(cli, [
        "convert", "--columns", str(src), "-o", str(dst), "--skip-bad",
    ])
    assert result.exit_code == 0, result.output
    assert "wrote 1 records" in result.output and "skipped 1" in result.output
    record = next(iter(read_records(dst)))
    assert record.winning_bid == 18 and record.outcome.won


def test_main_exit_codes(monkeypatch, capsys):
    monkeypatch.setattr(
        sys, "argv", ["skatkit", "select", "--hand", "CJ", "--game", "grand"]
    )
    with pytest.raises(SystemExit) as exc:
        main()
    assert exc.value.code == 1

    monkeypatch.setattr(sys, "argv", ["skatkit", "no-such-verb"])
    with pytest.raises(SystemExit) as exc:
        main()
    assert exc.value.code == 1

    def boom(*args, **kwargs):
        raise RuntimeError("table corrupted")

    monkeypatch.setattr(cli_module, "random_deals", boom)
    monkeypatch.setattr(sys, "argv", ["skatkit", "deal"])
    with pytest.raises(SystemExit) as exc:
        main()
    assert exc.value.code == 2

    monkeypatch.setattr(sys, "argv", ["skatkit", "deal", "--count", "1"])
    monkeypatch.undo()


def test_tables_env_var_is_honored(runner, tmp_path, monkeypatch):
    records = tmp_path / "games.jsonl"
    assert runner.invoke(
        cli, ["selfplay", "--count", "4", "--seed", "53", "-o", str(records)]
    ).exit_code == 0
    tables = tmp_path / "tables"
    assert runner.invoke(
        cli, ["table", "build", "--records", str(records), "-o", str(tables)]
    ).exit_code == 0
    result = runner.invoke(cli, [
        "select", "--hand", "CJ SJ HJ CA CT C9 C8 HA HT H9 D8 D7", "--game", "grand",
    ], env={"SKATKIT_TABLES": str(tables)})
    assert result.exit_code == 0, result.output
