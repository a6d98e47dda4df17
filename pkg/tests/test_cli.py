"""End-to-end tests for the command-line interface.

Everything goes through ``cli.main`` with explicit argv so the exit-code
contract is exercised exactly as a shell would see it.
"""

import json
import re

import pytest

from lzg import cli
from lzg.model import parse_network

from nets import MISSED_SYNC_SRC, TWO_RESETS_SRC


@pytest.fixture()
def two_resets_file(tmp_path):
    path = tmp_path / "two_resets.lzg"
    path.write_text(TWO_RESETS_SRC)
    return str(path)


@pytest.fixture()
def missed_sync_file(tmp_path):
    path = tmp_path / "missed_sync.lzg"
    path.write_text(MISSED_SYNC_SRC)
    return str(path)


def _mask_seconds(text):
    return re.sub(r'"seconds": [0-9.e-]+', '"seconds": _', text)


# ---------------------------------------------------------------------------
# check


def test_check_unreachable_exits_zero(missed_sync_file, capsys):
    code = cli.main(["check", missed_sync_file, "A1=p2,A2=q3"])
    out = capsys.readouterr().out
    assert code == cli.EXIT_OK
    assert out.startswith("unreachable\n")
    assert "local:" in out


def test_check_reachable_exits_ten_with_witness(two_resets_file, capsys):
    code = cli.main(["check", two_resets_file, "P1=p1,P2=q1", "--algorithm", "global"])
    out = capsys.readouterr().out
    assert code == cli.EXIT_REACHABLE
    assert out.startswith("reachable: a b\n")


def test_check_initial_target(two_resets_file, capsys):
    code = cli.main(["check", two_resets_file, "P1=p0"])
    assert code == cli.EXIT_REACHABLE
    assert "reachable: <initial state>" in capsys.readouterr().out


def test_check_bad_target_is_usage_error(two_resets_file, capsys):
    code = cli.main(["check", two_resets_file, "nonsense"])
    assert code == cli.EXIT_USAGE
    assert "error" in capsys.readouterr().err


def test_check_missing_model_file(tmp_path, capsys):
    code = cli.main(["check", str(tmp_path / "nope.lzg"), "P1=p1"])
    assert code == cli.EXIT_USAGE
    assert "cannot read model" in capsys.readouterr().err


def test_check_malformed_model(tmp_path, capsys):
    path = tmp_path / "bad.lzg"
    path.write_text("system x\nprocess P\nstate Q s initial\n")
    code = cli.main(["check", str(path), "P=s"])
    assert code == cli.EXIT_USAGE
    assert "line 3" in capsys.readouterr().err


def test_check_stats_json_is_deterministic_modulo_seconds(two_resets_file, tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert cli.main(["check", two_resets_file, "P1=p1,P2=q1", "--stats-json", str(a)]) == 10
    assert cli.main(["check", two_resets_file, "P1=p1,P2=q1", "--stats-json", str(b)]) == 10
    capsys.readouterr()
    assert _mask_seconds(a.read_text()) == _mask_seconds(b.read_text())
    payload = json.loads(a.read_text())
    assert payload["witness"] == ["a", "b"]
    assert payload["model"] == "two_resets"
    assert payload["found"] is True


def test_invalid_algorithm_rejected(two_resets_file, capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["check", two_resets_file, "P1=p1", "--algorithm", "psychic"])
    assert exc.value.code == 2


# ---------------------------------------------------------------------------
# explore


def test_explore_writes_dot(two_resets_file, tmp_path, capsys):
    dot = tmp_path / "graph.dot"
    code = cli.main(
        ["explore", two_resets_file, "--algorithm", "global", "--dot", str(dot)]
    )
    out = capsys.readouterr().out
    assert code == cli.EXIT_OK
    assert "global: visited 5 stored 5 covered 0" in out
    text = dot.read_text()
    assert text.startswith("digraph")
    assert len(re.findall(r"^  n\d+ \[label", text, re.M)) == 5


def test_explore_unwritable_dot_path(two_resets_file, tmp_path, capsys):
    code = cli.main(
        ["explore", two_resets_file, "--dot", str(tmp_path / "no" / "dir" / "g.dot")]
    )
    assert code == cli.EXIT_USAGE
    assert "cannot write DOT" in capsys.readouterr().err


def test_explore_exhaustive_flag_and_stats(two_resets_file, tmp_path, capsys):
    stats = tmp_path / "s.json"
    code = cli.main(
        ["explore", two_resets_file, "--exhaustive", "--stats-json", str(stats)]
    )
    capsys.readouterr()
    assert code == cli.EXIT_OK
    payload = json.loads(stats.read_text())
    assert payload["algorithm"] == "local"
    assert payload["stored"] == 4
    assert payload["found"] is False


# ---------------------------------------------------------------------------
# gen


def test_gen_to_stdout_parses(capsys):
    code = cli.main(["gen", "--family", "fischer", "--sizes", "2"])
    out = capsys.readouterr().out
    assert code == cli.EXIT_OK
    net = parse_network(out)
    assert net.name == "fischer_2"


def test_gen_writes_files(tmp_path, capsys):
    out_dir = tmp_path / "mod"
    code = cli.main(
        ["gen", "--family", "parallel", "--sizes", "3..5", "--out", str(out_dir)]
    )
    printed = capsys.readouterr().out.splitlines()
    assert code == cli.EXIT_OK
    assert len(printed) == 3
    for n in (3, 4, 5):
        net = parse_network((out_dir / f"parallel_{n}.lzg").read_text())
        assert net.name == f"parallel_{n}"


@pytest.mark.parametrize("bad", ["5..2", "0..3", "x..y", "2..3..4"])
def test_gen_bad_size_range(bad, capsys):
    code = cli.main(["gen", "--family", "parallel", "--sizes", bad])
    assert code == cli.EXIT_USAGE
    assert "size range" in capsys.readouterr().err


def test_gen_unknown_family_rejected_by_parser(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["gen", "--family", "towers", "--sizes", "2"])
    assert exc.value.code == 2


# ---------------------------------------------------------------------------
# oracle


def test_oracle_flaws_suite(capsys):
    code = cli.main(["oracle", "--suite", "flaws"])
    out = capsys.readouterr().out
    assert code == cli.EXIT_OK
    payload = json.loads(out)
    assert payload["passed"] is True
    assert payload["widening"]["raw_witness"] == ["b1", "b2", "a1", "c"]
    assert payload["widening"]["witness_class_feasible"] == []
    assert payload["regions"]["base_equiv"] is True
    assert payload["regions"]["admissible"] == []


def test_oracle_aggregation_output_is_byte_identical(capsys):
    args = ["oracle", "--suite", "aggregation", "--seed", "7", "--count", "3"]
    assert cli.main(args) == cli.EXIT_OK
    first = capsys.readouterr().out
    assert cli.main(args) == cli.EXIT_OK
    assert capsys.readouterr().out == first
    assert json.loads(first)["failures"] == []


def test_oracle_runs_suite(capsys):
    code = cli.main(["oracle", "--suite", "runs", "--seed", "3", "--count", "4"])
    payload = json.loads(capsys.readouterr().out)
    assert code == cli.EXIT_OK
    assert payload["passed"] is True
    assert payload["checked"] <= 4


def test_oracle_zero_count_trivially_passes(capsys):
    code = cli.main(["oracle", "--suite", "runs", "--count", "0"])
    assert code == cli.EXIT_OK
    assert json.loads(capsys.readouterr().out)["checked"] == 0


def test_oracle_negative_count(capsys):
    code = cli.main(["oracle", "--suite", "aggregation", "--count", "-1"])
    assert code == cli.EXIT_USAGE


# ---------------------------------------------------------------------------
# bench


def test_bench_table_and_json(tmp_path, capsys):
    out = tmp_path / "rows.json"
    code = cli.main(
        ["bench", "--family", "parallel", "--sizes", "2..3", "--out", str(out)]
    )
    table = capsys.readouterr().out
    assert code == cli.EXIT_OK
    assert table.splitlines()[0].split()[:3] == ["family", "n", "algorithm"]
    rows = json.loads(out.read_text())
    assert [(r["size"], r["algorithm"]) for r in rows] == [
        (2, "global"), (2, "local"), (3, "global"), (3, "local"),
    ]


def test_bench_unknown_family(capsys):
    code = cli.main(["bench", "--family", "towers"])
    assert code == cli.EXIT_USAGE
    assert "unknown family" in capsys.readouterr().err


def test_missing_subcommand_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main([])
    assert exc.value.code == 2


# ---------------------------------------------------------------------------
# logging


def test_log_env_enables_stderr_diagnostics(two_resets_file, monkeypatch, capsys):
    monkeypatch.setenv("LZG_LOG", "info")
    code = cli.main(["check", two_resets_file, "P1=p1,P2=q1"])
    captured = capsys.readouterr()
    assert code == cli.EXIT_REACHABLE
    assert "lzg INFO: parsed two_resets" in captured.err
    assert "INFO" not in captured.out


def test_bad_log_env_is_reported_and_ignored(two_resets_file, monkeypatch, capsys):
    monkeypatch.setenv("LZG_LOG", "chatty")
    code = cli.main(["check", two_resets_file, "P1=p0"])
    captured = capsys.readouterr()
    assert code == cli.EXIT_REACHABLE
    assert "ignoring LZG_LOG" in captured.err


def test_log_default_is_quiet(two_resets_file, monkeypatch, capsys):
    monkeypatch.delenv("LZG_LOG", raising=False)
    cli.main(["check", two_resets_file, "P1=p0"])
    assert capsys.readouterr().err == ""
