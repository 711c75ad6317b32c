"""Command line behaviour: exit codes, output, trace export, overrides."""

import pytest

from aodvmc.cli import main
from aodvmc.msc import replay_export

pytestmark = pytest.mark.usefixtures("capsys")


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_check_refuted_exits_1(capsys):
    code, out, err = run(capsys, "check", "paper1")
    assert code == 1
    assert "verdict: refuted" in out
    assert "counterexample:" in out
    assert err == ""


def test_check_holds_exits_0(capsys):
    code, out, _ = run(capsys, "check", "paper1", "--variant", "forward_all_rreps")
    assert code == 0
    assert "verdict: holds" in out
    assert "counterexample" not in out


def test_check_stats_flag(capsys):
    code, out, _ = run(capsys, "check", "paper1", "--stats", "--quiet")
    assert code == 1
    assert "states searched:" in out
    assert "transitions:" in out
    assert "elapsed:" in out


def test_quiet_suppresses_chart(capsys):
    _, out, _ = run(capsys, "check", "paper1", "--quiet")
    assert "counterexample:" not in out
    assert "tester" not in out


def test_trace_export_is_replayable(capsys, tmp_path):
    path = tmp_path / "ce.trace"
    code, out, _ = run(capsys, "check", "paper1", "--quiet", "--trace", str(path))
    assert code == 1
    assert f"counterexample written to {path}" in out
    replay_export(path.read_text())


def test_property_override(capsys):
    code, out, _ = run(capsys, "check", "paper1", "--property", "E<> delivered(d,a)",
                       "--quiet")
    assert code == 0
    assert "property: E<> delivered(d,a)" in out
    assert "verdict: holds" in out


def test_variant_value_forms(capsys):
    code, _, _ = run(capsys, "check", "paper1", "--variant", "forward_all_rreps=true")
    assert code == 0
    code, _, _ = run(capsys, "check", "paper1", "--variant", "forward_all_rreps=off")
    assert code == 1


def test_unknown_variant_exits_2(capsys):
    code, _, err = run(capsys, "check", "paper1", "--variant", "no_such_knob")
    assert code == 2
    assert "unknown variant" in err


def test_bad_property_exits_2(capsys):
    code, _, err = run(capsys, "check", "paper1", "--property", "A<> rt[s][q].hops == 1")
    assert code == 2
    assert "error:" in err


def test_state_limit_exits_2(capsys):
    # a property that holds forces the search to cover the whole space
    code, out, _ = run(capsys, "check", "paper3", "--property", "A[] loop_free",
                       "--max-states", "50")
    assert code == 2
    assert "state limit" in out


def test_missing_scenario_exits_2(capsys):
    code, _, err = run(capsys, "check", "nowhere.scn")
    assert code == 2
    assert "no such scenario" in err


def test_parse_error_reports_line(capsys, tmp_path):
    bad = tmp_path / "bad.scn"
    bad.write_text("nodes: s s\nproperty: A[] loop_free\n")
    code, _, err = run(capsys, "check", str(bad))
    assert code == 2
    assert "line 1" in err


def test_explore_prints_counts(capsys):
    code, out, _ = run(capsys, "explore", "paper1")
    assert code == 0
    assert "reachable states: 116" in out
    assert "transitions:" in out


def test_explore_state_limit_exits_2(capsys):
    code, out, _ = run(capsys, "explore", "paper1", "--max-states", "10")
    assert code == 2
    assert "state limit" in out


def test_scenario_file_path_accepted(capsys, tmp_path):
    p = tmp_path / "mini.scn"
    p.write_text("nodes: s d\nlinks: s d\nevents:\n  inject s d\n"
                 "property: E<> delivered(d,s)\n")
    code, out, _ = run(capsys, "check", str(p), "--quiet")
    assert code == 0
    assert "scenario: mini" in out
