import json
import subprocess
import sys

import pytest

from topoprod.cli import main
from topoprod.codec import dumps, loads

from helpers import FIXTURES


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_report(capsys, *argv):
    code, out, err = run(capsys, *argv)
    report = json.loads(out)
    assert set(report) == {"command", "verdict", "diagnostics", "exit"}
    assert report["exit"] == code
    assert report["command"] == list(argv)
    return code, report, err


def fx(name: str) -> str:
    return str(FIXTURES / name)


class TestClassify:
    def test_horseshoe(self, capsys):
        code, report, err = run_report(capsys, "classify", fx("model_sine_curve.json"))
        assert code == 0
        assert report["verdict"]["type"] == "horseshoe"
        assert report["diagnostics"] == []
        assert err == ""

    def test_tpd(self, capsys):
        code, report, _ = run_report(capsys, "classify", fx("model_omega_plus_one.json"))
        assert code == 0
        assert report["verdict"]["type"] == "tpd"
        assert report["verdict"]["invariant"]["tail"] == {
            "kind": "constant",
            "value": {"fin": 1},
        }

    def test_invalid_model(self, capsys):
        code, report, err = run_report(capsys, "classify", fx("model_invalid.json"))
        assert code == 2
        assert report["verdict"]["error"]["type"] == "ValidationError"
        assert any("census" in line for line in report["diagnostics"])
        assert err != ""

    def test_malformed_file(self, capsys):
        code, report, _ = run_report(capsys, "classify", fx("malformed.json"))
        assert code == 2
        assert report["verdict"]["error"]["type"] == "ParseError"

    def test_missing_file(self, capsys):
        code, report, err = run_report(capsys, "classify", "/nonexistent/model.json")
        assert code == 2
        assert "cannot read" in report["diagnostics"][0]
        assert "cannot read" in err


class TestIso:
    def test_isomorphic(self, capsys):
        code, report, _ = run_report(
            capsys, "iso", fx("model_omega_plus_one.json"), fx("model_discrete4.json")
        )
        assert code == 0
        assert report["verdict"]["isomorphic"] is False
        assert report["verdict"]["evidence"]["failingCondition"] == 1

    def test_horseshoe_exit_three(self, capsys):
        code, report, err = run_report(
            capsys, "iso", fx("model_sine_curve.json"), fx("model_omega_plus_one.json")
        )
        assert code == 3
        assert report["verdict"]["error"]["type"] == "NotApplicableError"
        assert report["diagnostics"] != []
        assert err != ""


class TestWord:
    def test_project(self, capsys):
        code, report, _ = run_report(capsys, "word", "project", "1", fx("word_omega.json"))
        assert code == 0
        assert report["verdict"]["syllables"] == [
            {"level": 0, "letters": [[0, 1]]},
            {"level": 1, "letters": [[0, 1]]},
        ]

    def test_eq_uses_default_bound(self, capsys):
        code, report, _ = run_report(
            capsys, "word", "eq", fx("word_omega.json"), fx("word_omega_split.json")
        )
        assert code == 0
        assert report["verdict"] == {"equal": True, "level": 32}

    def test_eq_explicit_level(self, capsys):
        code, report, _ = run_report(
            capsys, "word", "eq", fx("word_omega.json"), fx("word_omega_deleted.json"), "4"
        )
        assert code == 0
        assert report["verdict"] == {"equal": True, "level": 4}

    def test_neq(self, capsys):
        code, report, _ = run_report(
            capsys, "word", "neq", fx("word_omega.json"), fx("word_omega_deleted.json")
        )
        assert code == 0
        assert report["verdict"] == {"separated": True, "level": 5, "checkedUpTo": 32}

    def test_neq_respects_global_nmax(self, capsys):
        code, report, _ = run_report(
            capsys,
            "--nmax",
            "4",
            "word",
            "neq",
            fx("word_omega.json"),
            fx("word_omega_deleted.json"),
        )
        assert code == 0
        assert report["verdict"] == {"separated": False, "level": None, "checkedUpTo": 4}

    def test_concat(self, capsys):
        code, report, _ = run_report(
            capsys, "word", "concat", fx("word_a0.json"), fx("word_omega.json")
        )
        assert code == 0
        assert [b["kind"] for b in report["verdict"]["blocks"]] == ["finite", "omega"]

    def test_invert(self, capsys):
        code, report, _ = run_report(capsys, "word", "invert", fx("word_omega.json"))
        assert code == 0
        assert report["verdict"]["blocks"][0]["kind"] == "omegaStar"

    def test_phi(self, capsys):
        code, report, _ = run_report(capsys, "word", "phi", fx("word_a0.json"))
        assert code == 0
        assert report["verdict"]["blocks"] == [
            {"kind": "finite", "letters": [[0, 0, 1], [1, 0, -1]]}
        ]

    def test_root(self, capsys):
        code, report, _ = run_report(capsys, "word", "root", "3", fx("word_a6.json"))
        assert code == 0
        assert report["verdict"]["hasRoot"] is True
        assert report["verdict"]["root"]["blocks"] == [
            {"kind": "finite", "letters": [[0, 0, 2]]}
        ]

    def test_root_absent(self, capsys):
        code, report, _ = run_report(capsys, "word", "root", "5", fx("word_a6.json"))
        assert code == 0
        assert report["verdict"] == {"hasRoot": False, "root": None}

    def test_root_of_identity_is_an_input_error(self, capsys):
        code, report, _ = run_report(capsys, "word", "root", "2", fx("word_empty.json"))
        assert code == 2
        assert "identity" in report["verdict"]["error"]["message"]

    def test_reduce_loop(self, capsys):
        code, report, _ = run_report(capsys, "word", "reduce-loop", fx("loop_crossing.json"))
        assert code == 0
        assert report["verdict"]["blocks"] == [
            {"kind": "finite", "letters": [[3, "z", 1], [3, "z", -1]]}
        ]


class TestSeq:
    def test_equiv(self, capsys):
        code, report, _ = run_report(
            capsys, "seq", "equiv", fx("seq_ones.json"), fx("seq_twos.json")
        )
        assert code == 0
        assert report["verdict"]["equivalent"] is True
        assert report["verdict"]["plan"]["case"] == "EventuallyFiniteAllFinite"

    def test_equiv_failure_names_condition(self, capsys):
        code, report, _ = run_report(
            capsys, "seq", "equiv", fx("seq_ones.json"), fx("seq_aleph_head.json")
        )
        assert code == 0
        assert report["verdict"]["equivalent"] is False
        assert report["verdict"]["failingCondition"] == 1

    def test_regroup(self, capsys):
        code, report, _ = run_report(
            capsys, "seq", "regroup", fx("seq_ones.json"), fx("grouping_pairs.json")
        )
        assert code == 0
        assert report["verdict"] == loads((FIXTURES / "seq_twos.json").read_text())

    def test_sum(self, capsys):
        code, report, _ = run_report(capsys, "seq", "sum", "3", fx("seq_ones.json"))
        assert code == 0
        assert report["verdict"] == {"m": 3, "sum": {"fin": 4}}


class TestExamples:
    def test_emits_bare_artifact(self, capsys):
        code, out, err = run(capsys, "examples", "omegaPlusOne")
        assert code == 0
        assert out == (FIXTURES / "model_omega_plus_one.json").read_text()
        assert err == ""

    def test_round_trips_through_classify(self, capsys, tmp_path):
        code, out, _ = run(capsys, "examples", "sineCurve")
        assert code == 0
        path = tmp_path / "sine.json"
        path.write_text(out)
        code, report, _ = run_report(capsys, "classify", str(path))
        assert code == 0
        assert report["verdict"]["type"] == "horseshoe"

    def test_unknown_name(self, capsys):
        code, report, _ = run_report(capsys, "examples", "noSuchSpace")
        assert code == 2
        assert report["verdict"]["error"]["type"] == "InputError"


class TestReportContract:
    def test_deterministic_output(self, capsys):
        argv = ("iso", fx("model_omega_plus_one.json"), fx("model_discrete4.json"))
        _, first, _ = run(capsys, *argv)
        _, second, _ = run(capsys, *argv)
        assert first == second

    def test_stdout_is_canonical_json(self, capsys):
        _, out, _ = run(capsys, "classify", fx("model_omega_plus_one.json"))
        assert dumps(json.loads(out)) == out

    def test_json_flag_accepted(self, capsys):
        code, report, _ = run_report(
            capsys, "--json", "classify", fx("model_omega_plus_one.json")
        )
        assert code == 0


def test_console_entrypoint_subprocess():
    proc = subprocess.run(
        [sys.executable, "-m", "topoprod", "examples", "omegaPlusOne"],
        capture_output=True,
        text=True,
        timeout=120,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["annuli"]["tail"] == {
        "kind": "constant",
        "value": {"fin": 1},
    }
