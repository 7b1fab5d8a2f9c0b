import json
import subprocess
import sys
from pathlib import Path

import pytest

from tcpalgebra import isomorphic, json_to_lts, parse_model, reach, sem
from tcpalgebra.cli import main
from tcpalgebra.models import model_text

GOLDEN = Path(__file__).parent / "golden"
MODELS = Path(__file__).parent.parent / "src" / "tcpalgebra" / "models"
DINPHIL = str(MODELS / "dinphil.tcp")
WIRES = str(MODELS / "wires.tcp")


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize(
    "golden, argv",
    [
        ("steps_dinphil.txt", ["steps", DINPHIL, "--def", "DinPhil"]),
        ("steps_ph.txt", ["steps", DINPHIL, "--def", "Ph"]),
        ("steps_dup.txt", ["steps", WIRES, "--def", "Dup"]),
        ("sem_ph.json", ["sem", DINPHIL, "--def", "Ph"]),
        ("sem_dinphil.dot", ["sem", DINPHIL, "--format", "dot"]),
        ("sem_separable.json", ["sem", WIRES, "--def", "Separable"]),
        ("analyze_dinphil.txt", ["analyze", DINPHIL]),
        ("parse_dinphil.txt", ["parse", DINPHIL]),
    ],
)
def test_golden(capsys, golden, argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    assert out == (GOLDEN / golden).read_text(encoding="utf-8")


class TestParse:
    def test_listing(self, capsys):
        code, out, _ = run(capsys, "parse", DINPHIL)
        assert code == 0
        assert out.splitlines()[1:] == ["Ph:1->1", "Fk:1->1", "DinPhil:0->0"]

    def test_sort_mismatch(self, capsys, tmp_path):
        f = tmp_path / "bad.tcp"
        f.write_text("alphabet { tau }\nproc P : 1 -> 1 = dup ; id;\n")
        code, _, err = run(capsys, "parse", f)
        assert code == 2
        assert "SortMismatch" in err and "2:" in err

    def test_empty_file(self, capsys, tmp_path):
        f = tmp_path / "empty.tcp"
        f.write_text("")
        code, _, err = run(capsys, "parse", f)
        assert code == 2 and "ParseError" in err

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "parse", tmp_path / "nope.tcp")
        assert code == 2 and "cannot read" in err


class TestSteps:
    def test_line_counts(self, capsys, tmp_path):
        assert len(run(capsys, "steps", DINPHIL, "--def", "DinPhil")[1].splitlines()) == 4
        assert len(run(capsys, "steps", DINPHIL, "--def", "Ph")[1].splitlines()) == 2
        f = tmp_path / "nil.tcp"
        f.write_text("alphabet { tau }\nproc N : 1 -> 1 = nil[1,1];\n")
        code, out, _ = run(capsys, "steps", f)
        assert code == 0 and out == ""

    def test_unknown_definition(self, capsys):
        code, _, err = run(capsys, "steps", DINPHIL, "--def", "Nope")
        assert code == 2 and "UnknownName" in err


class TestSem:
    def test_json(self, capsys):
        code, out, _ = run(capsys, "sem", DINPHIL, "--def", "Ph")
        doc = json.loads(out)
        assert code == 0 and (len(doc["states"]), len(doc["transitions"])) == (4, 8)

    def test_state_bound(self, capsys):
        code, out, err = run(capsys, "sem", DINPHIL, "--max-states", "2")
        assert code == 3 and out == ""
        assert "StateBoundExceeded" in err and "2 states explored" in err

    def test_out_file(self, capsys, tmp_path):
        target = tmp_path / "ph.json"
        code, out, _ = run(capsys, "sem", DINPHIL, "--def", "Ph", "--out", target)
        assert code == 0 and out == ""
        assert target.read_text() == (GOLDEN / "sem_ph.json").read_text()


class TestAnalyze:
    def test_default_exit(self, capsys):
        code, out, _ = run(capsys, "analyze", DINPHIL)
        assert code == 0
        assert "deadlocks: 1" in out
        assert "state 1: 3 steps" in out and "state 2: 3 steps" in out

    def test_fail_on_deadlock(self, capsys):
        assert run(capsys, "analyze", DINPHIL, "--fail-on-deadlock")[0] == 1
        assert run(capsys, "analyze", DINPHIL, "--def", "Ph", "--fail-on-deadlock")[0] == 0


class TestIsoSynth:
    def test_iso_self(self, capsys):
        path = str(GOLDEN / "sem_ph.json")
        code, out, _ = run(capsys, "iso", path, path)
        assert code == 0
        assert out.splitlines() == ["isomorphic", "0->0, 1->1, 2->2, 3->3"]

    def test_iso_different(self, capsys):
        code, out, _ = run(capsys, "iso", GOLDEN / "sem_ph.json", GOLDEN / "sem_separable.json")
        assert code == 1 and out.startswith("not isomorphic")
        assert json.loads(out.split(": ", 1)[1])["kind"] == "state_count"

    def test_iso_bad_document(self, capsys, tmp_path):
        f = tmp_path / "bad.json"
        f.write_text('{"left": 1}')
        code, _, err = run(capsys, "iso", f, f)
        assert code == 2 and "SchemaError" in err

    def test_synth_round_trip(self, capsys):
        code, out, _ = run(capsys, "synth", GOLDEN / "sem_ph.json", "--state", "2", "--name", "P")
        assert code == 0
        model = parse_model(out)
        target = reach(json_to_lts((GOLDEN / "sem_ph.json").read_text()), 2)
        got = sem(model["P"])
        theta = isomorphic(got, target)
        assert theta is not None and theta[got.initial] == 2

    def test_synth_unknown_state(self, capsys):
        code, _, err = run(capsys, "synth", GOLDEN / "sem_ph.json", "--state", "9")
        assert code == 2 and "UnknownState" in err


class TestVerify:
    def test_builtin(self, capsys):
        code, out, _ = run(capsys, "verify", "--builtin", "--seed", "1", "--samples", "20")
        assert code == 0
        assert out.splitlines()[-1] == "65/65 checks hold"

    def test_file(self, capsys):
        code, out, _ = run(capsys, "verify", DINPHIL, "--format", "json")
        assert code == 0
        reports = json.loads(out)
        assert all(r["verdict"] == "holds" for r in reports)
        assert any("[Ph, Fk]" in r["law"] for r in reports)

    def test_needs_exactly_one_source(self, capsys):
        assert run(capsys, "verify")[0] == 2
        assert run(capsys, "verify", DINPHIL, "--builtin")[0] == 2

    def test_byte_stable(self, capsys):
        first = run(capsys, "verify", "--builtin", "--seed", "5", "--samples", "6", "--format", "json")[1]
        second = run(capsys, "verify", "--builtin", "--seed", "5", "--samples", "6", "--format", "json")[1]
        assert first == second


class TestExamples:
    def test_list(self, capsys):
        code, out, _ = run(capsys, "examples")
        assert code == 0 and out.splitlines() == ["dinphil.tcp", "wires.tcp"]

    def test_print(self, capsys):
        code, out, _ = run(capsys, "examples", "dinphil")
        assert code == 0 and out == model_text("dinphil.tcp")

    def test_unknown(self, capsys):
        assert run(capsys, "examples", "nope")[0] == 2


def test_usage_error_exit():
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "tcpalgebra", "steps", DINPHIL, "--def", "Ph"],
        capture_output=True,
        text=True,
        encoding="utf-8",
    )
    assert proc.returncode == 0
    assert proc.stdout == (GOLDEN / "steps_ph.txt").read_text(encoding="utf-8")
