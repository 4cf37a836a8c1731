import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from typeframes.cli import run

DATA = Path(__file__).resolve().parent.parent / "demos" / "data"


def call(*argv):
    out = io.StringIO()
    code = run([str(a) for a in argv], out)
    text = out.getvalue()
    return code, (json.loads(text) if text.startswith("{") else text)


def test_validate_ok():
    code, rep = call("validate", DATA / "two_world.json")
    assert code == 0 and rep["status"] == "ok" and rep["results"]["ok"]
    assert rep["exit_code"] == 0 and "seconds" not in rep


def test_validate_violation():
    code, rep = call("validate", DATA / "swapped.json")
    assert code == 2 and rep["status"] == "violations"
    assert rep["results"]["violations"]


def test_eval_model_and_typespace():
    code, rep = call("eval", DATA / "two_world.json", "B{1,1/2} p")
    assert code == 0 and rep["results"]["truth_set"] == ["u", "v"]
    code, rep = call("eval", DATA / "example_space.json", "x1")
    assert rep["results"]["truth_set"] == ["(x1,s,t)"]


def test_eval_syntax_error():
    code, rep = call("eval", DATA / "two_world.json", "B{1, p")
    assert code == 1 and rep["status"] == "error"


def test_describe():
    code, rep = call("describe", DATA / "ambiguous.json")
    assert code == 0 and rep["results"]["classes"]["full"] == 2


def test_translate_directions():
    code, rep = call("translate", DATA / "example_space.json", "--direction", "t2m")
    assert code == 0 and rep["results"]["document"]["kind"] == "model"
    code, rep = call("translate", DATA / "two_world.json", "--direction", "m2t")
    assert code == 0 and rep["results"]["document"]["kind"] == "typespace"
    code, rep = call("translate", DATA / "example_space.json", "--direction", "roundtrip")
    assert code == 0 and rep["results"]["bijective"]


def test_ambiguous_refused():
    code, rep = call("translate", DATA / "ambiguous.json", "--direction", "m2t")
    assert code == 3 and rep["status"] == "refused"
    assert rep["details"]["agent"] == 1
    code, rep = call("translate", DATA / "ambiguous.json", "--direction", "m2t", "--thresholds", "dense")
    assert code == 0


def test_witness_merge():
    code, rep = call("witness-merge", DATA / "two_world.json", "v", "u")
    assert code == 0 and rep["results"]["ok"]
    code, rep = call("witness-merge", DATA / "two_world.json", "v")
    assert code == 1


def test_universal():
    code, rep = call("universal", DATA / "two_world.json", DATA / "two_world.json")
    assert code == 0 and rep["results"]["worlds"] == 2
    code, rep = call("universal", DATA / "example_space.json", "--budget", "100")
    assert code == 0 and rep["results"]["uniqueness"] == ["unique within 1 candidates"]
    code, rep = call("universal", DATA / "ambiguous.json")
    assert code == 3


def test_morphism_check(tmp_path):
    code, rep = call("morphism-check", DATA / "example_space.json", DATA / "example_space.json")
    assert code == 0 and rep["results"]["count"] == 1
    mp = tmp_path / "m.json"
    mp.write_text(json.dumps([{"s": "s"}, {"t": "t"}]))
    code, rep = call("morphism-check", DATA / "example_space.json", DATA / "example_space.json", "--map", mp)
    assert code == 0 and rep["results"]["ok"]
    mp.write_text(json.dumps([{"s": "nope"}, {"t": "t"}]))
    code, _ = call("morphism-check", DATA / "example_space.json", DATA / "example_space.json", "--map", mp)
    assert code == 1


def test_missing_file_and_usage():
    assert call("validate", "/no/such/file.json")[0] == 1
    assert call("frobnicate")[0] == 1


def test_deterministic_and_seed():
    a = call("describe", DATA / "two_world.json", "--seed", "7")
    b = call("describe", DATA / "two_world.json", "--seed", "7")
    assert a == b and a[1]["seed"] == 7


def test_timing_and_text():
    _, rep = call("validate", DATA / "two_world.json", "--timing")
    assert "seconds" in rep
    code, text = call("validate", DATA / "two_world.json", "--format", "text")
    assert code == 0 and "status: ok" in text


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "typeframes.cli", "validate", str(DATA / "swapped.json")],
                          capture_output=True, text=True)
    assert proc.returncode == 2
    assert json.loads(proc.stdout)["status"] == "violations"
