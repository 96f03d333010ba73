import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from twistedbundles import serialize
from twistedbundles.chaincore import verify_contraction
from twistedbundles.cli import EXIT_FAIL, EXIT_INPUT, EXIT_OK, run
from twistedbundles.simplicial import chain_complex, delta, ez_contraction, minimal_circle

INPUTS = Path(__file__).resolve().parents[1] / "inputs"


def twisted(*args):
    out, err = io.StringIO(), io.StringIO()
    argv = [a if not a.endswith(".json") or "/" in a else str(INPUTS / a) for a in args]
    code = run(argv, out, err)
    return code, out.getvalue(), err.getvalue()


def report(*args):
    code, out, err = twisted(*args)
    assert code == EXIT_OK, err
    doc = json.loads(out)
    assert doc["schema"] == "twisted/v1" and doc["kind"] == "report" and doc["ok"]
    return doc


def test_homology_of_inputs():
    doc = report("homology", "--input", "chain_triangle_boundary.json")
    assert [r["group"] for r in doc["result"]["homology"]][:2] == ["Z", "Z"]
    doc = report("homology", "--input", "z2_category.json", "--bound", "4")
    assert [r["group"] for r in doc["result"]["homology"]][:4] == ["Z", "Z/2", "0", "Z/2"]
    code, out, _ = twisted("homology", "--input", "s1.json", "--format", "csv")
    assert code == EXIT_OK
    assert out.splitlines()[0] == "degree,group,free_rank,torsion"


def test_verify_modes():
    report("verify", "--contraction", "ez_d1xd1.json")
    report("verify", "--category", "hexagon.json")
    report("verify", "--base", "s1.json", "--group", "z2.json", "--rho", "rho.json")
    report("verify", "--base", "triangle_boundary.json")


def test_bundle_commands():
    report("tcp", "--base", "s1.json", "--group", "s3.json", "--rho", "rho_s3.json", "--bound", "3")
    doc = report("classify-bundles", "--base", "s1.json", "--group", "s3.json")
    assert len(doc["result"]["classes"]) == 3
    doc = report("classify-functors", "--category", "hexagon.json", "--group", "z3.json")
    assert len(doc["result"]["classes"]) == 3
    doc = report("cover", "--cover", "arcs3.json", "--group", "z2.json")
    assert len(doc["result"]["classes"]) == 2
    doc = report("wbar", "--group", "z2.json", "--bound", "3", "--universal", "--iso-bound", "3")
    assert "tau" in doc["result"]
    assert [r["group"] for r in doc["result"]["homology_twisted_tensor"]] == ["Z", "0"]
    report("subdivide", "--base", "triangle_boundary.json")


def test_tau_is_deterministic():
    args = ("tau", "--base", "s1.json", "--group", "z2.json", "--rho", "rho.json", "--bound", "3")
    first, second = twisted(*args), twisted(*args)
    assert first[0] == EXIT_OK and first[1] == second[1]
    doc = json.loads(first[1])
    digests = doc["inputs"]
    assert set(digests) >= {"base", "group", "rho"}
    assert all(v["digest"].startswith("sha256:") for v in digests.values())


def test_output_file(tmp_path):
    target = tmp_path / "out.json"
    code, out, _ = twisted("verify", "--category", "z2_category.json", "--bound", "3", "-o", str(target))
    assert code == EXIT_OK and out == ""
    assert json.loads(target.read_text())["command"] == "verify"


@pytest.mark.parametrize("args", [
    ("homology", "--input", "s1.json", "--bound", "0"),
    ("tau", "--base", "s1.json", "--group", "z2.json", "--rho", "rho.json", "--format", "csv"),
    ("homology", "--input", "missing.json"),
    ("homology", "--input", "s1.json", "--ring", "Q"),
    ("verify", "--base", "s1.json", "--group", "z2.json", "--rho", "rho_s3.json"),
    ("frobnicate",),
], ids=["bound0", "csv-tau", "missing", "ring", "bad-element", "unknown-command"])
def test_input_errors_exit_2(args):
    code, _, _ = twisted(*args)
    assert code == EXIT_INPUT


def test_wrong_schema_exits_2(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"schema": "other/v0", "kind": "simplicial_set"}))
    code, _, err = twisted("homology", "--input", str(bad))
    assert code == EXIT_INPUT and "schema" in err


def test_failed_verification_exits_1(tmp_path):
    # a cocycle-violating ρ on Δ[2] into Z3
    base = serialize.document("simplicial_set", {k: v for k, v in delta(2).to_json().items() if k != "kind"})
    serialize.write_document(base, tmp_path / "d2.json")
    rho = serialize.document("twisting_function", {"values": {"01": "1", "12": "1", "02": "1", "012": "1"}})
    serialize.write_document(rho, tmp_path / "rho.json")
    code, out, err = twisted("verify", "--base", str(tmp_path / "d2.json"), "--group", str(INPUTS / "z3.json"),
                             "--rho", str(tmp_path / "rho.json"))
    assert code == EXIT_FAIL
    assert not json.loads(out)["ok"] and err.startswith("FAIL")


def test_serialize_roundtrips():
    C = chain_complex(minimal_circle())
    D = serialize.complex_from_json(serialize.complex_to_json(C))
    assert serialize.complex_to_json(D) == serialize.complex_to_json(C)
    c = ez_contraction(delta(1), delta(1))
    back = serialize.contraction_from_json(serialize.contraction_to_json(c))
    assert verify_contraction(back).ok
    assert serialize.label(("a", 1)) == "(a, 1)"
    text = serialize.canonical_dumps({"b": 1, "a": 2})
    assert text.index('"a"') < text.index('"b"')


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "twistedbundles.cli", "homology", "--input",
                           str(INPUTS / "s1.json")], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["command"] == "homology"
