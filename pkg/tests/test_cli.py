import json
import subprocess
import sys
from pathlib import Path

import pytest

from edmonds.cli import main
from edmonds.io import dump_json, instance_to_dict, load_instance
from helpers import skew_space

INSTANCES = Path(__file__).resolve().parent.parent / "demos" / "instances"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    doc = json.loads(out.out) if out.out.strip() else None
    return code, doc, out.err


def strip_timing(doc):
    doc = dict(doc)
    doc.pop("timing", None)
    return doc


# -- rank -------------------------------------------------------------------


def test_rank_skew(capsys):
    code, doc, _ = run(capsys, "rank", INSTANCES / "skew3.json", "--trials", 16)
    assert code == 0 and doc["rank_estimate"] == 2
    assert doc["seed"] == 0 and doc["confidence"]["trials"] == 16


def test_rank_identity(capsys):
    code, doc, _ = run(capsys, "rank", INSTANCES / "identity3.json")
    assert code == 0 and doc["rank_estimate"] == 3


def test_malformed_json_exit_two(capsys):
    code, doc, err = run(capsys, "rank", INSTANCES / "bad.json")
    assert code == 2 and doc is None
    assert "line 1" in err and "column" in err


def test_missing_file_exit_two(capsys, tmp_path):
    code, _, err = run(capsys, "rank", tmp_path / "nope.json")
    assert code == 2 and "cannot read" in err


# -- ncrank -----------------------------------------------------------------


@pytest.mark.parametrize("name,ncrk,kind", [("skew3", 3, "full"), ("e11", 1, "shrunk"),
                                            ("zero", 0, "shrunk"), ("identity3", 3, "full")])
def test_ncrank_instances(capsys, name, ncrk, kind):
    code, doc, _ = run(capsys, "ncrank", INSTANCES / f"{name}.json")
    assert code == 0
    assert doc["ncrk"] == ncrk and doc["witness"]["kind"] == kind
    expected = load_instance(INSTANCES / f"{name}.json").expected
    assert expected["ncrk"] == ncrk and expected["rank"] == doc["rank_estimate"]


def test_ncrank_is_deterministic(capsys, tmp_path):
    path = INSTANCES / "skew3.json"
    _, a, _ = run(capsys, "--seed", 11, "ncrank", path)
    _, b, _ = run(capsys, "ncrank", path, "--seed", 11)
    assert dump_json(strip_timing(a)) == dump_json(strip_timing(b))
    assert a["seed"] == 11


def test_json_out_matches_stdout(capsys, tmp_path):
    out = tmp_path / "res.json"
    code, doc, _ = run(capsys, "ncrank", INSTANCES / "e11.json", "--json-out", out)
    assert code == 0 and json.loads(out.read_text()) == doc


def test_cap_exceeded_exit_three_with_partial(capsys):
    code, doc, err = run(capsys, "ncrank", INSTANCES / "skew3.json", "--cap-dim", 5)
    assert code == 3 and "cap" in err
    assert doc["partial"]["ncrk"] == 2 and doc["partial"]["rank_cert"]["achieved_rank"] == 2


def test_field_override(capsys):
    code, doc, _ = run(capsys, "ncrank", INSTANCES / "skew3.json", "--field-override", "Q")
    assert code == 0 and doc["instance"]["field"] == "Q" and doc["ncrk"] == 3
    code, _, _ = run(capsys, "rank", INSTANCES / "skew3.json", "--field-override", "Fp:8")
    assert code == 2


# -- verify -----------------------------------------------------------------


def _ncrank_to(capsys, tmp_path, name):
    out = tmp_path / f"{name}.result.json"
    assert main(["ncrank", str(INSTANCES / f"{name}.json"), "--json-out", str(out)]) == 0
    capsys.readouterr()
    return out


@pytest.mark.parametrize("name", ["skew3", "e11", "zero", "identity3"])
def test_verify_round_trip(capsys, tmp_path, name):
    res = _ncrank_to(capsys, tmp_path, name)
    code, doc, _ = run(capsys, "verify", INSTANCES / f"{name}.json", res)
    assert code == 0 and doc["verified"] is True


def test_verify_rejects_inflated_c(capsys, tmp_path):
    res = _ncrank_to(capsys, tmp_path, "e11")
    doc = json.loads(res.read_text())
    doc["witness"]["c"] = 2
    doc["ncrk"] = 0
    res.write_text(json.dumps(doc))
    code, _, err = run(capsys, "verify", INSTANCES / "e11.json", res)
    assert code == 1 and "verification failed" in err


def test_verify_rejects_tampered_certificate(capsys, tmp_path):
    res = _ncrank_to(capsys, tmp_path, "skew3")
    doc = json.loads(res.read_text())
    coeffs = doc["witness"]["coeffs"]
    coeffs[0] = [["0"] * len(row) for row in coeffs[0]]
    res.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "verify", INSTANCES / "skew3.json", res)
    assert code == 1 and out["verified"] is False


def test_verify_instance_mismatch_exit_two(capsys, tmp_path):
    res = _ncrank_to(capsys, tmp_path, "skew3")
    code, _, _ = run(capsys, "verify", INSTANCES / "e11.json", res)
    assert code == 2


# -- wong, bounds, oracle ---------------------------------------------------


def test_wong_skew(capsys):
    code, doc, _ = run(capsys, "wong", INSTANCES / "skew3.json", "--pivot-matrix", "0")
    assert code == 0
    assert doc["stage_dims"] == [0, 2, 3] and doc["first_escape"] == 2
    assert doc["contained_in_image"] is False and doc["chain_length"] == 2


def test_wong_identity_and_single_matrix(capsys):
    code, doc, _ = run(capsys, "wong", INSTANCES / "identity3.json", "--pivot-matrix", "0")
    assert code == 0 and doc["contained_in_image"] and doc["witness"]["c"] == 0
    code, doc, _ = run(capsys, "wong", INSTANCES / "e11.json", "--pivot-matrix", "0")
    assert code == 0 and doc["contained_in_image"] and doc["witness"]["c"] == 1
    assert doc["witness"]["U"] == [["0", "1"]]


def test_wong_bad_pivot(capsys):
    code, _, _ = run(capsys, "wong", INSTANCES / "skew3.json", "--pivot-matrix", "7")
    assert code == 2
    code, _, _ = run(capsys, "wong", INSTANCES / "skew3.json", "--pivot-matrix", "1,2")
    assert code == 2


def test_bounds(capsys):
    code, doc, _ = run(capsys, "bounds", 3, 2)
    assert code == 0
    b = doc["bounds"]
    assert b["sigma_paper"] == "24" and b["n"] == 3 and b["m"] == 2
    code, doc, _ = run(capsys, "bounds", 2)
    assert doc["bounds"]["sigma_derksen"] == "256"
    assert run(capsys, "bounds", 0)[0] == 2


def test_oracle_command(capsys):
    code, doc, _ = run(capsys, "oracle", INSTANCES / "skew3.json", "--d-cap", 2)
    assert code == 0
    o = doc["oracle"]
    assert o["ncrk_lower"] == 3 and o["ncrk_upper"] == 3 and o["upper_kind"] == "lifted"


def test_instance_round_trip(tmp_path):
    path = tmp_path / "skew.json"
    path.write_text(json.dumps(instance_to_dict(skew_space(), "skew")))
    inst = load_instance(path)
    assert inst.name == "skew" and inst.space.n == 3 and inst.space.m == 3


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "edmonds", "rank", str(INSTANCES / "skew3.json")],
                          capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["rank_estimate"] == 2
