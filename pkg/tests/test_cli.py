import json

import pytest

from mmslab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_gallery_list(capsys):
    code, out = run(capsys, "gallery", "list")
    assert code == 0
    names = json.loads(out)["gallery"]
    assert "broom" in names and "onedir" in names


def test_gallery_verify_exit_codes(capsys):
    code, out = run(capsys, "gallery", "verify", "ultrametric5")
    assert code == 0
    payload = json.loads(out)
    assert payload["all_passed"] and payload["version"]


def test_space_file_roundtrip(tmp_path, capsys):
    f = tmp_path / "space.txt"
    f.write_text("# a 3-cycle\npathgraph 3 3\n0 1 1\n1 2 1\n0 2 1.5\n")
    code, out = run(capsys, "space", str(f))
    assert code == 0
    info = json.loads(out)["space"]
    assert info["kind"] == "path-graph" and info["points"] == 3


def test_estimate_comparability(capsys):
    code, out = run(capsys, "estimate", "comparability", "--gallery",
                    "ultrametric5", "--radii", "0.5,1.000000001,2")
    assert code == 0
    est = json.loads(out)["estimate"]
    assert est["value"] == 1.0 and est["direction"] == "exact"


def test_norms_broom(capsys):
    code, out = run(capsys, "norms", "--gallery", "broom", "--n", "16", "--r", "1.5")
    assert code == 0
    rep = json.loads(out)["norm"]
    assert rep["value"] == pytest.approx(8 + 1 / 17)


def test_vitali_deterministic(tmp_path):
    f1, f2 = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["vitali", "run", "--gallery", "broom", "--n", "6",
                 "--seed", "7", "--count", "15", "--out", str(f1)]) == 0
    assert main(["vitali", "run", "--gallery", "broom", "--n", "6",
                 "--seed", "7", "--count", "15", "--out", str(f2)]) == 0
    assert f1.read_bytes() == f2.read_bytes()
    payload = json.loads(f1.read_text())
    assert payload["vitali"]["ratio"] <= payload["vitali"]["k_reference"] + 1e-9


def test_gauss_upper_and_checks(capsys):
    code, out = run(capsys, "gauss", "upper", "--d", "1")
    assert code == 0
    assert json.loads(out)["upper"]["value"] == pytest.approx(5.848799307, rel=1e-9)
    code, out = run(capsys, "gauss", "checks", "--d-range", "2:12")
    assert code == 0
    assert json.loads(out)["failures"] == 0


def test_gauss_lower_report(capsys):
    code, out = run(capsys, "gauss", "lower", "--d", "50", "--p", "1",
                    "--region", "shell")
    assert code == 0
    rep = json.loads(out)["lower"]
    assert rep["weak_lower"] == pytest.approx(0.4999, rel=0.05)
    assert rep["region"] == "shell"


def test_gauss_upper_csv(tmp_path):
    f = tmp_path / "sweep.csv"
    assert main(["gauss", "upper", "--d-range", "1:5", "--csv", str(f)]) == 0
    lines = f.read_text().strip().splitlines()
    assert lines[0] == "d,value,log_value,err"
    assert len(lines) == 6


def test_verify_paper_subset(capsys):
    code, out = run(capsys, "verify-paper", "--quick", "--claims", "1,5,13")
    assert code == 0
    assert out.count("[PASS]") == 3


def test_operator_csv_stream(capsys):
    code, out = run(capsys, "operator", "average", "--gallery", "exponential",
                    "--r", "1", "--dirac", "1.0", "--points", "0.5,1.5")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "point,value"
    import math
    vals = [float(l.split(",")[1]) for l in lines[1:]]
    assert vals[0] == pytest.approx(1 / (1 - math.exp(-1.5)))
    assert vals[1] == pytest.approx(math.exp(1.5) / (math.e - math.exp(-1)))


def test_operator_maximal_on_broom(capsys):
    code, out = run(capsys, "operator", "maximal-centered", "--gallery", "broom",
                    "--n", "4", "--dirac", "0", "--points", "0,1,2")
    assert code == 0
    assert out.startswith("point,value")


def test_bad_flags_exit_two():
    with pytest.raises(SystemExit) as exc:
        main(["gauss", "lower"])        # missing required --d
    assert exc.value.code == 2
