import csv
import json

import pytest

from liecube.cli import main
from liecube.lattice import count_f_m
from liecube.rootsys import build_root_system


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_info_text(capsys):
    code, out, _ = run(capsys, "info", "G2")
    assert code == 0
    assert "comarks         3,2" in out
    assert "h               6" in out


def test_info_json_and_guard_warning(capsys):
    code, out, _ = run(capsys, "info", "E8", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["weyl_order"] == 696729600
    assert "orbit guard" in data["warning"]


def test_efo_json(capsys):
    code, out, _ = run(capsys, "efo", "G2", "14")
    data = json.loads(out)
    assert code == 0 and len(data["points"]) == 10
    by_kac = {tuple(p["kac"]): p for p in data["points"]}
    assert by_kac[(4, 2, 2)]["strict_order"] == 7
    code, out, _ = run(capsys, "efo", "G2", "14", "--all", "--format", "csv")
    assert len(out.strip().splitlines()) == 1 + count_f_m(build_root_system("G2"), 14)


def test_rule_json_is_deterministic(tmp_path, monkeypatch, capsys):
    monkeypatch.delenv("SOURCE_DATE_EPOCH", raising=False)
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["rule", "G2", "8", "--out", str(a)]) == 0
    assert main(["rule", "G2", "8", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    data = json.loads(a.read_text())
    assert data["metadata"]["created"] is None
    assert data["level"] == 14 and len(data["nodes"]) == 10


def test_rule_csv(tmp_path, capsys):
    out = tmp_path / "rule.csv"
    assert main(["rule", "A2", "2", "--format", "csv", "--out", str(out)]) == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 6
    assert sum(float(r["weight"]) for r in rows) == pytest.approx(3 * 25)


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "C2", "3", "--deep")
    assert code == 0
    assert out.count("PASS") == 8
    assert "FAIL" not in out


def test_integrate_and_approx(tmp_path, capsys):
    rule = tmp_path / "rule.json"
    poly = tmp_path / "poly.json"
    main(["rule", "A2", "2", "--out", str(rule)])
    poly.write_text(json.dumps([{"exponents": [1, 1], "coeff": [1, 0]}]))
    code, out, _ = run(capsys, "integrate", str(rule), str(poly), "--oracle", "--resolution", "60")
    assert code == 0
    value = [l for l in out.splitlines() if l.startswith("cubature")][0].split()
    assert float(value[1]) == pytest.approx((2 * 3.141592653589793) ** 2, rel=1e-12)
    assert "relative_gap" in out
    code, out, _ = run(capsys, "approx", str(rule), str(poly))
    coeffs = json.loads(out)
    assert coeffs["1,1"][0] == pytest.approx(1, abs=1e-12)
    assert coeffs["0,0"][0] == pytest.approx(1, abs=1e-12)
    assert abs(coeffs["1,0"][0]) < 1e-12


def test_integrate_warns_above_exact_degree(tmp_path, capsys):
    rule = tmp_path / "rule.json"
    poly = tmp_path / "poly.json"
    main(["rule", "A2", "1", "--out", str(rule)])
    poly.write_text(json.dumps([{"exponents": [2, 2], "coeff": [1, 0]}]))
    code, out, _ = run(capsys, "integrate", str(rule), str(poly))
    assert code == 0
    assert "exactness not guaranteed" in out


def test_cloud(tmp_path, capsys):
    code, out, _ = run(capsys, "cloud", "G2", "20")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "X1,X2" and len(lines) > 1
    code, _, err = run(capsys, "cloud", "A4", "20")
    assert code == 2 and "rank" in err


@pytest.mark.parametrize("argv", [
    ["info", "Q7"],
    ["rule", "G2", "-1"],
    ["efo", "G2", "0"],
    ["bogus"],
    ["integrate", "/nonexistent/rule.json", "/nonexistent/poly.json"],
])
def test_usage_errors(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_orbit_guard_exit_code(capsys, monkeypatch):
    code, _, err = run(capsys, "rule", "E7", "0")
    assert code == 3 and "allow-large-orbits" in err
    monkeypatch.setenv("LIECUBE_ORBIT_GUARD", "10")
    code, _, _ = run(capsys, "--allow-large-orbits", "verify", "A3", "0")
    assert code == 3


@pytest.mark.parametrize("level,rows", [(106, 884), (14, 10), (6, 1)])
def test_cloud_row_counts(capsys, level, rows):
    code, out, _ = run(capsys, "cloud", "G2", str(level))
    assert code == 0 and len(out.strip().splitlines()) == 1 + rows


def test_json_floats_use_17_digits(tmp_path, capsys):
    path = tmp_path / "rule.json"
    main(["rule", "G2", "8", "--out", str(path)])
    text = path.read_text()
    weights = [line.split(":")[1].strip() for line in text.splitlines() if '"weight"' in line]
    assert "49.0" in weights
    for w in weights:
        digits = w.replace("-", "").replace(".", "").split("e")[0].lstrip("0")
        assert len(digits) == 17 or w == "49.0"
