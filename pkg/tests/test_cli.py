import csv
import io
import json
import math

import pytest

from narrowband import families
from narrowband.cli import format_angle, main
from narrowband.sequence import read_sequence

PI = math.pi


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def parse_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], [[float(v) for v in r] for r in rows[1:]]


def test_synth_task1_area(capsys):
    code, out, err = run(capsys, "synth", "--angle", "3.14159265", "--objective", "area")
    assert code == 0
    data = json.loads(out)
    assert len(data["pulses"]) == 5
    area = sum(p["theta"] for p in data["pulses"])
    assert area == pytest.approx(9.4248, abs=5e-4)
    assert "pulse_area 9.42477" in err


def test_synth_sk1(capsys, tmp_path):
    path = tmp_path / "sk1.json"
    code, out, _ = run(capsys, "synth", "--angle", "3.14159265", "--family", "sk1", "--out", str(path))
    assert code == 0
    seq = read_sequence(path)
    assert len(seq) == 3
    assert sum(seq.thetas) == pytest.approx(15.7080, abs=5e-5)
    assert out.startswith("pulses 3  pulse_area 15.707963")


def test_synth_degrees_and_csv(capsys):
    code, out, _ = run(capsys, "synth", "--angle", "90", "--azimuth", "30", "--degrees", "--format", "csv")
    assert code == 0
    header, rows = parse_csv(out)
    assert header == ["pulse", "theta", "phi"]
    assert len(rows) == 5
    code, ref, _ = run(capsys, "synth", "--angle", repr(PI / 2), "--azimuth", repr(PI / 6), "--format", "csv")
    assert ref == out


def test_synth_rejects_zero_angle(capsys):
    code, _, err = run(capsys, "synth", "--angle", "0")
    assert code == 2
    assert "outside" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["synth", "--angle", "1", "--bogus"],
        ["synth"],
        ["synth", "--angle", "1", "--objective", "speed"],
        ["sweep-epsilon", "--angle", "1", "--points", "1"],
        ["frobnicate"],
    ],
)
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 64


def test_table(capsys):
    code, out, _ = run(capsys, "table")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 16
    assert list(rows[0]) == (
        ["subfamily", "net_rotation", "lambda_x", "lambda_y"]
        + [f"theta_{i}" for i in range(1, 6)]
        + [f"phi_{i}" for i in range(1, 6)]
        + ["pulse_area", "infidelity_coeff"]
    )
    by_key = {(r["subfamily"], round(float(r["net_rotation"]), 6)): r for r in rows}
    assert float(by_key[("T_min", round(PI / 4, 6))]["pulse_area"]) == pytest.approx(5.7055, abs=5e-4)
    assert float(by_key[("E_min", round(7 * PI / 4, 6))]["infidelity_coeff"]) == pytest.approx(13.3445, abs=5e-4)


def test_sweep_epsilon(capsys, tmp_path):
    code, out, _ = run(capsys, "sweep-epsilon", "--angle", repr(PI), "--points", "11", "--detection", "0.9")
    assert code == 0
    header, rows = parse_csv(out)
    assert header == ["eps", "simple", "sk1", "task1_tmin", "task1_emin"]
    assert len(rows) == 11
    assert rows[0] == [0.0] * 5
    assert rows[-1] == pytest.approx([1.0] + [0.9] * 4, abs=1e-9)

    path = tmp_path / "eps.csv"
    assert main(["sweep-epsilon", "--angle", repr(PI / 2), "--points", "3", "--out", str(path)]) == 0
    _, rows = parse_csv(path.read_text())
    assert rows[-1][1:] == pytest.approx([0.5] * 4, abs=1e-9)
    meta = json.loads((tmp_path / "eps.csv.meta.json").read_text())
    assert meta["kind"] == "epsilon"
    assert len(meta["sequences"]) == 4


def test_sweep_position(capsys, tmp_path):
    w = 22.1
    path = tmp_path / "pos.csv"
    code = main(["sweep-position", "--angle", repr(PI), "--span", "200", "--points", "81", "--out", str(path)])
    assert code == 0
    header, rows = parse_csv(path.read_text())
    assert header == ["x_um", "simple", "sk1", "task1_tmin", "task1_emin"]
    assert rows[0][0] == -100.0 and rows[-1][0] == 100.0
    for x, s, _, tmin, emin in rows:
        assert s == pytest.approx(math.sin(PI * math.exp(-(x**2) / w**2) / 2) ** 2, abs=1e-8)
        if x == 0:
            assert (s, tmin, emin) == pytest.approx((1, 1, 1), abs=1e-8)
        if abs(x) >= w:
            assert tmin <= s and emin <= s
    meta = json.loads((tmp_path / "pos.csv.meta.json").read_text())
    assert meta["beam"]["waist_radius_um"] == pytest.approx(w)


def test_contours(capsys):
    code, out, _ = run(capsys, "contours", "--n", "4")
    assert code == 0
    header, rows = parse_csv(out)
    assert header == ["lambda_x", "lambda_y", "net_angle", "pulse_area", "infidelity_coeff"]
    assert len(rows) == 16
    points = {(r[0], r[1]): r for r in rows}
    assert points[(0.5, 0.5)][2] == pytest.approx(PI, abs=1e-8)
    assert points[(1.0, 1.0)][2] == pytest.approx(2 * PI, abs=1e-8)


def test_verify_help(capsys):
    code, out, _ = run(capsys, "verify", "--help")
    assert code == 0
    assert "Usage" in out


def test_verify_reports_every_row(capsys):
    code, out, _ = run(capsys, "verify")
    lines = out.strip().splitlines()
    assert len(lines) == 17
    assert all(line.startswith(("pass", "FAIL")) for line in lines[:16])
    passed = sum(line.startswith("pass") for line in lines[:16])
    assert lines[-1] == f"{passed}/16 rows within 0.0005"
    assert code == (0 if passed == 16 else 1)


def test_verify_catches_flipped_sk1_sign(capsys, monkeypatch):
    monkeypatch.setattr(families, "sk1_phase", lambda theta: math.acos(theta / (4 * PI)))
    code, out, _ = run(capsys, "verify")
    assert code == 1
    assert "0/16 rows" in out


def test_outputs_are_deterministic(capsys):
    for argv in (["contours", "--n", "3"], ["sweep-epsilon", "--angle", "2", "--points", "5"]):
        first = run(capsys, *argv)
        assert run(capsys, *argv) == first


@pytest.mark.parametrize(
    "theta, text",
    [(PI, "pi"), (3 * PI / 4, "3pi/4"), (2 * PI, "2pi"), (PI / 4, "pi/4"), (1.0, "1")],
)
def test_format_angle(theta, text):
    assert format_angle(theta) == text
