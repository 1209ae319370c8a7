import csv
import io
import json
import math
from fractions import Fraction

import pytest

from finitefree.cli import main, parse_s_grid


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


@pytest.fixture
def p12_file(tmp_path):
    return write(tmp_path, "p12.txt", "# (x+1)(x+2)\n-1\n-2\n")


def test_convolve_two_quadratics(tmp_path, capsys, p12_file):
    q = write(tmp_path, "q.txt", "-3\n-1/2\n")
    code, out, _ = run(capsys, "convolve", p12_file, q, "--exact")
    assert code == 0
    data = json.loads(out)
    # etilde_1 adds; etilde_2 = etilde_2(p) + 2 etilde_1(p) etilde_1(q) + etilde_2(q)
    assert data == {"degree": 2, "etilde": ["1", "-13/4", "35/4"]}
    _, out, _ = run(capsys, "convolve", p12_file, q)
    assert [float(c) for c in json.loads(out)["etilde"]] == [1.0, -3.25, 8.75]


def test_convolve_point_mass_shifts(tmp_path, capsys):
    p = write(tmp_path, "p.txt", "-1\n-2\n-5\n")
    q = write(tmp_path, "q.txt", "-3\n-3\n-3\n")
    out_path = tmp_path / "r.json"
    code, _, _ = run(capsys, "convolve", p, q, "--out", str(out_path), "--exact")
    assert code == 0
    shifted = write(tmp_path, "s.txt", "-4\n-5\n-8\n")
    run(capsys, "convolve", shifted, write(tmp_path, "z.txt", "0\n0\n0\n"), "--out", str(tmp_path / "s.json"), "--exact")
    assert json.loads(out_path.read_text()) == json.loads((tmp_path / "s.json").read_text())


def test_convolve_degree_mismatch(tmp_path, capsys, p12_file):
    q = write(tmp_path, "q.txt", "-1\n-2\n-3\n")
    code, out, err = run(capsys, "convolve", p12_file, q)
    assert code == 3 and out == "" and "degree" in err


def test_convolve_parse_error(tmp_path, capsys, p12_file):
    q = write(tmp_path, "q.txt", "-1\nabc\n")
    assert run(capsys, "convolve", p12_file, q)[0] == 2
    assert run(capsys, "convolve", p12_file, str(tmp_path / "missing.txt"))[0] == 2


def test_convolve_json_round_trip(tmp_path, capsys, p12_file):
    first = tmp_path / "first.json"
    main(["convolve", p12_file, p12_file, "--out", str(first)])
    code, out, _ = run(capsys, "convolve", str(first), str(first))
    assert code == 0 and json.loads(out)["degree"] == 2


def test_cumulants_p12(capsys, p12_file):
    code, out, _ = run(capsys, "cumulants", p12_file, "--check", "--exact")
    assert code == 0
    got = rows(out)
    assert [(r["n"], r["kappa"], r["kappa_mobius"]) for r in got] == [("1", "-3/2", "-3/2"), ("2", "1/2", "1/2")]


def test_cumulants_monomial_zero(tmp_path, capsys):
    path = write(tmp_path, "z.txt", "0\n0\n0\n0\n")
    for flags in ((), ("--exact",)):
        code, out, _ = run(capsys, "cumulants", path, *flags)
        assert code == 0 and all(r["kappa"] == "0" for r in rows(out))


def test_cumulants_delta_pattern(tmp_path, capsys):
    # a point mass has mean -2 and no higher cumulants
    path = write(tmp_path, "d.txt", "-2\n-2\n-2\n")
    code, out, _ = run(capsys, "cumulants", path, "--check", "--exact")
    assert code == 0
    assert [r["kappa"] for r in rows(out)] == ["-2", "0", "0"]


def test_cumulants_float_backend_and_max_n(tmp_path, capsys):
    path = write(tmp_path, "f.txt", "\n".join(str(-0.5 * k) for k in range(1, 15)))
    code, out, _ = run(capsys, "cumulants", path, "--max-n", "14", "--check")
    assert code == 0
    got = rows(out)
    assert len(got) == 14 and got[12]["kappa_mobius"] == ""
    assert float(got[0]["kappa"]) == pytest.approx(-3.75, rel=1e-14)
    assert run(capsys, "cumulants", path, "--max-n", "15")[0] == 2


def test_rtransform(capsys, p12_file):
    code, out, _ = run(capsys, "rtransform", p12_file, "--s-grid", "0.1:0.5:5", "--exact")
    assert code == 0
    got = rows(out)
    assert len(got) == 5
    # phat(s) = 1 + 3s/2 + s^2, so R(1/2) = -phat'(1)/phat(1) = -1
    assert got[-1]["r_finite"] == "-1"
    assert float(got[0]["r_finite"]) == pytest.approx(-(1.5 + 0.4) / (1 + 0.3 + 0.04), rel=1e-15)
    for r in got:
        assert float(r["delta"]) == pytest.approx(float(r["r_finite"]) - float(r["r_limit"]), abs=1e-15)


def test_rtransform_outside_alpha_leaves_limit_blank(capsys, p12_file):
    _, out, _ = run(capsys, "rtransform", p12_file, "--s-grid", "0.5:1:2")
    assert rows(out)[-1]["r_limit"] == ""


def test_s_grid_parse():
    assert parse_s_grid("0:1:3") == [0.0, 0.5, 1.0]
    assert parse_s_grid("1/12:1/12:1") == [1 / 12]


@pytest.mark.parametrize("bad", ["0:1", "a:b:3", "0:1:0"])
def test_s_grid_rejects(capsys, p12_file, bad):
    with pytest.raises(SystemExit) as exc:
        main(["rtransform", p12_file, "--s-grid", bad])
    assert exc.value.code == 2


def test_bounds_hold(capsys, p12_file):
    code, out, _ = run(capsys, "bounds", p12_file, "--s", "1/2")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 3 and all(": HOLDS" in l for l in lines)


def test_bounds_delta_case(tmp_path, capsys):
    path = write(tmp_path, "d.txt", "-1\n" * 50)
    code, out, _ = run(capsys, "bounds", path, "--s", "0.5")
    assert code == 0 and "R_sandwich" in out


def test_bounds_domain_error(capsys, p12_file):
    code, _, err = run(capsys, "bounds", p12_file, "--s", str(0.75 + 0.1))
    assert code == 4 and "alpha" in err


def test_converge_uniform(capsys):
    code, out, err = run(capsys, "converge", "uniform:-2:-1", "--n-list", "8,16,32,64,128", "--s", "0.25")
    assert code == 0
    got = rows(out)
    assert list(got[0]) == ["N", "s", "r_finite", "r_limit", "delta", "lower", "upper"]
    for r in got:
        assert float(r["lower"]) <= float(r["delta"]) <= float(r["upper"])
    slope = float(err.split(":")[-1])
    assert -1.15 <= slope <= -0.85


def test_converge_point_mass_closed_form(capsys):
    code, out, _ = run(capsys, "converge", "point:-1", "--n-list", "4,16,64", "--s", "0.5")
    assert code == 0
    for r in rows(out):
        N = int(r["N"])
        u = N * 0.5
        ratio = math.fsum(u**k / math.factorial(k) for k in range(N)) / math.fsum(u**k / math.factorial(k) for k in range(N + 1))
        assert float(r["delta"]) == pytest.approx(1 - ratio, rel=1e-9)
        assert float(r["r_limit"]) == pytest.approx(-1.0, rel=1e-15)


def test_converge_domain_error(capsys):
    code, out, err = run(capsys, "converge", "uniform:-2:-1", "--s", "0.7")
    assert code == 4 and "alpha" in err and out == ""


def test_converge_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert main(["converge", "semicircle:-3:1", "--n-list", "8,32", "--s", "0.05", "--out", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_converge_timing_and_exact(capsys):
    code, out, _ = run(capsys, "converge", "uniform:-2:-1", "--n-list", "8,16", "--s", "1/4", "--timing", "--exact")
    assert code == 0
    got = rows(out)
    assert "runtime_ms" in got[0] and float(got[0]["runtime_ms"]) >= 0
    assert run(capsys, "converge", "uniform:-2:-1", "--n-list", "201", "--s", "0.25", "--exact")[0] == 2


def test_converge_bad_measure(capsys):
    assert run(capsys, "converge", "gauss:0:1", "--s", "0.1")[0] == 2


def test_boxplus_converge_semicircle(capsys):
    code, out, _ = run(capsys, "boxplus-converge", "semicircle:-3:1", "semicircle:-3:1",
                       "--n-list", "16,32,64,128", "--s-grid", "1/240:1/12:20")
    assert code == 0
    got = rows(out)
    devs = [float(r["max_abs_dev"]) for r in got]
    assert devs == sorted(devs, reverse=True) and devs[-1] < 0.02
    assert all(float(r["min_superadditivity_gap"]) >= -1e-12 for r in got)


def test_boxplus_converge_point_masses(capsys):
    code, out, _ = run(capsys, "boxplus-converge", "point:-1", "point:-2", "--n-list", "8,32", "--s-grid", "0.05:0.2:4")
    assert code == 0
    devs = [float(r["max_abs_dev"]) for r in rows(out)]
    assert devs[0] > devs[1] > 0


def test_boxplus_converge_grid_out_of_range(capsys):
    code, _, err = run(capsys, "boxplus-converge", "point:-1", "point:-2", "--s-grid", "0.1:0.3:3")
    assert code == 4
