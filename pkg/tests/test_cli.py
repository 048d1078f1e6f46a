import math
import subprocess
import sys

import pytest

from delaybif.cli import main

from conftest import SIS1

SIS1_MODEL_INI = """\
[model]
name = my-sis
rhs = -x + lam*x*(1 - x)/(1 + mu*xd)
tau = 10
equilibrium = (lam - 1)/(mu + lam)
"""

LINEAR_MODEL_INI = """\
[model]
name = no-tangency
rhs = lam*x - 0.5*xd
tau = 1
equilibrium = 0
"""

EXPLOSIVE_MODEL_INI = """\
[model]
name = explosive
rhs = x*x
tau = 1
equilibrium = 0
"""


def _kv(output):
    values = {}
    for line in output.splitlines():
        if "=" in line and " " not in line.split("=", 1)[0]:
            k, v = line.split("=", 1)
            values[k] = v
    return values


def test_analyze_builtin(capsys):
    code = main(["analyze", "--model", "sis-inverse", "--guess", "1.8,2.6"])
    out = capsys.readouterr().out
    assert code == 0
    kv = _kv(out)
    assert float(kv["lam_star"]) == pytest.approx(1.784, abs=5e-4)
    assert float(kv["mu_star"]) == pytest.approx(2.613, abs=5e-4)
    assert float(kv["K1"]) == pytest.approx(-1.006, abs=0.01)
    assert kv["epsilon"] == "1"
    assert kv["diagram_class"] == "eps=+1,eta<0"
    assert kv["flag"] == ""


def test_analyze_sis_exp(capsys):
    code = main(["analyze", "--model", "sis-exp", "--guess", "2.1,1.7"])
    kv = _kv(capsys.readouterr().out)
    assert code == 0
    assert float(kv["lam_star"]) == pytest.approx(2.1474, abs=1e-4)
    assert float(kv["mu_star"]) == pytest.approx(1.6617, abs=1e-4)


def test_analyze_missing_guess():
    with pytest.raises(SystemExit) as err:
        main(["analyze", "--model", "sis-inverse"])
    assert err.value.code == 64


def test_analyze_nonconvergence_exit_code(tmp_path, capsys):
    path = tmp_path / "linear.ini"
    path.write_text(LINEAR_MODEL_INI)
    code = main(["analyze", "--model", str(path), "--guess=-0.1,0.0"])
    capsys.readouterr()
    assert code == 2


def test_analyze_model_file_matches_builtin(tmp_path, capsys):
    path = tmp_path / "my-sis.ini"
    path.write_text(SIS1_MODEL_INI)
    code = main(["analyze", "--model", str(path), "--guess", "1.8,2.6"])
    kv = _kv(capsys.readouterr().out)
    assert code == 0
    assert float(kv["lam_star"]) == pytest.approx(SIS1["lam"], abs=1e-8)
    assert kv["model"] == "my-sis"


def test_analyze_out_file(tmp_path, capsys):
    out = tmp_path / "report.txt"
    main(["analyze", "--model", "sis-inverse", "--guess", "1.8,2.6",
          "--out", str(out)])
    capsys.readouterr()
    kv = _kv(out.read_text())
    assert float(kv["bubble_coeff"]) == pytest.approx(SIS1["bubble_coeff"], rel=1e-6)


def test_hopf_curve_row_count_and_invariants(tmp_path, capsys):
    out = tmp_path / "curve.csv"
    code = main(["hopf-curve", "--tau", "1", "--omega-range", "0,%.17g" % math.pi,
                 "--points", "100", "--out", str(out), "--no-header"])
    capsys.readouterr()
    assert code == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "omega,alpha,beta"
    rows = [list(map(float, ln.split(","))) for ln in lines[1:] if not ln.startswith("#")]
    assert len(rows) == 100
    for w, a, b in rows:
        assert abs(a + b * math.cos(w)) < 1e-10
        assert abs(w + b * math.sin(w)) < 1e-10
        assert abs(w - math.sqrt(b * b - a * a)) < 1e-10


def test_hopf_curve_contains_quarter_point(tmp_path, capsys):
    lo, hi = math.pi / 2 - 0.1, math.pi / 2 + 0.1
    out = tmp_path / "curve.csv"
    main(["hopf-curve", "--tau", "1", "--omega-range", "%.17g,%.17g" % (lo, hi),
          "--points", "5", "--out", str(out), "--no-header"])
    capsys.readouterr()
    rows = [list(map(float, ln.split(",")))
            for ln in out.read_text().strip().splitlines()[1:]]
    w, a, b = rows[2]
    assert w == pytest.approx(math.pi / 2, abs=1e-12)
    assert a == pytest.approx(0.0, abs=1e-12)
    assert b == pytest.approx(-math.pi / 2, abs=1e-12)


def test_hopf_curve_multilobe_tau5(tmp_path, capsys):
    # three lobes for tau = 5: beta keeps one sign per lobe, alternating
    # across lobes, and blows up toward the singular lobe boundaries
    out = tmp_path / "curve.csv"
    main(["hopf-curve", "--tau", "5", "--omega-range", "0,%.17g" % (3 * math.pi / 5),
          "--points", "90", "--out", str(out), "--no-header"])
    capsys.readouterr()
    lines = out.read_text().strip().splitlines()
    rows = [list(map(float, ln.split(","))) for ln in lines[1:] if not ln.startswith("#")]
    lobes = {0: [], 1: [], 2: []}
    for w, a, b in rows:
        lobes[int(w / (math.pi / 5))].append(b)
    assert all(len(betas) == 30 for betas in lobes.values())
    for i, betas in lobes.items():
        sign = -1 if i % 2 == 0 else 1
        assert all(sign * b > 0 for b in betas)
        assert max(abs(b) for b in betas) > 5 * min(abs(b) for b in betas)


def test_hopf_curve_usage_errors():
    with pytest.raises(SystemExit) as err:
        main(["hopf-curve", "--tau", "1", "--omega-range", "2,1"])
    assert err.value.code == 64
    with pytest.raises(SystemExit) as err:
        main(["hopf-curve", "--omega-range", "0,1"])
    assert err.value.code == 64


def test_unknown_flag_is_usage_error():
    with pytest.raises(SystemExit) as err:
        main(["analyze", "--bogus", "1"])
    assert err.value.code == 64


def test_simulate_equilibrium_history(tmp_path, capsys):
    out = tmp_path / "traj.csv"
    code = main(["simulate", "--model", "sis-inverse", "--lam", "1.9", "--mu", "2.5",
                 "--perturb", "0", "--transient", "0", "--record", "500",
                 "--out", str(out), "--no-header"])
    text = capsys.readouterr().out
    assert code == 0
    assert "equilibrium" in text
    rows = [list(map(float, ln.split(",")))
            for ln in out.read_text().strip().splitlines()[1:]]
    ys = [r[1] for r in rows]
    assert max(ys) - min(ys) < 1e-9


def test_simulate_blowup_exit_code(tmp_path, capsys):
    path = tmp_path / "explosive.ini"
    path.write_text(EXPLOSIVE_MODEL_INI)
    code = main(["simulate", "--model", str(path), "--lam", "0", "--mu", "0",
                 "--perturb", "0.2", "--transient", "0", "--record", "500"])
    capsys.readouterr()
    assert code == 4


def test_sweep_csv_and_summary(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    code = main(["sweep", "--model", "sis-inverse", "--mu", "2.61",
                 "--lam-range", "1.70,1.80,0.05", "--transient", "100",
                 "--record", "500", "--step", "0.1", "--workers", "1",
                 "--out", str(out), "--no-header"])
    text = capsys.readouterr().out
    assert code == 0
    assert "bubble" in text
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "lam,mu,outcome,y_eq,y_min,y_max,period"
    assert len(lines) == 4


def test_sweep_error_rows_do_not_abort(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    code = main(["sweep", "--model", "sis-exp", "--mu", "1.662",
                 "--lam-range", "0.9,2.1,1.2", "--transient", "100",
                 "--record", "500", "--step", "0.1", "--workers", "1",
                 "--out", str(out), "--no-header"])
    capsys.readouterr()
    assert code == 0
    lines = out.read_text().strip().splitlines()[1:]
    assert lines[0].split(",")[2] == "error"
    assert lines[1].split(",")[2] in ("equilibrium", "oscillation")


def test_deterministic_output_with_no_header(tmp_path, capsys):
    args = ["hopf-curve", "--tau", "1", "--omega-range", "0.2,2.8",
            "--points", "40", "--no-header"]
    main(args)
    first = capsys.readouterr().out
    main(args)
    second = capsys.readouterr().out
    assert first == second


def test_config_file_supplies_defaults(tmp_path, capsys):
    cfg = tmp_path / "run.ini"
    cfg.write_text("[common]\nmodel = sis-inverse\n\n[analyze]\nguess = 1.8,2.6\n")
    code = main(["analyze", "--config", str(cfg)])
    kv = _kv(capsys.readouterr().out)
    assert code == 0
    assert float(kv["lam_star"]) == pytest.approx(SIS1["lam"], abs=1e-8)


def test_flags_override_config(tmp_path, capsys):
    cfg = tmp_path / "run.ini"
    cfg.write_text("[common]\nmodel = sis-inverse\n\n[analyze]\nguess = 0.5,0.5\n")
    code = main(["analyze", "--config", str(cfg), "--guess", "1.8,2.6"])
    capsys.readouterr()
    assert code == 0


def test_verify_subcommand(capsys):
    assert main(["verify"]) == 0
    out = capsys.readouterr().out
    assert out.count("PASS") == 4
    assert "FAIL" not in out


def test_verify_tightened_tolerance_fails(capsys):
    assert main(["verify", "--tolerance", "1e-16"]) == 1
    assert "FAIL" in capsys.readouterr().out


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "delaybif.cli", "verify"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "PASS" in proc.stdout


TANGENT_LINEAR_MODEL_INI = """\
[model]
name = tangent-linear
rhs = (-0.216997171657435 + lam*lam + mu)*x - 0.317834058194116*xd
tau = 10
equilibrium = 0
"""


def test_analyze_degenerate_beyond_scope_exit_code(tmp_path, capsys):
    # a linear family meeting both tangency conditions has K1 = 0 exactly,
    # so the report is flagged and the exit code distinguishes the case
    path = tmp_path / "tangent-linear.ini"
    path.write_text(TANGENT_LINEAR_MODEL_INI)
    code = main(["analyze", "--model", str(path), "--guess", "0.01,0.01"])
    out = capsys.readouterr().out
    assert code == 3
    kv = _kv(out)
    assert kv["flag"].startswith("degenerate-beyond-scope")
    assert "K1" in kv["flag"]


def test_hopf_curve_skips_singular_omega(tmp_path, capsys):
    lo, hi = math.pi - 0.05, math.pi + 0.05
    out = tmp_path / "curve.csv"
    main(["hopf-curve", "--tau", "1", "--omega-range", "%.17g,%.17g" % (lo, hi),
          "--points", "5", "--out", str(out), "--no-header"])
    capsys.readouterr()
    lines = out.read_text().strip().splitlines()
    comments = [ln for ln in lines if ln.startswith("#")]
    data = [ln for ln in lines if not ln.startswith("#")]
    assert len(comments) == 1 and "singular" in comments[0]
    assert data[0] == "omega,alpha,beta"
    assert len(data) - 1 == 4


CONSTANTS_MODEL_INI = """\
[model]
name = scaled-sis
rhs = -x + lam*x*(1 - x)/(1 + a*mu*xd)
tau = 10
equilibrium = (lam - 1)/(a*mu + lam)

[constants]
a = 2.0
"""


def test_model_file_constants(tmp_path, capsys):
    # with a = 2 the degenerate point sits at half the usual mu*
    path = tmp_path / "scaled.ini"
    path.write_text(CONSTANTS_MODEL_INI)
    code = main(["analyze", "--model", str(path), "--guess", "1.8,1.3"])
    kv = _kv(capsys.readouterr().out)
    assert code == 0
    assert float(kv["lam_star"]) == pytest.approx(SIS1["lam"], abs=1e-8)
    assert float(kv["mu_star"]) == pytest.approx(SIS1["mu"] / 2.0, abs=1e-8)
