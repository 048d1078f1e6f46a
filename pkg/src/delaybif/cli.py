"""Command line interface: analyze | hopf-curve | sweep | simulate | verify.

Every subcommand accepts --config FILE (INI, [common] plus one section
per subcommand); explicit flags override file values.  CSV output uses
17 significant digits and a timestamped comment header that --no-header
suppresses, so runs are byte-reproducible.

Exit codes: 0 success, 1 verification failure, 2 non-convergence,
3 out-of-scope degeneracy, 4 blow-up, 64 usage error.
"""

import argparse
import sys
import time

import numpy as np

from . import normalform, simulate, spectrum, verify
from .config import load_run_config, resolve_model
from .errors import (BlowUp, DegenerateBeyondScope, DelaybifError,
                     SingularParametrization)

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_NONCONV = 2
EXIT_DEGENERATE = 3
EXIT_BLOWUP = 4
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write("%s: error: %s\n" % (self.prog, message))
        raise SystemExit(EXIT_USAGE)


def _usage_error(message):
    sys.stderr.write("error: %s\n" % message)
    raise SystemExit(EXIT_USAGE)


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return "%.17g" % v
    return str(v)


def _write_csv(path, header_cols, rows, no_header, comment_lines=()):
    lines = []
    if not no_header:
        lines.append("# delaybif %s" % time.strftime("%Y-%m-%dT%H:%M:%S"))
    for c in comment_lines:
        lines.append("# %s" % c)
    lines.append(",".join(header_cols))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    text = "\n".join(lines) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _pair(text, what):
    try:
        a, b = (float(p) for p in text.split(","))
        return a, b
    except ValueError:
        _usage_error("%s must be 'lo,hi' (got %r)" % (what, text))


def _triple(text, what):
    try:
        a, b, c = (float(p) for p in text.split(","))
        return a, b, c
    except ValueError:
        _usage_error("%s must be 'lo,hi,step' (got %r)" % (what, text))


def _merge_config(args, section, keys):
    """Fill unset flags from the config file, if one was given."""
    if getattr(args, "config", None) is None:
        return
    file_values = load_run_config(args.config, section)
    for key in keys:
        attr = key.replace("-", "_")
        if getattr(args, attr, None) is None and key in file_values:
            setattr(args, attr, file_values[key])


def _sim_config(args):
    kwargs = {}
    if getattr(args, "step", None) is not None:
        kwargs["step"] = float(args.step)
    if getattr(args, "transient", None) is not None:
        kwargs["t_transient"] = float(args.transient)
    if getattr(args, "record", None) is not None:
        kwargs["t_record"] = float(args.record)
    if getattr(args, "threshold", None) is not None:
        kwargs["amplitude_threshold"] = float(args.threshold)
    perturb = 1e-3 if getattr(args, "perturb", None) is None else float(args.perturb)
    kwargs["history"] = simulate.EquilibriumPerturbation(perturb)
    return simulate.SimConfig(**kwargs)


# ---------------------------------------------------------------------------
# subcommands

REPORT_FIELDS = (
    "model", "tau", "lam_star", "mu_star", "ybar", "alpha", "beta",
    "alpha_lam", "beta_lam", "alpha_mu", "beta_mu", "alpha_lamlam",
    "beta_lamlam", "omega_star", "psi1_re", "psi1_im",
    "sigma1", "sigma2", "sigma3", "sigma4", "sigma5", "G",
    "K1", "K1_closed", "K1_general", "K2", "epsilon", "eta_slope",
    "bubble_coeff", "diagram_class", "r1", "r2", "flag",
)


def report_kv_lines(rep):
    lp = rep.point
    values = {
        "model": rep.model, "tau": rep.tau,
        "lam_star": rep.lam_star, "mu_star": rep.mu_star, "ybar": lp.ybar,
        "alpha": lp.alpha, "beta": lp.beta,
        "alpha_lam": lp.alpha_lam, "beta_lam": lp.beta_lam,
        "alpha_mu": lp.alpha_mu, "beta_mu": lp.beta_mu,
        "alpha_lamlam": lp.alpha_lamlam, "beta_lamlam": lp.beta_lamlam,
        "omega_star": rep.omega_star,
        "psi1_re": rep.psi10.real, "psi1_im": rep.psi10.imag,
        "sigma1": rep.sigma[0], "sigma2": rep.sigma[1], "sigma3": rep.sigma[2],
        "sigma4": rep.sigma[3], "sigma5": rep.sigma[4], "G": rep.G_value,
        "K1": rep.K1, "K1_closed": rep.K1_closed, "K1_general": rep.K1_general,
        "K2": "unavailable",  # imaginary cubic coefficient: no classification uses it
        "epsilon": rep.epsilon, "eta_slope": rep.eta_slope,
        "bubble_coeff": rep.bubble_coeff, "diagram_class": rep.diagram_class,
        "r1": rep.r1, "r2": rep.r2, "flag": rep.flag,
    }
    return ["%s=%s" % (k, _fmt(values[k])) for k in REPORT_FIELDS]


def cmd_analyze(args):
    _merge_config(args, "analyze", ("model", "tau", "guess", "out"))
    if args.model is None:
        _usage_error("analyze needs --model")
    if args.guess is None:
        _usage_error("analyze needs --guess lam,mu")
    m = resolve_model(args.model, args.tau)
    guess = _pair(args.guess, "--guess")
    rep = normalform.analyze(m, guess)
    print("degenerate Hopf point of %s (tau = %g)" % (rep.model, rep.tau))
    print("  lam* = %.10g   mu* = %.10g   ybar = %.10g" % (rep.lam_star, rep.mu_star, rep.point.ybar))
    print("  alpha* = %.10g   beta* = %.10g   omega* = %.10g" % (rep.point.alpha, rep.point.beta, rep.omega_star))
    print("  sigma1 = %.10g   sigma4 = %.10g   K1 = %.10g" % (rep.sigma[0], rep.sigma[3], rep.K1))
    if rep.flag is None:
        print("  epsilon = %+d   eta_slope = %.10g   bubble_coeff = %.10g" % (rep.epsilon, rep.eta_slope, rep.bubble_coeff))
        side = "mu > mu*" if rep.eta_slope < 0 else "mu < mu*"
        if rep.epsilon == 1:
            print("  bubble for %s, predicted width %.6g*sqrt|mu - mu*|" % (side, rep.bubble_coeff))
        else:
            print("  no bubble near this point (epsilon = -1)")
    else:
        print("  flagged: %s" % rep.flag)
    lines = report_kv_lines(rep)
    print("\n".join(lines))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write("\n".join(lines) + "\n")
    return EXIT_DEGENERATE if rep.flag is not None else EXIT_OK


def cmd_hopf_curve(args):
    _merge_config(args, "hopf-curve", ("tau", "omega-range", "points", "out"))
    if args.tau is None:
        _usage_error("hopf-curve needs --tau")
    if args.omega_range is None:
        _usage_error("hopf-curve needs --omega-range lo,hi")
    lo, hi = _pair(args.omega_range, "--omega-range")
    points = int(args.points or 100)
    if not hi > lo or points < 1:
        _usage_error("empty omega range")
    tau = float(args.tau)
    # midpoint sampling keeps endpoint singularities (sin = 0) off the grid
    grid = lo + (hi - lo) * (np.arange(points) + 0.5) / points
    rows = []
    comments = []
    for w in grid:
        try:
            p = spectrum.hopf_point(tau, w)
            rows.append((p.omega, p.alpha, p.beta))
        except SingularParametrization:
            comments.append("skipped singular omega = %.17g" % w)
    _write_csv(args.out, ("omega", "alpha", "beta"), rows, args.no_header, comments)
    return EXIT_OK


def cmd_sweep(args):
    _merge_config(args, "sweep", ("model", "tau", "mu", "lam-range", "step",
                                  "transient", "record", "threshold", "perturb",
                                  "workers", "out"))
    for flag in ("model", "mu", "lam_range"):
        if getattr(args, flag) is None:
            _usage_error("sweep needs --" + flag.replace("_", "-"))
    m = resolve_model(args.model, args.tau)
    mu = float(args.mu)
    lo, hi, step = _triple(args.lam_range, "--lam-range")
    if not hi >= lo or step <= 0:
        _usage_error("empty lam range")
    grid = np.arange(lo, hi + 0.5 * step, step)
    cfg = _sim_config(args)
    workers = int(args.workers) if args.workers is not None else None
    records = simulate.sweep(m, mu, grid, cfg, workers=workers)
    rows = [(r.lam, r.mu, r.outcome, r.y_eq, r.y_min, r.y_max, r.period)
            for r in records]
    _write_csv(args.out, ("lam", "mu", "outcome", "y_eq", "y_min", "y_max", "period"),
               rows, args.no_header)
    n_err = sum(1 for r in records if r.outcome == "error")
    present, blo, bhi, width = simulate.band_summary(records)
    if present:
        print("bubble present: lam in [%.6g, %.6g], measured width %.6g" % (blo, bhi, width))
    else:
        print("bubble absent")
    if n_err == len(records):
        return EXIT_NONCONV
    return EXIT_OK


def cmd_simulate(args):
    _merge_config(args, "simulate", ("model", "tau", "lam", "mu", "step",
                                     "transient", "record", "threshold",
                                     "perturb", "out"))
    for flag in ("model", "lam", "mu"):
        if getattr(args, flag) is None:
            _usage_error("simulate needs --" + flag)
    m = resolve_model(args.model, args.tau)
    lam, mu = float(args.lam), float(args.mu)
    cfg = _sim_config(args)
    times, values = simulate.integrate(m, lam, mu, cfg)
    rec = simulate.classify_attractor(times, values, cfg)
    _write_csv(args.out, ("t", "y"), list(zip(times, values)), args.no_header)
    if rec.outcome == "equilibrium":
        print("equilibrium: y = %.10g" % rec.y_eq)
    else:
        print("oscillation: y in [%.10g, %.10g], period = %.6g"
              % (rec.y_min, rec.y_max, rec.period))
    return EXIT_OK


def cmd_verify(args):
    tol = float(args.tolerance) if args.tolerance is not None else None
    results = verify.run_all(tol_override=tol)
    ok = True
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print("%s  %-28s residual %.3e  (tol %.1e)  %s"
              % (status, r.name, r.max_residual, r.tol, r.detail))
        ok = ok and r.passed
    return EXIT_OK if ok else EXIT_VERIFY


# ---------------------------------------------------------------------------


def build_parser():
    parser = _Parser(prog="delaybif",
                     description="Degenerate Hopf bifurcation analysis for scalar DDEs")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, flags):
        p = sub.add_parser(name)
        p.set_defaults(fn=fn)
        p.add_argument("--config")
        for flag in flags:
            p.add_argument("--" + flag)
        p.add_argument("--no-header", action="store_true")
        return p

    add("analyze", cmd_analyze, ("model", "tau", "guess", "out"))
    add("hopf-curve", cmd_hopf_curve, ("tau", "omega-range", "points", "out"))
    add("sweep", cmd_sweep, ("model", "tau", "mu", "lam-range", "step", "transient",
                             "record", "threshold", "perturb", "workers", "out"))
    add("simulate", cmd_simulate, ("model", "tau", "lam", "mu", "step", "transient",
                                   "record", "threshold", "perturb", "out"))
    add("verify", cmd_verify, ("tolerance",))
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except BlowUp as exc:
        sys.stderr.write("error: %s\n" % exc)
        return EXIT_BLOWUP
    except DegenerateBeyondScope as exc:
        sys.stderr.write("error: %s\n" % exc)
        return EXIT_DEGENERATE
    except DelaybifError as exc:
        sys.stderr.write("error: %s\n" % exc)
        return EXIT_NONCONV
    except OSError as exc:
        sys.stderr.write("error: %s\n" % exc)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
