"""Method-of-steps integration, attractor classification, parameter sweeps.

The integrator is classical RK4 with fixed step h = tau/N, so every
node lies a whole number of steps from the delayed time.  Substage
evaluations at t + h/2 read the delayed state from a cubic Hermite
interpolant of the stored solution (value and right-hand-side derivative
at the bracketing nodes).  Constant history keeps its exact value; the
derivative jump at t = 0 therefore sits on a node and never degrades the
interpolant.
"""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import expr as ex
from .equilibria import solve_equilibrium
from .errors import BlowUp, DelaybifError, DomainEvalError, Unclassifiable

BLOWUP_BOUND = 1e6
MIN_SUBSTEPS = 50
MIN_RECORD = 500.0


@dataclass(frozen=True)
class ConstantHistory:
    value: float


@dataclass(frozen=True)
class EquilibriumPerturbation:
    amplitude: float = 1e-3


@dataclass(frozen=True)
class SimConfig:
    step: float = None             # defaults to tau/200 at run time
    t_transient: float = 2000.0
    t_record: float = 500.0
    history: object = EquilibriumPerturbation(1e-3)
    amplitude_threshold: float = 1e-6

    def resolved_step(self, tau):
        """Step snapped to tau/N; rejects steps that do not divide tau."""
        if self.step is None:
            return tau / 200.0, 200
        n = round(tau / self.step)
        if n < MIN_SUBSTEPS:
            raise ValueError("step %g gives only %d substeps per delay (need >= %d)"
                             % (self.step, n, MIN_SUBSTEPS))
        if abs(n * self.step - tau) > 1e-9 * tau:
            raise ValueError("step %g does not divide the delay %g" % (self.step, tau))
        return tau / n, n

    def validate(self, tau, omega_star=None):
        self.resolved_step(tau)
        floor = 20.0 * (2.0 * math.pi / omega_star) if omega_star else MIN_RECORD
        if self.t_record < floor - 1e-9:
            raise ValueError("t_record = %g below required %g" % (self.t_record, floor))
        if self.t_transient < 0:
            raise ValueError("t_transient must be nonnegative")


@dataclass(frozen=True)
class SweepRecord:
    lam: float
    mu: float
    outcome: str                   # "equilibrium", "oscillation" or "error"
    y_eq: float = None
    y_min: float = None
    y_max: float = None
    period: float = None
    error: str = None


def _history_value(m, lam, mu, history):
    if isinstance(history, ConstantHistory):
        return history.value
    ybar = solve_equilibrium(m, lam, mu)
    return ybar + history.amplitude


def integrate(m, lam, mu, cfg):
    """Integrate the model at (lam, mu); samples over the record window.

    Returns (times, values) as arrays covering
    [t_transient, t_transient + t_record] at every step.
    """
    cfg.validate(m.tau)
    h, n_sub = cfg.resolved_step(m.tau)
    f = ex.compile_rhs(m.rhs)
    hist = _history_value(m, lam, mu, cfg.history)
    n_steps = int(round((cfg.t_transient + cfg.t_record) / h))
    rec_from = n_steps - int(round(cfg.t_record / h))

    vals = [0.0] * (n_steps + 1)
    ders = [0.0] * (n_steps + 1)
    y = hist
    vals[0] = y
    try:
        ders[0] = f(y, hist, lam, mu)
    except (ValueError, ZeroDivisionError, OverflowError) as exc:
        raise DomainEvalError("model not evaluable on the history: %s" % exc) from None
    half = 0.5 * h
    sixth = h / 6.0
    eighth = 0.125 * h
    try:
        for i in range(n_steps):
            j = i - n_sub
            if j < 0:
                d0 = hist
                dmid = hist
                d1 = hist if j + 1 < 0 else vals[0]
            else:
                d0 = vals[j]
                d1 = vals[j + 1]
                dmid = 0.5 * (d0 + d1) + eighth * (ders[j] - ders[j + 1])
            k1 = f(y, d0, lam, mu)
            k2 = f(y + half * k1, dmid, lam, mu)
            k3 = f(y + half * k2, dmid, lam, mu)
            k4 = f(y + h * k3, d1, lam, mu)
            y = y + sixth * (k1 + 2.0 * (k2 + k3) + k4)
            if not -BLOWUP_BOUND < y < BLOWUP_BOUND:
                raise BlowUp((i + 1) * h, y)
            vals[i + 1] = y
            ders[i + 1] = f(y, d1, lam, mu)
    except (ValueError, ZeroDivisionError, OverflowError) as exc:
        raise DomainEvalError("model evaluation failed near t = %g: %s"
                              % ((i + 1) * h, exc)) from None
    times = (np.arange(rec_from, n_steps + 1)) * h
    return times, np.array(vals[rec_from:])


def classify_attractor(times, values, cfg):
    """Equilibrium/oscillation decision plus amplitude and period estimates.

    Equilibrium iff max - min over the record window is below the
    amplitude threshold.  The period is the mean spacing of upward
    crossings of the window mean (at least 3 crossings required).
    """
    values = np.asarray(values)
    y_min = float(values.min())
    y_max = float(values.max())
    if y_max - y_min < cfg.amplitude_threshold:
        return SweepRecord(lam=math.nan, mu=math.nan, outcome="equilibrium",
                           y_eq=float(values.mean()))
    mean = float(values.mean())
    below = values[:-1] < mean
    above = values[1:] >= mean
    idx = np.nonzero(below & above)[0]
    if len(idx) < 3:
        raise Unclassifiable("only %d upward mean-crossings in the record window" % len(idx))
    frac = (mean - values[idx]) / (values[idx + 1] - values[idx])
    crossings = times[idx] + frac * (times[idx + 1] - times[idx])
    period = float((crossings[-1] - crossings[0]) / (len(crossings) - 1))
    return SweepRecord(lam=math.nan, mu=math.nan, outcome="oscillation",
                       y_min=y_min, y_max=y_max, period=period)


def run_point(m, lam, mu, cfg):
    """Integrate and classify one parameter point."""
    times, values = integrate(m, lam, mu, cfg)
    rec = classify_attractor(times, values, cfg)
    return replace(rec, lam=lam, mu=mu)


def _sweep_job(args):
    m, lam, mu, cfg = args
    try:
        return run_point(m, lam, mu, cfg)
    except DelaybifError as exc:
        return SweepRecord(lam=lam, mu=mu, outcome="error", error=str(exc))


def sweep(m, mu, lam_grid, cfg, workers=None):
    """One record per lam, in grid order; per-point failures become
    outcome="error" records instead of aborting the sweep."""
    lam_grid = [float(lam) for lam in lam_grid]
    if lam_grid != sorted(lam_grid):
        raise ValueError("lam grid must be sorted ascending")
    jobs = [(m, lam, float(mu), cfg) for lam in lam_grid]
    if workers is not None and workers <= 1 or len(jobs) <= 1:
        return [_sweep_job(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_sweep_job, jobs))


def band_summary(records):
    """Largest contiguous oscillation band: (present, lam_lo, lam_hi, width)."""
    best = None
    run_start = None
    prev = None
    for rec in records + [None]:
        osc = rec is not None and rec.outcome == "oscillation"
        if osc and run_start is None:
            run_start = rec.lam
        if not osc and run_start is not None:
            width = prev.lam - run_start
            if best is None or width > best[2]:
                best = (run_start, prev.lam, width)
            run_start = None
        prev = rec if rec is not None else prev
    if best is None:
        return False, None, None, 0.0
    return True, best[0], best[1], best[2]
