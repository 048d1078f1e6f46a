"""Model files and run-config files (INI-style key-value with sections).

A model file defines one scalar DDE:

    [model]
    name = my-model
    rhs = -x + lam*x*(1 - x)/(1 + mu*xd)
    tau = 10
    equilibrium = (lam - 1)/(mu + lam)

with `equilibrium` replaced by `residual` (and optional `bracket`) for an
implicitly defined equilibrium.  An optional [constants] section declares
named numbers that are inlined into the expressions at parse time.
Run-config files use one section per subcommand plus [common]; command
line flags override file values.  See docs/config-format.md.
"""

import configparser
import os

from .model import get_builtin, make_model

DEFAULT_BRACKET = ("1e-12", "1 - 1/lam - 1e-12")


def load_model_file(path):
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    with open(path) as fh:
        cp.read_file(fh)
    if "model" not in cp:
        raise ValueError("%s: missing [model] section" % path)
    sec = cp["model"]
    constants = {k: float(v) for k, v in cp["constants"].items()} if "constants" in cp else None
    name = sec.get("name", os.path.splitext(os.path.basename(path))[0])
    rhs = sec.get("rhs")
    if rhs is None:
        raise ValueError("%s: [model] needs an rhs entry" % path)
    tau = float(sec.get("tau", "10"))
    explicit = sec.get("equilibrium")
    residual = sec.get("residual")
    if (explicit is None) == (residual is None):
        raise ValueError("%s: give exactly one of equilibrium=, residual=" % path)
    if explicit is not None:
        return make_model(name, rhs, tau, equilibrium_source=explicit, constants=constants)
    bracket = sec.get("bracket")
    if bracket is None:
        lo, hi = DEFAULT_BRACKET
    else:
        lo, hi = (part.strip() for part in bracket.split(","))
    return make_model(name, rhs, tau, residual_source=residual,
                      bracket_sources=(lo, hi), constants=constants)


def resolve_model(spec, tau_override=None):
    """Builtin name or path to a model file, with optional tau override."""
    if os.path.exists(spec) or spec.endswith(".ini") or os.sep in spec:
        m = load_model_file(spec)
    else:
        m = get_builtin(spec)
    if tau_override is not None:
        from dataclasses import replace

        m = replace(m, tau=float(tau_override))
    return m


def load_run_config(path, section):
    """Flat dict of options for one subcommand: [common] then [section]."""
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    with open(path) as fh:
        cp.read_file(fh)
    out = {}
    for sec in ("common", section):
        if sec in cp:
            out.update(dict(cp[sec]))
    return out
