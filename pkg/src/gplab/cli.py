"""Command-line driver: every computation as a subcommand writing a table.

Exit codes: 0 success, 2 configuration or input error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import glob
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from .asymptotics import (energy_routes, extract_eps, fit_eps,
                          matched_constants, remainder_norm, target_constants)
from .bubble import bubble_constants, quadrature_power_norm, sobolev_constant
from .errors import ConfigError, DomainError, GPLabError, NoSolution, \
    NumericalFailure
from .greenfn import solve_green
from .numkernel.grid import RadialGrid
from .report import COLUMNS as REPORT_COLUMNS
from .report import build_report
from .shooting import find_ground_state, find_singular, sweep_b
from .spectral import (RefinementPolicy, eigenfunction_residual, kummer_spec,
                       limiting_eigenvalues, morse_index, nondegeneracy_gap)
from .tabular import Table, read_table, render, write_atomic

SUBCOMMANDS = ("constants", "green", "ground", "sweep-omega", "singular",
               "sweep-b", "morse", "kummer", "report")

# key -> (type, help)
_FIELDS = {
    "d": (int, "spatial dimension"),
    "omega": (float, "frequency"),
    "omega_list": ("floats", "comma-separated frequencies"),
    "b_list": ("floats", "comma-separated increasing values of u(0)"),
    "grid_n": (int, "grid nodes (>= 64)"),
    "r_min": (float, "inner radius"),
    "r_max": (float, "outer radius"),
    "tol": (float, "tolerance (meaning depends on the subcommand)"),
    "out": (str, "output path; stdout when omitted"),
    "format": (str, "csv or json"),
    "input": ("strs", "report inputs: files or directories"),
    "workers": (int, "process pool size for sweeps"),
}
# settings that do not change the data
_UNHASHED = ("out", "format", "workers")

_DEFAULTS = {
    "constants": {},
    "green": {"grid_n": 4000, "r_min": 1e-6, "r_max": 12.0},
    "ground": {"grid_n": 4000, "tol": 1e-4},
    "sweep-omega": {"grid_n": 4000, "tol": 1e-4},
    "singular": {"grid_n": 4000, "r_min": 1e-3},
    "sweep-b": {"grid_n": 64},
    "morse": {"r_min": 1e-2, "tol": 1e-8},
    "kummer": {"grid_n": 2000, "r_min": 1e-6, "r_max": 10.0, "tol": 1e-11},
    "report": {},
}
_D_RANGE = {"constants": (3, None), "green": (3, 6), "ground": (3, None),
            "sweep-omega": (3, None), "singular": (5, None),
            "sweep-b": (5, None), "morse": (5, None), "kummer": (5, None)}
_REQUIRED = {"ground": ("omega",), "sweep-omega": ("omega_list",)}


@dataclass(frozen=True)
class RunConfig:
    """Validated settings of one invocation."""

    subcommand: str
    values: dict

    def __getattr__(self, key):
        if key in _FIELDS:
            return self.values.get(key)
        raise AttributeError(key)

    @property
    def hashed(self) -> dict:
        return {k: v for k, v in sorted(self.values.items())
                if k not in _UNHASHED}


def _coerce(key, value):
    kind = _FIELDS[key][0]
    try:
        if kind == "floats":
            if isinstance(value, str):
                value = [x for x in value.split(",") if x.strip()]
            out = [float(x) for x in value]
            if not out:
                raise ValueError("empty list")
            return out
        if kind == "strs":
            return [str(x) for x in ([value] if isinstance(value, str)
                                     else value)]
        if kind is int:
            if isinstance(value, bool) or float(value) != int(float(value)):
                raise ValueError("not an integer")
            return int(float(value))
        if kind is float:
            if isinstance(value, bool):
                raise ValueError("not a number")
            return float(value)
        return str(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{key}: {exc}") from exc


def make_config(subcommand: str, file_values: dict | None = None,
                flag_values: dict | None = None) -> RunConfig:
    """Merge defaults, config file and flags (in increasing priority)."""
    if subcommand not in SUBCOMMANDS:
        raise ConfigError(f"unknown subcommand {subcommand!r}")
    values = dict(_DEFAULTS[subcommand])
    values["format"] = "csv"
    for src in (file_values or {}, flag_values or {}):
        for k, v in src.items():
            if k not in _FIELDS:
                raise ConfigError(f"unknown config key {k!r}")
            if v is not None:
                values[k] = _coerce(k, v)
    cfg = RunConfig(subcommand, values)
    validate(cfg)
    return cfg


def validate(cfg: RunConfig) -> None:
    v = cfg.values
    sub = cfg.subcommand
    if v["format"] not in ("csv", "json"):
        raise ConfigError("format must be csv or json")
    if sub != "report":
        if "d" not in v:
            raise ConfigError(f"{sub} needs --d")
        lo, hi = _D_RANGE[sub]
        if v["d"] < lo or (hi is not None and v["d"] > hi):
            raise ConfigError(f"{sub}: d={v['d']} outside [{lo}, {hi or 'inf'}]")
    elif not v.get("input"):
        raise ConfigError("report needs at least one --input")
    for k in _REQUIRED.get(sub, ()):
        if k not in v:
            raise ConfigError(f"{sub} needs --{k.replace('_', '-')}")
    if "grid_n" in v and v["grid_n"] < 64:
        raise ConfigError("grid_n must be >= 64")
    if "tol" in v and not v["tol"] > 0.0:
        raise ConfigError("tol must be positive")
    for k in ("r_min", "r_max"):
        if k in v and not v[k] > 0.0:
            raise ConfigError(f"{k} must be positive")
    if "r_min" in v and "r_max" in v and not v["r_min"] < v["r_max"]:
        raise ConfigError("need r_min < r_max")
    if "b_list" in v:
        b = v["b_list"]
        if any(x <= 0 for x in b) or any(y <= x for x, y in zip(b, b[1:])):
            raise ConfigError("b_list must be positive and increasing")
    if "workers" in v and v["workers"] < 1:
        raise ConfigError("workers must be >= 1")


# -- subcommands --------------------------------------------------------------------

class _Failed(Exception):
    """A table was produced but some rows record a numerical failure."""

    def __init__(self, table, message):
        super().__init__(message)
        self.table = table


def _table(cfg, columns, rows):
    return Table(cfg.subcommand, cfg.hashed, tuple(columns),
                 tuple(tuple(r) for r in rows), __version__)


def run_constants(cfg):
    d = cfg.d
    bc = bubble_constants(d)
    rows = []
    checks = {"norm_L2_sq": (d, 2.0), "critical_norm": (d, 2.0 * d / (d - 2.0)),
              "norm_L3_cubed_d4": (4, 3.0), "norm_L73_d5": (5, 7.0 / 3.0)}
    for name in ("norm_L2_sq", "norm_xU_sq", "norm_L3_cubed_d4", "norm_L73_d5",
                 "critical_norm", "grad_norm_sq", "sobolev_S"):
        val = float(getattr(bc, name))
        quad = err = math.nan
        if name in checks and math.isfinite(val):
            quad = quadrature_power_norm(*checks[name])
            err = abs(quad / val - 1.0)
        rows.append((d, name, val, quad, err))
    return _table(cfg, ("d", "quantity", "value", "quadrature",
                        "quad_rel_error"), rows)


def _green(d, cfg=None):
    n = cfg.grid_n if cfg else 4000
    r_min = cfg.r_min if cfg else 1e-6
    r_max = cfg.r_max if cfg else 12.0
    return solve_green(d, RadialGrid.log(r_min, r_max, n, d))


def run_green(cfg):
    g = _green(cfg.d, cfg)
    row = (cfg.d, g.omega_star, g.H_at_zero, g.G_L2_sq, g.log_coeff_d6,
           g.decay_sigma, g.matched_H0, bool(np.all(g.G.values > 0.0)))
    return _table(cfg, ("d", "omega_star", "H_at_zero", "G_L2_sq",
                        "log_coeff_d6", "decay_sigma", "matched_H0",
                        "G_positive"), [row])


_GROUND_COLS = ("d", "omega", "status", "b", "eps", "I_omega", "S_minus_I",
                "ode_residual", "decay_certified", "energy_route_mismatch")


def run_ground(cfg):
    d, w = cfg.d, cfg.omega
    try:
        sol = find_ground_state(d, w, n=cfg.grid_n)
    except NoSolution as exc:
        nan = math.nan
        t = _table(cfg, _GROUND_COLS,
                   [(d, w, "no_solution", nan, nan, nan, nan, nan, False, nan)])
        raise _Failed(t, f"NoSolution: {exc}") from exc
    e = energy_routes(sol)
    row = (d, sol.params.omega, "ok", sol.b, extract_eps(sol), e.via_norm,
           sobolev_constant(d) - e.via_norm, sol.ode_residual,
           sol.decay_certified, e.mismatch)
    return _table(cfg, _GROUND_COLS, [row])


_SWEEP_COLS = ("d", "omega", "status", "b", "eps", "eps_fit", "I_omega",
               "S_minus_I", "eps_law", "ratio_to_law", "gap_law",
               "gap_ratio_to_law", "eps_matched_ratio", "gap_matched_ratio",
               "remainder_norm", "ode_residual", "decay_certified",
               "energy_route_mismatch")


def run_sweep_omega(cfg):
    d = cfg.d
    green = _green(d) if d <= 6 else None
    eps_law, gap_law = target_constants(d, green)
    if d != 4:
        eps_m, gap_m = matched_constants(d, green)
    else:
        eps_m = gap_m = None
    S = sobolev_constant(d)
    nan = math.nan
    rows, failures = [], []
    for w in cfg.omega_list:
        try:
            sol = find_ground_state(d, w, n=cfg.grid_n)
        except NumericalFailure as exc:
            failures.append(f"omega={w:g}: {type(exc).__name__}: {exc}")
            rows.append((d, w, "no_solution") + (nan,) * 13 + (False, nan))
            continue
        eps = extract_eps(sol)
        e = energy_routes(sol)
        gap = S - e.via_norm
        try:
            rem = remainder_norm(sol, green, eps)
        except GPLabError:
            rem = nan
        el, gl = eps_law(w), gap_law(w)
        rows.append((
            d, sol.params.omega,
            "ok" if e.mismatch <= cfg.tol else "unconverged",
            sol.b, eps, fit_eps(sol), e.via_norm, gap, el, eps / el, gl,
            gap / gl, eps / eps_m(w) if eps_m else nan,
            gap / gap_m(w) if gap_m else nan, rem, sol.ode_residual,
            sol.decay_certified, e.mismatch))
    t = _table(cfg, _SWEEP_COLS, rows)
    if failures:
        raise _Failed(t, "; ".join(failures))
    return t


def run_singular(cfg):
    d, r0 = cfg.d, cfg.r_min
    s = find_singular(d, r0=r0, n=cfg.grid_n)
    s2 = find_singular(d, r0=0.5 * r0, n=cfg.grid_n)
    F = s.profile.r * s.profile.values
    row = (d, s.omega_inf, s2.omega_inf, r0, s.bracket[0], s.bracket[1],
           float(F.max()), bool(np.all(np.diff(F) < 0.0)), math.sqrt(d - 3.0),
           s.ode_residual, s.decay_certified)
    return _table(cfg, ("d", "omega_inf", "omega_inf_r0_half", "r0",
                        "bracket_lo", "bracket_hi", "F_max", "F_decreasing",
                        "F_bound", "ode_residual", "decay_certified"), [row])


def run_sweep_b(cfg):
    d = cfg.d
    b = cfg.b_list or list(np.geomspace(10.0, 1e4, 40))
    w_inf = find_singular(d).omega_inf
    kw = {"n": cfg.grid_n}
    if cfg.r_max:
        kw["r_max"] = cfg.r_max
    entries = sweep_b(d, b, workers=cfg.workers, **kw)
    rows = [(d, e.b, e.omega_b, w_inf, e.omega_b - w_inf, e.ok)
            for e in entries]
    t = _table(cfg, ("d", "b", "omega_b", "omega_inf", "delta", "ok"), rows)
    bad = [f"b={e.b:g}: {e.error}" for e in entries if not e.ok]
    if bad:
        raise _Failed(t, "; ".join(bad))
    return t


def run_morse(cfg):
    d = cfg.d
    sing = find_singular(d, r0=1e-4)
    kw = {"r_min": cfg.r_min}
    if cfg.r_max:
        kw["r_max"] = cfg.r_max
    if cfg.grid_n:
        rmax = cfg.r_max or math.sqrt(sing.omega_inf) + 10.0
        kw["h"] = math.log(rmax / cfg.r_min) / (cfg.grid_n - 1)
    policy = RefinementPolicy(**kw)
    rep = morse_index(sing, policy, tol=cfg.tol)
    nan = math.nan
    if d >= 13:
        t1, t2, verdict = nondegeneracy_gap(rep)
        terr = float(max(rep.tau_error[0], rep.tau_error[1]))
    else:
        t1 = t2 = terr = nan
        verdict = "n/a"
    traces = [("main", rep.refinement_trace)]
    if d <= 12:
        halving = RefinementPolicy(**{**kw, "factor": 2.0})
        traces.append(("halving", morse_index(sing, halving).refinement_trace))
    rows = []
    for name, trace in traces:
        for k, (rmin, rmax, n, c) in enumerate(trace):
            rows.append((d, rep.omega_inf, name, k, rmin, rmax, n, c,
                         float(rep.morse_index), rep.unbounded, t1, t2, terr,
                         verdict))
    return _table(cfg, ("d", "omega_inf", "policy", "step", "r_min", "r_max",
                        "n", "count", "morse_index", "unbounded", "tau1",
                        "tau2", "tau_error", "verdict"), rows)


def run_kummer(cfg):
    d = cfg.d
    ks = kummer_spec(d)
    nan = math.nan
    cols = ("d", "n", "sigma", "fd_sigma", "rel_error", "residual", "l_plus",
            "l_minus", "alpha_osc", "beta_osc")
    if ks.sigma.size == 0:
        return _table(cfg, cols, [(d, -1, nan, nan, nan, nan, nan, nan,
                                   ks.alpha_osc, ks.beta_osc)])
    fd = limiting_eigenvalues(d, 4, cfg.r_min, cfg.r_max, cfg.grid_n,
                              tol=cfg.tol)
    samples = np.geomspace(1e-3, 8.0, 400)
    rows = [(d, n, float(ks.sigma[n]), float(fd[n]),
             float(fd[n] / ks.sigma[n] - 1.0),
             eigenfunction_residual(d, n, samples), ks.l_plus, ks.l_minus,
             ks.alpha_osc, ks.beta_osc) for n in range(4)]
    return _table(cfg, cols, rows)


def _expand_inputs(paths):
    out = []
    for p in paths:
        if os.path.isdir(p):
            out.extend(sorted(glob.glob(os.path.join(p, "*.csv"))
                              + glob.glob(os.path.join(p, "*.json"))))
        else:
            out.append(p)
    return out


def run_report(cfg):
    paths = _expand_inputs(cfg.input)
    if not paths:
        raise ConfigError("no input tables found")
    out = os.path.abspath(cfg.out) if cfg.out else None
    tables = [read_table(p) for p in paths if os.path.abspath(p) != out]
    return _table(cfg, REPORT_COLUMNS, build_report(tables))


RUNNERS = {"constants": run_constants, "green": run_green,
           "ground": run_ground, "sweep-omega": run_sweep_omega,
           "singular": run_singular, "sweep-b": run_sweep_b,
           "morse": run_morse, "kummer": run_kummer, "report": run_report}


# -- entry point --------------------------------------------------------------------

def _parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with default settings")
    for key, (kind, helptext) in _FIELDS.items():
        flag = "--" + key.replace("_", "-")
        if kind == "strs":
            common.add_argument(flag, dest=key, action="append",
                                help=helptext)
        else:
            common.add_argument(flag, dest=key, help=helptext)
    p = argparse.ArgumentParser(prog="gplab", description=__doc__)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="subcommand", required=True)
    for name in SUBCOMMANDS:
        sub.add_parser(name, parents=[common])
    return p


def _load_config_file(path):
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config file must hold a JSON object")
    return doc


def _emit(cfg, table):
    text = render(table, cfg.format)
    if cfg.out:
        write_atomic(cfg.out, text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    flags = {k: getattr(args, k) for k in _FIELDS}
    try:
        file_values = _load_config_file(args.config) if args.config else {}
        cfg = make_config(args.subcommand, file_values, flags)
    except ConfigError as exc:
        print(f"gplab: config error: {exc}", file=sys.stderr)
        return 2
    try:
        table = RUNNERS[cfg.subcommand](cfg)
    except _Failed as exc:
        _emit(cfg, exc.table)
        print(f"gplab: numerical failure: {exc}", file=sys.stderr)
        return 3
    except (ConfigError, DomainError) as exc:
        print(f"gplab: config error: {exc}", file=sys.stderr)
        return 2
    except NumericalFailure as exc:
        print(f"gplab: numerical failure: {type(exc).__name__}: {exc}",
              file=sys.stderr)
        return 3
    _emit(cfg, table)
    return 0


if __name__ == "__main__":
    sys.exit(main())
