"""Acceptance summary assembled from the tables of earlier runs.

Each check reads the tables it needs, keyed by ``(subcommand, d)``, and
returns a row ``(criterion, status, measured, tolerance, detail)`` with
status ``pass``, ``fail`` or ``skipped``.
"""
from __future__ import annotations

import math

import numpy as np

from .bubble import sobolev_constant
from .numkernel.linalg import TridiagonalOperator, count_eigs_below
from .shooting import sign_changes
from .tabular import Table

COLUMNS = ("criterion", "status", "measured", "tolerance", "detail")


def index_tables(tables) -> dict:
    """Last table per ``(subcommand, d)`` in input order."""
    out = {}
    for t in tables:
        out[(t.subcommand, t.config.get("d"))] = t
    return out


def _row(c, ok, measured, tol, detail=""):
    return (c, "pass" if ok else "fail", measured, tol, detail)


def _skip(c, missing):
    return (c, "skipped", math.nan, "", "missing " + " ".join(
        f"{s}:d={d}" for s, d in missing))


def _need(idx, c, keys):
    missing = [k for k in keys if k not in idx]
    return _skip(c, missing) if missing else None


def check_kummer(idx):
    keys = [("kummer", d) for d in (13, 16, 20)]
    if (s := _need(idx, 1, keys)):
        return s
    worst = max(abs(r["rel_error"]) for k in keys for r in idx[k].records()
                if r["n"] <= 3)
    return _row(1, worst <= 5e-3, worst, 5e-3, "max |FD/sigma - 1|, n<=3")


def check_morse(idx):
    dims = (16, 20, 13, 14, 15, 5, 8, 12)
    if (s := _need(idx, 2, [("morse", d) for d in dims])):
        return s
    bad = []
    for d in dims:
        rec = idx[("morse", d)].records()
        if d >= 16:
            if rec[0]["morse_index"] != 1:
                bad.append(f"d={d}:index={rec[0]['morse_index']}")
        elif d >= 13:
            counts = {r["count"] for r in rec}
            if len(counts) != 1 or rec[0]["morse_index"] not in (1, 2):
                bad.append(f"d={d}:trace={sorted(counts)}")
        else:
            halv = [r["count"] for r in rec if r["policy"] == "halving"]
            if len(halv) < 4 or not all(b > a for a, b in zip(halv, halv[1:])):
                bad.append(f"d={d}:halving={halv}")
    return _row(2, not bad, len(bad), 0, "; ".join(bad) or "all dims")


def check_singular(idx):
    dims = (8, 13, 16)
    if (s := _need(idx, 3, [("singular", d) for d in dims])):
        return s
    bad, shift = [], 0.0
    for d in dims:
        r = idx[("singular", d)].records()[0]
        shift = max(shift, abs(r["omega_inf"] - r["omega_inf_r0_half"]))
        if not (d - 4 < r["omega_inf"] < d and r["F_decreasing"]
                and r["F_max"] <= math.sqrt(d - 3.0)
                and abs(r["omega_inf"] - r["omega_inf_r0_half"]) <= 1e-6):
            bad.append(f"d={d}")
    return _row(3, not bad, shift, 1e-6,
                "max r0-halving shift; " + (", ".join(bad) or "all dims"))


def check_oscillation(idx):
    if (s := _need(idx, 4, [("sweep-b", 8), ("sweep-b", 16)])):
        return s
    d8 = [x for x in idx[("sweep-b", 8)].column("delta")]
    d16 = np.array(idx[("sweep-b", 16)].column("delta"), dtype=float)
    n8, n16 = sign_changes(d8), sign_changes(d16)
    upper = np.abs(d16[d16.size // 2:])
    mono = bool(np.all(np.isfinite(upper)) and np.all(np.diff(upper) < 0.0))
    ok = n8 >= 3 and n16 == 0 and mono
    return _row(4, ok, n8, 3, f"d=8 sign changes {n8}; d=16 sign changes "
                f"{n16}, upper-half |delta| decreasing={mono}")


def _law_rows(idx, d):
    rec = idx[("sweep-omega", d)].records()
    return [r for r in rec if r["status"] == "ok"]


def check_law_d7(idx):
    if (s := _need(idx, 5, [("sweep-omega", 7)])):
        return s
    rec = _law_rows(idx, 7)
    if len(rec) < 4:
        return (5, "fail", math.nan, "", "fewer than 4 samples")
    ratios = np.array([r["ratio_to_law"] ** 2 for r in rec])
    mono = bool(np.all(np.diff(ratios) < 0) or np.all(np.diff(ratios) > 0))
    eps_ok = abs(ratios[-1] - 1.0) <= 0.05 and mono
    gap = rec[-1]["gap_ratio_to_law"]
    ok = eps_ok and abs(gap - 1.0) <= 0.10
    return _row(5, ok, float(ratios[-1]), 0.05,
                f"eps ratio at omega={rec[-1]['omega']:.6g}, monotone={mono}; "
                f"energy ratio {gap:.6g} (tol 0.10)")


def check_law_d3(idx):
    if (s := _need(idx, 6, [("sweep-omega", 3), ("green", 3)])):
        return s
    rec = _law_rows(idx, 3)
    if not rec:
        return (6, "fail", math.nan, "", "no samples")
    ratio = rec[-1]["ratio_to_law"]
    h0 = idx[("green", 3)].records()[0]["H_at_zero"]
    ok = abs(ratio - 1.0) <= 0.10 and abs(h0) <= 1e-4
    return _row(6, ok, ratio, 0.10,
                f"at omega-1={rec[-1]['omega'] - 1:.6g}; H(0)={h0:.3e} (tol 1e-4)")


def check_green(idx):
    if (s := _need(idx, 7, [("green", d) for d in (4, 5, 6)])):
        return s
    g = {d: idx[("green", d)].records()[0] for d in (4, 5, 6)}
    ok = g[4]["H_at_zero"] > 0 and g[5]["H_at_zero"] > 0
    ok &= abs(g[6]["log_coeff_d6"] + 0.25) <= 0.01
    ok &= all(g[d]["G_positive"] and g[d]["decay_sigma"] > 0 for d in g)
    return _row(7, ok, g[6]["log_coeff_d6"], 0.01,
                f"H(0): d4={g[4]['H_at_zero']:.6g}, d5={g[5]['H_at_zero']:.6g}")


def check_nonexistence(idx, tables):
    want = {(5, 5.5), (3, 0.5), (5, -1.0)}
    found = {}
    for t in tables:
        if t.subcommand == "ground":
            for r in t.records():
                found[(r["d"], float(r["omega"]))] = r["status"]
    missing = [k for k in want if k not in found]
    if missing:
        return (8, "skipped", math.nan, "", "missing ground runs " + " ".join(
            f"d={d},omega={w:g}" for d, w in sorted(missing)))
    bad = [k for k in want if found[k] != "no_solution"]
    return _row(8, not bad, len(bad), 0, "NoSolution for all three" if not bad
                else f"solutions reported for {sorted(bad)}")


def check_energy_order(tables):
    sweeps = [t for t in tables if t.subcommand == "sweep-omega"]
    if not sweeps:
        return (9, "skipped", math.nan, "", "missing sweep-omega runs")
    bad = []
    for t in sweeps:
        d = t.config["d"]
        S = sobolev_constant(d)
        rec = [r for r in t.records() if r["status"] == "ok"]
        gaps = np.array([S - r["I_omega"] for r in rec])
        if not (np.all(gaps > 0) and np.all([r["I_omega"] > 0 for r in rec])
                and np.all(np.diff(gaps) < 0)):
            bad.append(f"d={d}")
    return _row(9, not bad, len(bad), 0, ", ".join(bad) or
                f"{len(sweeps)} sweep(s) ordered")


def _sturm_oracle() -> bool:
    """Counts of three matrices with known spectra."""
    n = 7
    k = np.arange(1, n + 1)
    lap = 2.0 - 2.0 * np.cos(k * np.pi / (n + 1))
    T1 = TridiagonalOperator(np.full(n, 2.0), np.full(n - 1, -1.0))
    T2 = TridiagonalOperator(np.array([1.0, -2.0, 3.0]), np.zeros(2))
    T3 = TridiagonalOperator(np.array([2.0, 2.0]), np.array([1.0]))
    ok = all(count_eigs_below(T1, x) == int(np.sum(lap < x))
             for x in (0.1, 1.1, 2.1, 3.9))
    ok &= count_eigs_below(T2, 0.0) == 1 and count_eigs_below(T2, 2.0) == 2
    ok &= count_eigs_below(T3, 1.5) == 1 and count_eigs_below(T3, 3.5) == 2
    return bool(ok)


def check_oracles(idx, tables):
    consts = [t for t in tables if t.subcommand == "constants"]
    kum = [t for t in tables if t.subcommand == "kummer"]
    if not consts or not kum:
        return (10, "skipped", math.nan, "",
                "missing " + ", ".join(n for n, v in (("constants", consts),
                                                      ("kummer", kum)) if not v))
    quad = max(abs(r["quad_rel_error"]) for t in consts for r in t.records()
               if math.isfinite(r["quad_rel_error"]))
    res = max(r["residual"] for t in kum for r in t.records()
              if math.isfinite(r["residual"]))
    sturm = _sturm_oracle()
    ok = quad <= 1e-10 and res <= 1e-6 and sturm
    return _row(10, ok, quad, 1e-10,
                f"eigenfunction residual {res:.2e} (tol 1e-6); Sturm oracle "
                f"{'ok' if sturm else 'FAILED'}")


def check_nondegeneracy(idx):
    if (s := _need(idx, 11, [("morse", 16)])):
        return s
    r = idx[("morse", 16)].records()[0]
    ok = r["verdict"] == "nondegenerate"
    margin = min(r["omega_inf"] - r["tau1"], r["tau2"] - r["omega_inf"])
    return _row(11, ok, margin, 10.0 * r["tau_error"],
                f"tau1={r['tau1']:.10g} < omega_inf={r['omega_inf']:.10g} "
                f"< tau2={r['tau2']:.10g}")


def build_report(tables: list[Table]) -> list[tuple]:
    idx = index_tables(tables)
    return [check_kummer(idx), check_morse(idx), check_singular(idx),
            check_oscillation(idx), check_law_d7(idx), check_law_d3(idx),
            check_green(idx), check_nonexistence(idx, tables),
            check_energy_order(tables), check_oracles(idx, tables),
            check_nondegeneracy(idx)]
