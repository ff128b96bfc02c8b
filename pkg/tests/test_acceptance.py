"""Acceptance criteria, each checked at its stated tolerance.

The full command-line pipeline runs once into a temporary directory; the
``report`` subcommand's checks then decide each criterion. A one-line
pass/fail summary per criterion is printed at the end of the session.
"""
import math
import os

import pytest

from gplab.cli import main
from gplab.report import build_report
from gplab.tabular import read_table

D7_OMEGAS = "0.4,0.2,0.1,0.05,0.025,0.0125,0.00625"
D3_OMEGAS = "1.2,1.1,1.05,1.025"
WORKERS = str(min(8, os.cpu_count() or 1))

PIPELINE = (
    [("kummer", d, []) for d in (13, 16, 20)]
    + [("morse", d, []) for d in (16, 20, 13, 14, 15, 5, 8, 12)]
    + [("singular", d, []) for d in (8, 13, 16)]
    + [("sweep-b", d, ["--workers", WORKERS]) for d in (8, 16)]
    + [("sweep-omega", 7, ["--omega-list", D7_OMEGAS]),
       ("sweep-omega", 3, ["--omega-list", D3_OMEGAS])]
    + [("green", d, []) for d in (3, 4, 5, 6)]
    + [("ground", 5, ["--omega", "5.5"]), ("ground", 3, ["--omega", "0.5"]),
       ("ground", 5, ["--omega", "-1"])]
    + [("constants", 7, [])]
)

CRITERIA = {
    1: "limiting eigenvalues match the closed-form spectrum",
    2: "Morse index: 1 for d>=16, stable for 13-15, unbounded for d<=12",
    3: "singular solution invariants and start-radius robustness",
    4: "omega_b oscillates about omega_inf for d=8, monotone for d=16",
    5: "concentration and energy laws for d>=7",
    6: "concentration law for d=3 and vanishing regular part",
    7: "Green function regular parts for d=4,5,6",
    8: "nonexistence outside the admissible frequency range",
    9: "energy level ordering 0 < I < S, S-I decreasing",
    10: "quadrature, eigenfunction and Sturm count oracles",
    11: "nondegeneracy gap for d=16",
}

SUMMARY = []


@pytest.fixture(scope="session")
def report(tmp_path_factory):
    out = tmp_path_factory.mktemp("acceptance")
    for k, (sub, d, extra) in enumerate(PIPELINE):
        code = main([sub, "--d", str(d), *extra,
                     "--out", str(out / f"{k:02d}_{sub}_{d}.csv")])
        # the nonexistence runs exit 3 by design
        assert code == (3 if sub == "ground" else 0), (sub, d, code)
    tables = [read_table(str(p)) for p in sorted(out.glob("*.csv"))]
    return {row[0]: row for row in build_report(tables)}


@pytest.mark.parametrize("criterion", sorted(CRITERIA))
def test_criterion(report, criterion):
    _, status, measured, tol, detail = report[criterion]
    m = f"{measured:.6g}" if isinstance(measured, float) and \
        math.isfinite(measured) else str(measured)
    SUMMARY.append(f"criterion {criterion:>2} {status.upper():<7} "
                   f"{CRITERIA[criterion]} | measured {m}, tol {tol}; {detail}")
    assert status == "pass", detail
