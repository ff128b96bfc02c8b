"""Compiled vs pure-Python kernels.

Usage::

    python3 benchmarks/bench_kernels.py [--repeat N]

Times one ground-state shot with ``integrate_radial`` and a batch of Sturm
counts on a 20000-node operator, on both backends, and checks that the
results agree.
"""
import argparse
import timeit

import numpy as np

from gplab.numkernel import _kernels_py

try:
    from gplab.numkernel import _kernels as compiled
except ImportError:  # extension not built
    compiled = None


def shot_args():
    d, b = 5.0, 7.6
    nodes = np.geomspace(1e-3, 6.0, 2000)
    return (d, 10.0 / 3.0, 3.0, 1.0, 1e-6, b, 0.0, nodes, 1e-11,
            1e-14 * b, 1e-14 * b, 10.0 * b, True)


def sturm_args(n=20000):
    rng = np.random.default_rng(0)
    diag = 2.0 + rng.random(n)
    off = -np.ones(n - 1)
    return diag, off, np.ones(n), np.linspace(0.5, 4.5, 16)


def best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if compiled is None:
        print("compiled extension not built; nothing to compare")
        return
    s, t = shot_args(), sturm_args()
    cases = {
        "integrate_radial": lambda k: k.integrate_radial(*s),
        "sturm_count_many": lambda k: k.sturm_count_many(*t),
    }
    print(f"{'kernel':<18} {'python [s]':>11} {'cython [s]':>11} {'speedup':>8}")
    for name, call in cases.items():
        a, b = call(_kernels_py), call(compiled)
        same = (np.allclose(a[0], b[0], rtol=1e-12, atol=0)
                if name == "integrate_radial"
                else np.array_equal(a[0], b[0]))
        if not same:
            raise SystemExit(f"{name}: backends disagree")
        tp = best(lambda: call(_kernels_py), args.repeat)
        tc = best(lambda: call(compiled), args.repeat)
        print(f"{name:<18} {tp:>11.4f} {tc:>11.5f} {tp / tc:>7.0f}x")


if __name__ == "__main__":
    main()
