"""Compiled vs pure-Python kernels: scalar evaluation and full pairings.

    python3 benchmarks/bench_backends.py [--repeat N]

Prints one line per workload with the best-of-N time for each backend and
the speed-up.  Results are also checked for bit-identity.
"""

import argparse
import random
import time

from cothdelta import _backend
from cothdelta import _purepy as K
from cothdelta.analysis import pair, verify_identity
from cothdelta.testfn import bump, gaussian, hermite_gaussian


def scalar_workload(n=20000, seed=7):
    rng = random.Random(seed)
    pts = [(rng.uniform(-30, 30), 10 ** rng.uniform(-6, -0.2)) for _ in range(n)]
    codes = (K.COTH, K.DCOTH, K.F, K.G, K.DF, K.DG, K.DIFF, K.DDIFF)

    def run():
        fam = _backend.kernels.family
        return [fam(c, x, e) for x, e in pts for c in codes]

    return run


def pairing_workload():
    phis = (gaussian(0, 1), bump(0, 3), hermite_gaussian(0, 1, 2))

    def run():
        return [pair(f, phi).limit for phi in phis for f in ("dcoth_eps", "df_eps", "dg_eps")]

    return run


def identity_workload():
    phis = (gaussian(0, 1), gaussian(3, 0.5), bump(0, 3), hermite_gaussian(0, 1, 2))

    def run():
        return [verify_identity(phi).route_direct for phi in phis]

    return run


def best_of(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if "compiled" not in _backend.available():
        print("compiled kernels not built; nothing to compare")
        return 1
    workloads = (
        ("scalar families (160k calls)", scalar_workload()),
        ("9 pairings", pairing_workload()),
        ("verify_identity x4", identity_workload()),
    )
    print(f"{'workload':32s} {'compiled':>11s} {'python':>11s} {'speed-up':>9s}  identical")
    try:
        for label, fn in workloads:
            _backend.use("compiled")
            tc, rc = best_of(fn, args.repeat)
            _backend.use("python")
            tp, rp = best_of(fn, args.repeat)
            print(f"{label:32s} {tc:10.4f}s {tp:10.4f}s {tp / tc:8.1f}x  {rc == rp}")
    finally:
        _backend.use("compiled")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
