#!/usr/bin/env python
"""Timing comparison: compiled kernels vs the pure-python fallback.

Each workload is built once and run under both backends by rebinding the
`kernels` attribute of the modules that dispatch into the hot loops.

    python benchmarks/bench_backends.py [--quick]
"""

from __future__ import annotations

import argparse
import time
from contextlib import contextmanager

import neqsolve._pykernels as pure_kernels
from neqsolve import modlinalg, oracle, semilattice
from neqsolve.abelian import solve_instance
from neqsolve.groups import classify, parse_descriptor
from neqsolve.oracle import GenParams, brute_solve_group, random_instance, witness_group
from neqsolve.semilattice import FiniteSemilattice, solve_finite
from neqsolve.terms import GROUP, SEMILATTICE, flatten, linearize_group

try:
    import neqsolve._ckernels as c_kernels
except ImportError:
    c_kernels = None

DISPATCHING_MODULES = (modlinalg, oracle, semilattice)


@contextmanager
def use_kernels(kern):
    saved = [m.kernels for m in DISPATCHING_MODULES]
    for m in DISPATCHING_MODULES:
        m.kernels = kern
    try:
        yield
    finally:
        for m, old in zip(DISPATCHING_MODULES, saved):
            m.kernels = old


def workload_howell(scale: int):
    """Row-reduction heavy: solve a large tractable instance (the RowBasis
    insert loop dominates)."""
    d = parse_descriptor("2^2:1 + 2^1:w")
    params = GenParams(
        variables=scale, equations=5 * scale, disequalities=scale // 10, seed=11, depth=1
    )
    inst = random_instance(params, GROUP)

    def run():
        solve_instance(d, inst, budget=10**9)

    return run


def workload_group_search(count: int):
    """Backtracking search: brute-force verdicts over Z_6 (+) Z_3^4.

    A few seeds need astronomically deep refutations, so the budget is kept
    small; capped runs still do identical work under both backends."""
    d = parse_descriptor("3^1:w + 2^1:1")
    cls = classify(d)
    jobs = []
    for seed in range(count):
        params = GenParams(variables=5, equations=6, disequalities=4, seed=seed, depth=2)
        ab = linearize_group(flatten(random_instance(params, GROUP)))
        jobs.append((witness_group(cls, len(ab.disequalities)), ab))

    def run():
        for group, ab in jobs:
            brute_solve_group(group, ab, budget=10**6)

    return run


def workload_lattice_search(count: int):
    """Semilattice search over the 128-element subset lattice."""
    s = FiniteSemilattice.subsets(7)
    jobs = []
    for seed in range(count):
        params = GenParams(variables=3, equations=3, disequalities=2, seed=seed, depth=2)
        jobs.append(flatten(random_instance(params, SEMILATTICE)))

    def run():
        for flat in jobs:
            solve_finite(s, flat, budget=10**6)

    return run


def time_run(run) -> float:
    t0 = time.perf_counter()
    run()
    return time.perf_counter() - t0


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--quick", action="store_true", help="smaller workloads")
    args = ap.parse_args()

    scale = 60 if args.quick else 200
    searches = 8 if args.quick else 30
    lattices = 30 if args.quick else 120

    workloads = [
        ("howell-inserts", workload_howell(scale)),
        ("group-search", workload_group_search(searches)),
        ("lattice-search", workload_lattice_search(lattices)),
    ]

    if c_kernels is None:
        print("compiled kernels unavailable; timing pure backend only")
    print(f"{'workload':<18} {'pure':>10} {'compiled':>10} {'speedup':>9}")
    for name, run in workloads:
        with use_kernels(pure_kernels):
            t_pure = time_run(run)
        if c_kernels is not None:
            with use_kernels(c_kernels):
                t_comp = time_run(run)
            print(f"{name:<18} {t_pure:>9.3f}s {t_comp:>9.3f}s {t_pure / t_comp:>8.1f}x")
        else:
            print(f"{name:<18} {t_pure:>9.3f}s {'-':>10} {'-':>9}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
