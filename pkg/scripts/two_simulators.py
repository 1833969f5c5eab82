"""Compare the forward and Poisson-representation simulators: p-values per seed and timings.

    python3 scripts/two_simulators.py [--theta 1] [--n 100000] [--seeds 20]
"""
from __future__ import annotations

import argparse
import time

from bipoisson.kernel import ProcessParams
from bipoisson.trajectory import sample_fdd, simulate_by_representation, simulate_forward
from bipoisson.verify import ALPHA, check_two_simulators, make_rng


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--theta", type=float, default=1.0)
    ap.add_argument("--n", type=int, default=100_000)
    ap.add_argument("--seeds", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    p = ProcessParams(args.theta)

    rep = check_two_simulators(p, seed=args.seed, n=args.n, n_seeds=args.seeds)
    pv = rep.diagnostics["p_values"]
    print(f"joint law of (Z_0.5, Z_2), n = {args.n} per simulator")
    for i, v in enumerate(pv):
        print(f"  seed {i:2d}: p = {v:.4f}{'  *' if v <= ALPHA else ''}")
    print(f"{sum(v <= ALPHA for v in pv)} of {len(pv)} at or below {ALPHA} -> {'pass' if rep.passed else 'fail'}")

    for name, method in (("forward", "forward"), ("representation", "representation")):
        t0 = time.perf_counter()
        sample_fdd(p, (0.5, 2.0), args.n, make_rng(args.seed, 1), method=method)
        print(f"fdd sampling, {name:>14}: {time.perf_counter() - t0:.3f} s")
    for name, sim in (("forward", simulate_forward), ("representation", simulate_by_representation)):
        t0 = time.perf_counter()
        tr = sim(p, 3.0, make_rng(args.seed, 2))
        print(f"one path (delta 1e-6), {name:>14}: {time.perf_counter() - t0:.3f} s, "
              f"{len(tr.birth_times)} births, {len(tr.death_times)} deaths")


if __name__ == "__main__":
    main()
