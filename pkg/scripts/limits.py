"""Gap between the exact joint MGF and its Poisson and Gaussian limits along shrinking parameters.

    python3 scripts/limits.py

The Poisson table evaluates Z at times t * eps^2 with theta = eps; the
Gaussian table evaluates X at fixed times as theta -> 0. The last column is
the ratio of successive gaps over the ratio of successive parameters, an
empirical convergence order.
"""
from __future__ import annotations

import math

from bipoisson.mgf import JointMgfQuery, gaussian_limit_log_mgf, joint_mgf, poisson_limit_log_mgf
from bipoisson.verify import BROWNIAN_LIMIT_TIMES, BROWNIAN_LIMIT_U, POISSON_LIMIT_TIMES, POISSON_LIMIT_U

GRID = (0.3, 0.1, 0.03, 0.01, 0.003, 0.001)


def table(name, grid, gap_of):
    print(f"\n{name}")
    print(f"{'param':>8} {'gap':>12} {'order':>7}")
    prev = None
    for g in grid:
        gap = gap_of(g)
        order = math.log(prev[1] / gap) / math.log(prev[0] / g) if prev else float("nan")
        print(f"{g:8.3g} {gap:12.4e} {order:7.2f}")
        prev = (g, gap)


def main():
    lim_p = math.exp(poisson_limit_log_mgf(POISSON_LIMIT_TIMES, POISSON_LIMIT_U))
    table("Poisson limit, theta = eps, times scaled by eps^2", GRID, lambda e: abs(
        joint_mgf(JointMgfQuery(tuple(t * e * e for t in POISSON_LIMIT_TIMES), POISSON_LIMIT_U, e, space="z")) - lim_p))
    lim_g = math.exp(gaussian_limit_log_mgf(BROWNIAN_LIMIT_TIMES, BROWNIAN_LIMIT_U))
    table("Gaussian limit, theta -> 0", GRID, lambda th: abs(
        joint_mgf(JointMgfQuery(BROWNIAN_LIMIT_TIMES, BROWNIAN_LIMIT_U, th)) - lim_g))


if __name__ == "__main__":
    main()
