"""Exact finite-dimensional MGFs by backward recursion through conditional MGFs.

For ordered times ``0 = t_0 < t_1 < ... < t_n`` every conditional MGF of the
process is log-linear in the conditioning state, ``log E[e^{v Z_t} | Z_s = z]
= c0 + c1 z``. Absorbing the last time point therefore multiplies by a
constant ``A = exp(c0)`` and shifts the coefficient of the previous point by
``c1``; after n steps only Z_0 = 0 remains.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dists import DivergenceError
from .kernel import ProcessParams, kernel_case, mgf_coefficients
from .trajectory import affine


@dataclass(frozen=True)
class JointMgfQuery:
    """E exp(sum_j u_j W_{t_j}) with W = X (``space="x"``) or W = Z (``space="z"``)."""

    times: tuple
    u: tuple
    theta: float
    space: str = "x"

    def __post_init__(self):
        times = tuple(float(t) for t in self.times)
        u = tuple(float(v) for v in self.u)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "u", u)
        if len(times) != len(u) or not times:
            raise ValueError("times and u must be nonempty and of equal length")
        if times[0] <= 0 or any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError(f"times must satisfy 0 < t_1 < ... < t_n, got {times}")
        if self.space not in ("x", "z"):
            raise ValueError(f"space must be 'x' or 'z', got {self.space!r}")


@dataclass(frozen=True)
class RecursionStep:
    """One absorption step s -> t.

    ``log_A`` and ``u_prime`` are the X-space constant and the coefficient
    added to X_s; ``c0``/``c1`` the same step in Z coordinates.
    """

    s: float
    t: float
    case: str
    v: float
    c0: float
    c1: float
    log_A: float
    u_prime: float


def joint_log_mgf_steps(query: JointMgfQuery):
    params = ProcessParams(query.theta)
    times = (0.0,) + query.times
    if query.space == "x":
        coef = [0.0] + [u * affine(params, t)[0] for u, t in zip(query.u, query.times)]
        log_total = sum(u * affine(params, t)[1] for u, t in zip(query.u, query.times))
        xu = [0.0] + list(query.u)
    else:
        coef = [0.0] + list(query.u)
        log_total = 0.0
        xu = None
    steps = []
    for n in range(len(times) - 1, 0, -1):
        s, t = times[n - 1], times[n]
        try:
            c0, c1 = mgf_coefficients(params, s, t, coef[n])
        except DivergenceError as err:
            raise DivergenceError(f"joint MGF step {n} ({s} -> {t}): {err}", err.bound) from err
        log_total += c0
        coef[n - 1] += c1
        if xu is not None:
            a_s, b_s = affine(params, s)
            b_t = affine(params, t)[1]
            log_A = xu[n] * b_t + c0 - c1 * b_s / a_s
            u_prime = c1 / a_s
            xu[n - 1] += u_prime
        else:
            log_A, u_prime = c0, c1
        steps.append(RecursionStep(s, t, kernel_case(s, t), coef[n], c0, c1, log_A, u_prime))
    return log_total, steps


def joint_log_mgf(query: JointMgfQuery) -> float:
    return joint_log_mgf_steps(query)[0]


def joint_mgf(query: JointMgfQuery) -> float:
    return math.exp(joint_log_mgf(query))


def poisson_limit_log_mgf(times, u) -> float:
    """log E exp(sum_j u_j N_{t_j}) for a unit-rate Poisson process N."""
    times = np.asarray(times, dtype=float)
    tail = np.cumsum(np.asarray(u, dtype=float)[::-1])[::-1]
    return float(np.sum(np.diff(times, prepend=0.0) * np.expm1(tail)))


def gaussian_limit_log_mgf(times, u) -> float:
    """log E exp(sum_j u_j B_{t_j}) for a standard Brownian motion B."""
    times = np.asarray(times, dtype=float)
    tail = np.cumsum(np.asarray(u, dtype=float)[::-1])[::-1]
    return float(0.5 * np.sum(np.diff(times, prepend=0.0) * tail**2))
