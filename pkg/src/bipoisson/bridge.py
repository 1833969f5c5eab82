"""Two-sided conditional laws L(Z_t | Z_s, Z_u) and the moments they imply.

Four configurations have closed forms (``r0 = 1/theta**2``)::

    case1   s < t < u < 1   Z_t - Z_s ~ Binomial(Z_u - Z_s, (1-u)(t-s) / ((1-t)(u-s)))
    case2   s < t < 1 < u   Z_t - Z_s ~ NegBin(Z_s + Z_u + r0, (1-t)(u-s) / ((1-s)(u-t)))
    case3   s < 1 < t < u   Z_t - Z_u ~ NegBin(Z_s + Z_u + r0, (t-1)(u-s) / ((t-s)(u-1)))
    case4   1 < s < t < u   Z_t - Z_u ~ Binomial(Z_s - Z_u, (s-1)(u-t) / ((t-1)(u-s)))

plus the two boundary configurations where one endpoint sits at t = 1, both
Poisson (they are the continuity limits of cases 2 and 3)::

    to-one     s < t < u = 1   Z_t - Z_s ~ Poisson(Z_1 (t-s) / ((1-s)(1-t)))
    from-one   1 = s < t < u   Z_t - Z_u ~ Poisson(Z_1 (u-t) / ((t-1)(u-1)))

A bridge *to* t = 1 is not supported.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dists import Binomial, NegativeBinomial, Poisson, TransitionLaw
from .kernel import ProcessParams, check_state, kernel_log_mass
from .trajectory import affine, z_to_x

FROM_LEFT = "from-left"
FROM_RIGHT = "from-right"


class UnsupportedBridgeError(ValueError):
    """Bridge configuration without a closed form (interior time t = 1)."""


@dataclass(frozen=True)
class BridgeQuery:
    s: float
    t: float
    u: float
    z_s: object
    z_u: object

    def __post_init__(self):
        if not (0 <= self.s < self.t < self.u):
            raise ValueError(f"need 0 <= s < t < u, got {self.s}, {self.t}, {self.u}")
        check_state(self.s, self.z_s, "z_s")
        check_state(self.u, self.z_u, "z_u")
        if self.s == 0 and self.z_s != 0:
            raise ValueError("Z_0 = 0")
        if self.u < 1 and self.z_u < self.z_s:
            raise ValueError(f"birth phase cannot decrease: z_u={self.z_u} < z_s={self.z_s}")
        if self.s > 1 and self.z_u > self.z_s:
            raise ValueError(f"death phase cannot increase: z_u={self.z_u} > z_s={self.z_s}")


@dataclass(frozen=True)
class BridgeLaw:
    """Law of ``Z_t - offset``; offset is z_s (from-left) or z_u (from-right)."""

    law: TransitionLaw
    offset: object
    orientation: str
    case: str


def bridge_case(s: float, t: float, u: float) -> str:
    if t == 1:
        raise UnsupportedBridgeError("no closed-form bridge law at t = 1")
    if u < 1:
        return "case1"
    if t < 1:
        return "to-one" if u == 1 else "case2"
    if s < 1:
        return "case3"
    if s == 1:
        return "from-one"
    return "case4"


def bridge_law(params: ProcessParams, q: BridgeQuery) -> BridgeLaw:
    s, t, u, zs, zu = q.s, q.t, q.u, q.z_s, q.z_u
    case = bridge_case(s, t, u)
    r0 = params.r0
    if case == "case1":
        p = (1 - u) * (t - s) / ((1 - t) * (u - s))
        return BridgeLaw(Binomial(zu - zs, p), zs, FROM_LEFT, case)
    if case == "case2":
        p = (1 - t) * (u - s) / ((1 - s) * (u - t))
        return BridgeLaw(NegativeBinomial(zs + zu + r0, p), zs, FROM_LEFT, case)
    if case == "to-one":
        return BridgeLaw(Poisson(float(zu) * (t - s) / ((1 - s) * (1 - t))), zs, FROM_LEFT, case)
    if case == "case3":
        p = (t - 1) * (u - s) / ((t - s) * (u - 1))
        return BridgeLaw(NegativeBinomial(zs + zu + r0, p), zu, FROM_RIGHT, case)
    if case == "from-one":
        return BridgeLaw(Poisson(float(zs) * (u - t) / ((t - 1) * (u - 1))), zu, FROM_RIGHT, case)
    p = (s - 1) * (u - t) / ((t - 1) * (u - s))
    return BridgeLaw(Binomial(zs - zu, p), zu, FROM_RIGHT, case)


def bridge_log_mass(params: ProcessParams, q: BridgeQuery, z_t):
    """log P(Z_t = z_t | Z_s = z_s, Z_u = z_u); -inf off support."""
    check_state(q.t, z_t, "z_t")
    bl = bridge_law(params, q)
    k = np.asarray(z_t) - bl.offset
    neg = k < 0
    out = np.where(neg, -np.inf, np.asarray(bl.law.log_mass(np.where(neg, 0, k)), dtype=float))
    return out.item() if out.ndim == 0 else out


def bayes_log_mass(params: ProcessParams, q: BridgeQuery, z_t):
    """Same quantity through the Markov property: k(s,t) k(t,u) / k(s,u)."""
    return (
        kernel_log_mass(params, q.s, q.t, q.z_s, z_t)
        + kernel_log_mass(params, q.t, q.u, z_t, q.z_u)
        - kernel_log_mass(params, q.s, q.u, q.z_s, q.z_u)
    )


def conditional_moments(params: ProcessParams, q: BridgeQuery):
    """Conditional mean and variance of X_t given (Z_s, Z_u), from the bridge law."""
    bl = bridge_law(params, q)
    m, v = bl.law.moments()
    a, b = affine(params, q.t)
    return a * (bl.offset + m) + b, a * a * v


def harness_mean(params: ProcessParams, q: BridgeQuery) -> float:
    """Linear interpolation ((u-t) X_s + (t-s) X_u) / (u-s)."""
    xs, xu = z_to_x(params, q.s, q.z_s), z_to_x(params, q.u, q.z_u)
    return ((q.u - q.t) * xs + (q.t - q.s) * xu) / (q.u - q.s)


def harness_variance(params: ProcessParams, q: BridgeQuery) -> float:
    """Quadratic conditional variance with eta = theta, q = 1."""
    s, t, u, th = q.s, q.t, q.u, params.theta
    xs, xu = z_to_x(params, s, q.z_s), z_to_x(params, u, q.z_u)
    return (u - t) * (t - s) / (u - s) * (1 + th * (u * xs - s * xu) / (u - s) + th * (xu - xs) / (u - s))
