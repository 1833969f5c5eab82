"""Markov transition structure of the integer-valued process Z.

Z is a pure birth process with immigration on [0, 1) (rate
``(n + 1/theta**2) / (1 - t)``), takes a gamma-distributed real value at
t = 1, and is a pure death process on (1, inf) (rate ``n / (t - 1)``) entered
through a Poisson law. A transition s -> t falls into exactly one of five
cases:

=================  ============  =========================================
case               times         law of Z_t - offset given Z_s = z
=================  ============  =========================================
``birth``          s < t < 1     NegativeBinomial(z + r0, (1-t)/(1-s)), offset z
``birth-to-one``   s < t = 1     Gamma(z + r0, 1 - s)
``cross``          s < 1 < t     NegativeBinomial(z + r0, (t-1)/(t-s))
``entrance``       s = 1 < t     Poisson(z / (t - 1))
``death``          1 < s < t     Binomial(z, (s-1)/(t-1))
=================  ============  =========================================

with ``r0 = 1/theta**2``. States are phase-typed: integers off t = 1, reals at
t = 1 (see :func:`check_state`).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammainccinv, logsumexp

from .dists import (
    EPS_TAIL,
    Binomial,
    DivergenceError,
    Gamma,
    NegativeBinomial,
    Poisson,
    TransitionLaw,
    point_mass_at_zero,
    support_table,
)
from .report import VerificationReport

BIRTH = "birth"
TO_ONE = "birth-to-one"
CROSS = "cross"
ENTRANCE = "entrance"
DEATH = "death"
CASES = (BIRTH, TO_ONE, CROSS, ENTRANCE, DEATH)


class PhaseError(TypeError):
    """State type does not match its time (integer off t=1, real at t=1)."""


class DegenerateParametersError(ValueError):
    """(eta, theta) outside the reducible range eta*theta > 0."""


@dataclass(frozen=True)
class ProcessParams:
    """Canonical parameter theta > 0 and numeric tolerances."""

    theta: float
    eps_tail: float = EPS_TAIL
    eps_check: float = 1e-9

    def __post_init__(self):
        if not (math.isfinite(self.theta) and self.theta > 0):
            raise ValueError(f"theta must be a positive real, got {self.theta!r}")

    @property
    def r0(self) -> float:
        """Immigration shape 1/theta**2."""
        return 1.0 / self.theta**2


@dataclass(frozen=True)
class Reduction:
    """Map from an (eta, theta) process X to the canonical process.

    ``Y_t = sign * space_scale * X_{t * time_scale}`` is the bi-Poisson process
    with parameters ``(params.theta, params.theta)``, ``sign = -1`` iff ``negate``.
    """

    params: ProcessParams
    time_scale: float
    space_scale: float
    negate: bool

    def to_original(self, t, y):
        """Canonical point (t, y) -> point (t', x) on the original process."""
        sign = -1.0 if self.negate else 1.0
        return np.asarray(t) * self.time_scale, sign * np.asarray(y) / self.space_scale


def reduce_params(eta: float, theta: float, **tolerances) -> Reduction:
    prod = eta * theta
    if prod < 0:
        raise DegenerateParametersError(
            f"no bi-Poisson process with eta*theta < 0 (eta={eta}, theta={theta}); eta*theta >= 0 is required"
        )
    if prod == 0:
        raise DegenerateParametersError(
            "eta*theta = 0 is a degenerate case (Brownian or Poisson type); use trajectory.degenerate_reference"
        )
    negate = eta < 0
    e, th = abs(eta), abs(theta)
    canon = math.sqrt(e * th)
    return Reduction(ProcessParams(canon, **tolerances), th / e, math.sqrt(e / th), negate)


# --------------------------------------------------------------------- phases

def _is_int_like(z) -> bool:
    if isinstance(z, bool):
        return False
    if isinstance(z, (int, np.integer)):
        return True
    return isinstance(z, np.ndarray) and z.dtype.kind in "iu"


def check_state(t: float, z, name: str = "z"):
    """Validate phase typing of a state at time t; returns it unchanged."""
    if t == 1:
        arr = np.asarray(z)
        if arr.dtype.kind not in "iuf" or isinstance(z, bool):
            raise PhaseError(f"{name} at t=1 must be real, got {z!r}")
        if np.any(arr < 0) or np.any(~np.isfinite(arr)):
            raise ValueError(f"{name} at t=1 must be a nonnegative real, got {z!r}")
        return z
    if not _is_int_like(z):
        raise PhaseError(f"{name} at t={t} must be an integer state (t != 1), got {z!r}")
    if np.any(np.asarray(z) < 0):
        raise ValueError(f"{name} must be nonnegative, got {z!r}")
    return z


def kernel_case(s: float, t: float) -> str:
    if s < 0:
        raise ValueError(f"times must be nonnegative, got s={s}")
    if not t > s:
        raise ValueError(f"transition needs s < t, got s={s}, t={t}")
    if t < 1:
        return BIRTH
    if t == 1:
        return TO_ONE
    if s < 1:
        return CROSS
    if s == 1:
        return ENTRANCE
    return DEATH


# ------------------------------------------------------------------ marginals

def marginal(params: ProcessParams, t: float) -> TransitionLaw:
    """Law of Z_t (Z_0 = 0 is returned as the point mass Binomial(0, 0))."""
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    if t == 0:
        return point_mass_at_zero()
    if t < 1:
        return NegativeBinomial(params.r0, 1.0 - t)
    if t == 1:
        return Gamma(params.r0, 1.0)
    return NegativeBinomial(params.r0, 1.0 - 1.0 / t)


def marginal_log_mass(params: ProcessParams, t: float, z):
    check_state(t, z)
    return marginal(params, t).log_mass(z)


# ------------------------------------------------------------ forward kernels

@dataclass(frozen=True)
class KernelLaw:
    """Law of ``Z_t - offset`` given ``Z_s``, and the case that produced it."""

    law: TransitionLaw
    offset: object
    case: str


def forward_kernel(params: ProcessParams, s: float, t: float, z_s) -> KernelLaw:
    case = kernel_case(s, t)
    check_state(s, z_s, "z_s")
    if s == 0 and np.any(np.asarray(z_s) != 0):
        raise ValueError("Z_0 = 0; nonzero state at s=0 is impossible")
    if case == BIRTH:
        return KernelLaw(NegativeBinomial(z_s + params.r0, (1.0 - t) / (1.0 - s)), z_s, case)
    if case == TO_ONE:
        return KernelLaw(Gamma(z_s + params.r0, 1.0 - s), 0, case)
    if case == CROSS:
        return KernelLaw(NegativeBinomial(z_s + params.r0, (t - 1.0) / (t - s)), 0, case)
    if case == ENTRANCE:
        return KernelLaw(Poisson(np.asarray(z_s, dtype=float) / (t - 1.0)), 0, case)
    return KernelLaw(Binomial(z_s, (s - 1.0) / (t - 1.0)), 0, case)


def kernel_log_mass(params: ProcessParams, s: float, t: float, z_s, z_t):
    """log P(Z_t = z_t | Z_s = z_s) (a log-density when t = 1); -inf off support.

    Broadcasts over array-valued ``z_s`` and ``z_t``.
    """
    check_state(t, z_t, "z_t")
    kl = forward_kernel(params, s, t, z_s)
    k = np.asarray(z_t) - np.asarray(kl.offset)
    if not kl.law.discrete:
        return kl.law.log_mass(k)
    neg = k < 0
    out = np.asarray(kl.law.log_mass(np.where(neg, 0, k)), dtype=float)
    out = np.where(neg, -np.inf, out)
    return out.item() if out.ndim == 0 else out


def mgf_coefficients(params: ProcessParams, s: float, t: float, u: float):
    """``(c0, c1)`` with ``log E[exp(u Z_t) | Z_s = z] = c0 + c1 * z``.

    Raises :class:`DivergenceError` outside the convergence region of the case.
    """
    case = kernel_case(s, t)
    r0 = params.r0
    em1 = math.expm1(u)
    if case == BIRTH:
        arg = (t - s) * em1 / (1.0 - t)
        if arg >= 1.0:
            bound = math.log((1.0 - s) / (t - s))
            raise DivergenceError(f"birth-case MGF ({s}->{t}) diverges: need u < {bound:.17g}, got {u}", bound)
        L = -math.log1p(-arg)
        return r0 * L, u + L
    if case == TO_ONE:
        arg = u * (1.0 - s)
        if arg >= 1.0:
            bound = 1.0 / (1.0 - s)
            raise DivergenceError(f"gamma-case MGF ({s}->1) diverges: need u < {bound:.17g}, got {u}", bound)
        L = -math.log1p(-arg)
        return r0 * L, L
    if case == CROSS:
        # Poisson entrance MGF composed with the gamma law at t = 1.
        arg = (1.0 - s) * em1 / (t - 1.0)
        if arg >= 1.0:
            bound = math.log((t - s) / (1.0 - s))
            raise DivergenceError(f"cross-case MGF ({s}->{t}) diverges: need u < {bound:.17g}, got {u}", bound)
        L = -math.log1p(-arg)
        return r0 * L, L
    if case == ENTRANCE:
        return 0.0, em1 / (t - 1.0)
    return 0.0, math.log1p((s - 1.0) * em1 / (t - 1.0))


def conditional_log_mgf(params: ProcessParams, s: float, t: float, z_s, u: float):
    check_state(s, z_s, "z_s")
    c0, c1 = mgf_coefficients(params, s, t, u)
    return c0 + c1 * np.asarray(z_s, dtype=float)


def conditional_mgf(params: ProcessParams, s: float, t: float, z_s, u: float):
    """E[exp(u Z_t) | Z_s = z_s] from the closed-form conditional MGFs."""
    out = np.exp(conditional_log_mgf(params, s, t, z_s, u))
    return out.item() if np.ndim(out) == 0 else out


# -------------------------------------------------------- Chapman-Kolmogorov

def composition_case(s: float, m: float, t: float) -> str:
    if not (0 <= s < m < t):
        raise ValueError(f"need 0 <= s < m < t, got {s}, {m}, {t}")
    if t < 1:
        return "birth.birth"
    if t == 1:
        return "birth.gamma"
    if m == 1:
        return "through-one"
    if m < 1:
        return "ck-case-1"
    if s < 1:
        return "ck-case-2"
    if s == 1:
        return "entrance.death"
    return "death.death"


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)
_GRADING, _GRADED_LEVELS = 0.15, 40


def integrate_gamma_weighted(log_f, shape: float, scale: float, tol: float, max_panels: int = 4096):
    """Integrate ``exp(log_f(x))`` over x > 0 where log_f carries a Gamma(shape, scale) factor.

    Substitutes ``x = y**m`` with ``m = max(1, 1/shape)`` to remove the
    blow-up at 0, then applies composite Gauss-Legendre with the uniform
    panel count doubled until successive estimates differ by < tol/100. The
    first uniform panel is further split geometrically toward 0, since a
    non-integer power of y there defeats plain panel refinement.
    Returns ``(value, panels)``.
    """
    x_max = float(gammainccinv(shape, 1e-22)) * scale
    m = max(1.0, 1.0 / shape)
    y_max = x_max ** (1.0 / m)

    def estimate(panels):
        first = y_max / panels
        # stop grading before y**m underflows
        floor = math.exp(-690.0 / m)
        levels = int(min(_GRADED_LEVELS, max(0.0, math.log(floor / first) / math.log(_GRADING))))
        graded = first * _GRADING ** np.arange(levels, 0, -1)
        edges = np.concatenate([[0.0], graded, np.linspace(first, y_max, panels)])
        half = 0.5 * np.diff(edges)
        mid = 0.5 * (edges[1:] + edges[:-1])
        y = (mid[:, None] + half[:, None] * _GL_NODES[None, :]).ravel()
        w = (half[:, None] * _GL_WEIGHTS[None, :]).ravel()
        x = y**m
        with np.errstate(divide="ignore"):
            log_jac = math.log(m) + (m - 1.0) * np.log(y)
        vals = np.exp(log_f(x) + log_jac)
        return float(np.sum(w * vals))

    panels = 1
    prev = estimate(panels)
    while panels < max_panels:
        panels *= 2
        cur = estimate(panels)
        if abs(cur - prev) < tol / 100.0:
            return cur, panels
        prev = cur
    return prev, panels


def verify_ck(params: ProcessParams, s: float, m: float, t: float, z_s, z_t) -> VerificationReport:
    """Compare the composed kernel s -> m -> t with the direct kernel s -> t.

    Sums over the intermediate state with adaptive tail truncation, or
    integrates over the gamma law when m = 1. The error compared with
    ``params.eps_check`` is ``|composed - direct| / max(1, direct)``: absolute
    for probabilities, relative for a density at t = 1 exceeding 1, whose
    size is unbounded near Z_1 = 0.
    """
    label = composition_case(s, m, t)
    diag: dict = {"case": label, "s": s, "m": m, "t": t, "z_s": z_s, "z_t": z_t}
    direct = float(np.exp(kernel_log_mass(params, s, t, z_s, z_t)))
    if m == 1:
        first = forward_kernel(params, s, 1.0, z_s).law

        def log_f(x):
            return first.log_mass(x) + kernel_log_mass(params, 1.0, t, x, z_t)

        composed, panels = integrate_gamma_weighted(log_f, float(first.shape), float(first.scale), params.eps_check)
        diag["quadrature_panels"] = panels
        method = "quadrature"
    else:
        first = forward_kernel(params, s, m, z_s)
        ks, lp, K = support_table(first.law, params.eps_tail)
        j = ks + np.asarray(first.offset, dtype=np.int64)
        lp2 = np.asarray(kernel_log_mass(params, m, t, j, z_t), dtype=float)
        total = lp + lp2
        composed = float(np.exp(logsumexp(total))) if np.any(np.isfinite(total)) else 0.0
        diag["truncation_K"] = K
        method = "exact-sum"
    diag["abs_error"] = abs(composed - direct)
    err = diag["abs_error"] / max(1.0, direct)
    diag["scaled_error"] = err
    return VerificationReport(
        f"ck/{label}", method, composed, direct, params.eps_check, bool(err <= params.eps_check), diag
    )
