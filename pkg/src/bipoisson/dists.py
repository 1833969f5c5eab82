r"""Transition laws of the process: Poisson, Gamma, negative binomial, binomial.

Parameterizations::

    Poisson(lam)             e^{-lam} lam^k / k!
    Gamma(shape, scale)      x^{shape-1} e^{-x/scale} / (scale^shape Gamma(shape))
    NegativeBinomial(r, p)   Gamma(k+r) / (Gamma(r) k!) p^r (1-p)^k
    Binomial(n, p)           C(n, k) p^k (1-p)^{n-k}

All masses are computed in log-space through ``gammaln``. For the negative
binomial and binomial laws the difference of large log-gammas loses up to
~1e-11 when means reach the thousands, so wherever the mass is representable
it is replaced by the log of scipy's incomplete-beta based pmf. Parameters may
be numpy arrays, in which case evaluation broadcasts against the argument.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import ClassVar

import numpy as np
from scipy import stats
from scipy.special import gammaln, xlog1py, xlogy

EPS_TAIL = 1e-16


class LawDomainError(ValueError):
    """Argument outside the support type of a law (negative or non-integer)."""


class DivergenceError(ValueError):
    """MGF requested outside its region of convergence."""

    def __init__(self, message: str, bound: float | None = None):
        super().__init__(message)
        self.bound = bound


def _is_integral(k) -> bool:
    k = np.asarray(k)
    if k.dtype.kind in "iub":
        return True
    return bool(np.all(np.isfinite(k)) and np.all(k == np.floor(k)))


def _check_count(k):
    k = np.asarray(k)
    if not _is_integral(k):
        raise LawDomainError(f"discrete law evaluated at non-integer {k!r}")
    if np.any(k < 0):
        raise LawDomainError(f"discrete law evaluated at negative {k!r}")
    return k


_TINY = 1e-280


def _refine(log_fast, pmf_fn, *args):
    """Use log(pmf) where the directly computed mass is comfortably representable."""
    try:
        pmf = pmf_fn(*args)
    except (OverflowError, FloatingPointError):
        return log_fast  # extreme (e.g. subnormal) parameters
    with np.errstate(divide="ignore"):
        acc = np.log(pmf)
    return np.where(pmf > _TINY, acc, log_fast)


def _scalar(x):
    x = np.asarray(x)
    return x.item() if x.ndim == 0 else x


@dataclass(frozen=True)
class TransitionLaw:
    """Base class; subclasses carry the parameters of one tagged law."""

    tag: ClassVar[str] = ""
    discrete: ClassVar[bool] = True

    @property
    def params(self) -> dict:
        return {k: _scalar(v) for k, v in self.__dict__.items()}

    def log_mass(self, k):
        raise NotImplementedError

    def log_mgf(self, u):
        raise NotImplementedError

    def mgf(self, u):
        return np.exp(self.log_mgf(u))

    def moments(self):
        raise NotImplementedError

    def sample(self, rng: np.random.Generator, size=None):
        raise NotImplementedError

    def to_dict(self) -> dict:
        return {"tag": self.tag, **{k: _jsonable(v) for k, v in self.params.items()}}


def _jsonable(v):
    if isinstance(v, np.ndarray):
        return v.tolist()
    if isinstance(v, np.generic):
        return v.item()
    return v


@dataclass(frozen=True)
class Poisson(TransitionLaw):
    lam: float

    tag: ClassVar[str] = "Poisson"

    def __post_init__(self):
        # lam = 0 is kept as the point mass at 0 (entrance from Z_1 = 0).
        if not np.all(np.asarray(self.lam) >= 0):
            raise ValueError(f"Poisson requires lam >= 0, got {self.lam!r}")

    def log_mass(self, k):
        k = _check_count(k)
        lam = np.asarray(self.lam, dtype=float)
        return _scalar(-lam + xlogy(k, lam) - gammaln(k + 1.0))

    def log_mgf(self, u):
        return _scalar(np.asarray(self.lam, dtype=float) * np.expm1(u))

    def moments(self):
        return _scalar(self.lam), _scalar(self.lam)

    def sample(self, rng, size=None):
        return rng.poisson(self.lam, size=size)


@dataclass(frozen=True)
class Gamma(TransitionLaw):
    shape: float
    scale: float

    tag: ClassVar[str] = "Gamma"
    discrete: ClassVar[bool] = False

    def __post_init__(self):
        if not (np.all(np.asarray(self.shape) > 0) and np.all(np.asarray(self.scale) > 0)):
            raise ValueError(f"Gamma requires shape > 0, scale > 0, got {self.shape!r}, {self.scale!r}")

    def log_mass(self, x):
        x = np.asarray(x, dtype=float)
        if np.any(x < 0) or np.any(np.isnan(x)):
            raise LawDomainError(f"Gamma density evaluated at negative {x!r}")
        a = np.asarray(self.shape, dtype=float)
        sc = np.asarray(self.scale, dtype=float)
        return _scalar(-a * np.log(sc) - gammaln(a) + xlogy(a - 1.0, x) - x / sc)

    def log_mgf(self, u):
        u = np.asarray(u, dtype=float)
        sc = np.asarray(self.scale, dtype=float)
        if np.any(sc * u >= 1.0):
            bound = float(np.min(1.0 / sc))
            raise DivergenceError(f"Gamma MGF diverges: need u < 1/scale = {bound:.17g}, got u={u}", bound)
        return _scalar(-np.asarray(self.shape, dtype=float) * np.log1p(-sc * u))

    def moments(self):
        a, sc = np.asarray(self.shape, dtype=float), np.asarray(self.scale, dtype=float)
        return _scalar(a * sc), _scalar(a * sc * sc)

    def sample(self, rng, size=None):
        return rng.gamma(self.shape, self.scale, size=size)


@dataclass(frozen=True)
class NegativeBinomial(TransitionLaw):
    r: float
    p: float

    tag: ClassVar[str] = "NegativeBinomial"

    def __post_init__(self):
        p = np.asarray(self.p)
        if not (np.all(np.asarray(self.r) > 0) and np.all(p > 0) and np.all(p < 1)):
            raise ValueError(f"NegativeBinomial requires r > 0, 0 < p < 1, got {self.r!r}, {self.p!r}")

    def log_mass(self, k):
        k = _check_count(k)
        r = np.asarray(self.r, dtype=float)
        p = np.asarray(self.p, dtype=float)
        fast = gammaln(k + r) - gammaln(r) - gammaln(k + 1.0) + r * np.log(p) + xlog1py(k, -p)
        return _scalar(_refine(fast, stats.nbinom.pmf, k, r, p))

    def log_mgf(self, u):
        u = np.asarray(u, dtype=float)
        r = np.asarray(self.r, dtype=float)
        p = np.asarray(self.p, dtype=float)
        arg = (1.0 - p) * np.expm1(u) / p
        if np.any(arg >= 1.0):
            bound = float(np.min(-np.log1p(-p)))
            raise DivergenceError(
                f"NegativeBinomial MGF diverges: need u < -log(1-p) = {bound:.17g}, got u={u}", bound
            )
        return _scalar(-r * np.log1p(-arg))

    def moments(self):
        r, p = np.asarray(self.r, dtype=float), np.asarray(self.p, dtype=float)
        return _scalar(r * (1 - p) / p), _scalar(r * (1 - p) / p**2)

    def sample(self, rng, size=None):
        # Gamma-mixed Poisson: rate ~ Gamma(r, (1-p)/p).
        p = np.asarray(self.p, dtype=float)
        lam = rng.gamma(self.r, (1.0 - p) / p, size=size)
        return rng.poisson(lam)


@dataclass(frozen=True)
class Binomial(TransitionLaw):
    n: int
    p: float

    tag: ClassVar[str] = "Binomial"

    def __post_init__(self):
        n = np.asarray(self.n)
        p = np.asarray(self.p)
        if not (_is_integral(n) and np.all(n >= 0)):
            raise ValueError(f"Binomial requires integer n >= 0, got {self.n!r}")
        if not (np.all(p >= 0) and np.all(p <= 1)):
            raise ValueError(f"Binomial requires 0 <= p <= 1, got {self.p!r}")

    def log_mass(self, k):
        k = _check_count(k)
        n = np.asarray(self.n, dtype=float)
        p = np.asarray(self.p, dtype=float)
        inside = k <= n
        kk = np.where(inside, k, 0)
        out = (
            gammaln(n + 1.0) - gammaln(kk + 1.0) - gammaln(n - kk + 1.0)
            + xlogy(kk, p) + xlog1py(n - kk, -p)
        )
        out = _refine(out, stats.binom.pmf, kk, n, p)
        return _scalar(np.where(inside, out, -np.inf))

    def log_mgf(self, u):
        n = np.asarray(self.n, dtype=float)
        p = np.asarray(self.p, dtype=float)
        return _scalar(n * np.log1p(p * np.expm1(u)))

    def moments(self):
        n, p = np.asarray(self.n, dtype=float), np.asarray(self.p, dtype=float)
        return _scalar(n * p), _scalar(n * p * (1 - p))

    def sample(self, rng, size=None):
        return rng.binomial(self.n, self.p, size=size)


def point_mass_at_zero() -> Binomial:
    return Binomial(0, 0.0)


# Functional surface mirroring the methods.

def log_mass(law: TransitionLaw, k):
    return law.log_mass(k)


def mgf(law: TransitionLaw, u):
    return law.mgf(u)


def log_mgf(law: TransitionLaw, u):
    return law.log_mgf(u)


def moments(law: TransitionLaw):
    return law.moments()


def sample(law: TransitionLaw, rng: np.random.Generator, size=None):
    return law.sample(rng, size=size)


def support_table(law: TransitionLaw, eps_tail: float = EPS_TAIL):
    """Truncated support ``0..K`` of a scalar discrete law with its log-masses.

    ``K`` is the first index past the mode with ``pmf(K) < eps_tail * sum(pmf[:K+1])``.
    Binomial laws return their full support. Returns ``(ks, log_pmf, K)``.
    """
    if not law.discrete:
        raise TypeError("support_table needs a discrete law")
    if isinstance(law, Binomial):
        ks = np.arange(int(law.n) + 1)
        return ks, np.asarray(law.log_mass(ks), dtype=float), int(law.n)
    mean, var = law.moments()
    hi = int(mean + 12.0 * np.sqrt(var) + 32)
    while True:
        ks = np.arange(hi + 1)
        lp = np.asarray(law.log_mass(ks), dtype=float)
        mx = lp.max()
        w = np.exp(lp - mx)
        cum = np.cumsum(w)
        mode = int(np.argmax(lp))
        hit = np.nonzero((ks > mode) & (w < eps_tail * cum))[0]
        if hit.size:
            K = int(hit[0])
            return ks[: K + 1], lp[: K + 1], K
        hi *= 2
