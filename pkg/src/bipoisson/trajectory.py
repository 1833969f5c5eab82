"""Exact path simulation, the Z <-> X map, jump-time densities, reference processes.

Two constructions of the same process are provided.

*Forward*: on [0, 1) the birth process is a time change ``Z_t = M_{-ln(1-t)}``
of a homogeneous birth process M with rates ``j + 1/theta**2``, so jump
times are ``Gamma_k = 1 - exp(-(tau_0 + ... + tau_k))`` with independent
exponential sojourns. Birth events stop at ``1 - delta`` and Z_1 is drawn
from its exact conditional gamma law given the last birth state.

*Representation*: Z_1 ~ Gamma(1/theta**2, 1); given Z_1 the birth and death
phases are two independent homogeneous Poisson streams of intensity
``theta * Z_1``, read through the time maps ``s = theta a / (1 + theta a)``
(birth) and ``t = 1 + 1 / (theta a)`` (death).

Both constructions share the death phase, which is always simulated from
the Poisson stream: the process enters from infinitely many particles at
t = 1+, so only the window ``[1 + delta, T]`` is materialized.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from .kernel import ProcessParams, check_state

DEFAULT_DELTA = 1e-6
DEFAULT_K_MAX = 10_000_000


# ------------------------------------------------------------------ Z <-> X

def affine(params: ProcessParams, t: float):
    """Coefficients (a, b) with X_t = a * Z_t + b."""
    th = params.theta
    if t < 1:
        return th * (1.0 - t), -t / th
    if t == 1:
        return th, -1.0 / th
    return th * (t - 1.0), -1.0 / th


def z_to_x(params: ProcessParams, t: float, z):
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    a, b = affine(params, t)
    out = a * np.asarray(z, dtype=float) + b
    return out.item() if out.ndim == 0 else out


def x_to_z(params: ProcessParams, t: float, x, snap_tol: float = 1e-9):
    """Inverse of :func:`z_to_x`; off t = 1 the result is snapped to the integer lattice."""
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    if t == 0:
        if np.any(np.abs(np.asarray(x)) > snap_tol):
            raise ValueError(f"X_0 = 0, got {x!r}")
        return 0
    a, b = affine(params, t)
    z = (np.asarray(x, dtype=float) - b) / a
    if t == 1:
        return z.item() if z.ndim == 0 else z
    zi = np.rint(z)
    if np.any(np.abs(z - zi) > snap_tol) or np.any(zi < 0):
        raise ValueError(f"x={x!r} is not on a lattice line at t={t}")
    zi = zi.astype(np.int64)
    return int(zi) if zi.ndim == 0 else zi


# ------------------------------------------------------------- trajectories

@dataclass
class Trajectory:
    """Event-list representation of one path on [0, horizon].

    ``birth_times[i]`` is Gamma_i, the time Z jumps from i to i+1; the path is
    known on ``[0, birth_window_end]``. ``death_times`` are ascending times of
    downward jumps in ``[death_window_start, horizon]``; ``Z_t = z_T + #{d > t}``
    there. The gap around t = 1 holds infinitely many jumps and is summarized
    by the exact value ``z1``.
    """

    theta: float
    horizon: float
    delta: float
    birth_times: np.ndarray
    birth_window_end: float
    z1: float
    death_times: np.ndarray
    death_window_start: float
    z_T: int
    truncated: bool = False
    method: str = "forward"
    meta: dict = field(default_factory=dict)

    @property
    def birth_levels(self) -> np.ndarray:
        """Level entered at each birth jump: 1, 2, ..."""
        return np.arange(1, len(self.birth_times) + 1)

    @property
    def death_levels(self) -> np.ndarray:
        """Level entered at each death jump, descending to z_T."""
        J = len(self.death_times)
        return self.z_T + np.arange(J - 1, -1, -1)

    @property
    def z_birth_end(self) -> int:
        return len(self.birth_times)

    @property
    def z_death_start(self) -> int:
        return self.z_T + len(self.death_times)

    def covers(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return ((t >= 0) & (t <= self.birth_window_end)) | (t == 1) | (
            (t >= self.death_window_start) & (t <= self.horizon)
        )

    def z_at(self, t):
        t = np.asarray(t, dtype=float)
        if not np.all(self.covers(t)):
            raise ValueError("time outside the simulated windows")
        birth = np.searchsorted(self.birth_times, t, side="right")
        death = self.z_T + len(self.death_times) - np.searchsorted(self.death_times, t, side="right")
        out = np.where(t < 1, birth, np.where(t == 1, self.z1, death)).astype(float)
        return out.item() if out.ndim == 0 else out

    def x_at(self, t):
        t = np.asarray(t, dtype=float)
        z = np.asarray(self.z_at(t), dtype=float)
        th = self.theta
        out = np.where(t < 1, th * (1 - t) * z - t / th, th * np.abs(t - 1) * z - 1 / th)
        out = np.where(t == 1, th * z - 1 / th, out)
        return out.item() if out.ndim == 0 else out

    def events(self):
        """Rows (phase, time, level) in time order."""
        rows = [("birth", float(s), int(k)) for s, k in zip(self.birth_times, self.birth_levels)]
        rows.append(("one", 1.0, float(self.z1)))
        rows += [("death", float(d), int(k)) for d, k in zip(self.death_times, self.death_levels)]
        return rows

    def grid(self, n_points: int = 1001):
        """Dense (t, x) view on [0, horizon] restricted to the simulated windows."""
        t = np.linspace(0.0, self.horizon, n_points)
        t = np.union1d(t[self.covers(t)], [1.0])
        return t, self.x_at(t)


@dataclass
class DeathSegment:
    death_times: np.ndarray
    window_start: float
    z_T: int
    truncated: bool


def _exp_cumsum(rng: np.random.Generator, rate_of, limit: float, k_max: int):
    """Partial sums of independent Exp(rate_of(j)) variables, j = 0, 1, ...

    Stops before the first sum exceeding ``limit`` or after ``k_max`` terms.
    Returns ``(sums, truncated)``; ``truncated`` means k_max was hit first.
    """
    parts = []
    total, n, chunk = 0.0, 0, 1024
    while n < k_max:
        m = min(chunk, k_max - n)
        e = -np.log1p(-rng.random(m)) / rate_of(np.arange(n, n + m))
        c = total + np.cumsum(e)
        over = int(np.searchsorted(c, limit, side="right"))
        if over < m:
            parts.append(c[:over])
            return np.concatenate(parts), False
        parts.append(c)
        total, n = float(c[-1]), n + m
        chunk = min(chunk * 2, 1 << 22)
    return (np.concatenate(parts) if parts else np.empty(0)), True


def _check_window(horizon: float, delta: float):
    if not horizon > 1:
        raise ValueError(f"horizon must exceed 1, got {horizon}")
    if not 0 < delta < min(1.0, horizon - 1.0):
        raise ValueError(f"window delta must lie in (0, min(1, T-1)), got {delta}")


def simulate_death_given_z1(params: ProcessParams, z1: float, horizon: float, rng: np.random.Generator,
                            delta: float = DEFAULT_DELTA, k_max: int = DEFAULT_K_MAX) -> DeathSegment:
    """Death phase on [1 + delta, horizon] given Z_1 = z1.

    Arrivals ``a`` of a rate ``theta * z1`` Poisson stream map to jump times
    ``1 + 1/(theta a)``; ``Z_T`` counts the arrivals below ``1/(theta (T-1))``.
    """
    _check_window(horizon, delta)
    check_state(1.0, z1, "z1")
    th = params.theta
    lam = th * float(z1)
    a_T = 1.0 / (th * (horizon - 1.0))
    a_max = 1.0 / (th * delta)
    if lam == 0.0:
        return DeathSegment(np.empty(0), 1.0 + delta, 0, False)
    z_T = int(rng.poisson(lam * a_T))
    gaps, truncated = _exp_cumsum(rng, lambda j: np.full(j.shape, lam), a_max - a_T, k_max)
    a = a_T + gaps
    times = (1.0 + 1.0 / (th * a))[::-1]
    start = float(times[0]) if truncated and len(times) else 1.0 + delta
    return DeathSegment(np.ascontiguousarray(times), start, z_T, truncated)


def simulate_forward(params: ProcessParams, horizon: float, rng: np.random.Generator,
                     delta: float = DEFAULT_DELTA, k_max: int = DEFAULT_K_MAX) -> Trajectory:
    """Sojourn-time construction of the birth phase, exact gamma bridge to t = 1."""
    _check_window(horizon, delta)
    r0 = params.r0
    sums, truncated = _exp_cumsum(rng, lambda j: j + r0, -math.log(delta), k_max)
    birth = -np.expm1(-sums)
    if truncated:
        end, remaining = float(birth[-1]), math.exp(-float(sums[-1]))
    else:
        end, remaining = 1.0 - delta, delta
    z1 = float(rng.gamma(len(birth) + r0, remaining))
    death = simulate_death_given_z1(params, z1, horizon, rng, delta, k_max)
    return Trajectory(params.theta, horizon, delta, birth, end, z1, death.death_times,
                      death.window_start, death.z_T, truncated or death.truncated, "forward")


def simulate_by_representation(params: ProcessParams, horizon: float, rng: np.random.Generator,
                               delta: float = DEFAULT_DELTA, k_max: int = DEFAULT_K_MAX) -> Trajectory:
    """Gamma-mixed pair of Poisson streams: Z_1 first, then both phases given Z_1."""
    _check_window(horizon, delta)
    th = params.theta
    z1 = float(rng.gamma(params.r0, 1.0))
    lam = th * z1
    a_b = (1.0 - delta) / (th * delta)
    if lam > 0:
        arrivals, truncated = _exp_cumsum(rng, lambda j: np.full(j.shape, lam), a_b, k_max)
    else:
        arrivals, truncated = np.empty(0), False
    birth = th * arrivals / (1.0 + th * arrivals)
    end = float(birth[-1]) if truncated else 1.0 - delta
    death = simulate_death_given_z1(params, z1, horizon, rng, delta, k_max)
    return Trajectory(th, horizon, delta, birth, end, z1, death.death_times,
                      death.window_start, death.z_T, truncated or death.truncated, "representation")


# ------------------------------------------- vectorized finite-dimensional laws

def _death_counts(params, lam, death_times, rng):
    """Z at ascending times > 1 from rate-lam streams (one per path)."""
    a = 1.0 / (params.theta * (np.asarray(death_times) - 1.0))
    out = np.empty((len(lam), len(a)), dtype=np.int64)
    prev_a, count = 0.0, np.zeros(len(lam), dtype=np.int64)
    for j in range(len(a) - 1, -1, -1):
        count = count + rng.poisson(lam * (a[j] - prev_a))
        out[:, j] = count
        prev_a = a[j]
    return out


def sample_fdd(params: ProcessParams, times, n: int, rng: np.random.Generator,
               method: str = "forward", start=None) -> np.ndarray:
    """Joint samples of (Z_{t_1}, ..., Z_{t_k}) for n independent paths.

    ``method="forward"`` uses the sojourn construction with the gamma bridge
    through t = 1; ``"representation"`` the gamma-mixed Poisson streams.
    ``start=(s, z)`` conditions on Z_s = z (forward only). Returns an
    ``(n, k)`` float array.
    """
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or np.any(np.diff(times) <= 0) or np.any(times <= 0):
        raise ValueError("times must be positive and strictly increasing")
    r0, th = params.r0, params.theta
    bt, dt = times[times < 1], times[times > 1]
    need_one = bool(np.any(times == 1) or len(dt))
    out = np.empty((n, len(times)))
    col_b = np.nonzero(times < 1)[0]
    col_1 = np.nonzero(times == 1)[0]
    col_d = np.nonzero(times > 1)[0]

    if method == "representation":
        if start is not None:
            raise ValueError("start state is only supported by the forward method")
        z1 = rng.gamma(r0, 1.0, size=n)
        lam = th * z1
        if len(bt):
            a = bt / (th * (1.0 - bt))
            counts = np.cumsum(rng.poisson(lam[:, None] * np.diff(a, prepend=0.0)[None, :]), axis=1)
            out[:, col_b] = counts
        out[:, col_1] = z1[:, None]
        if len(dt):
            out[:, col_d] = _death_counts(params, lam, dt, rng)
        return out
    if method != "forward":
        raise ValueError(f"unknown method {method!r}")

    s0, z0 = (0.0, 0) if start is None else start
    if np.any(times <= s0):
        raise ValueError("times must exceed the start time")
    check_state(s0, z0, "start state")
    z0 = np.broadcast_to(np.asarray(z0), (n,)).copy()

    if s0 > 1:
        a_prev = 1.0 / (th * (s0 - 1.0))
        cur = z0.astype(np.int64)
        for j, t in enumerate(times):
            a_t = 1.0 / (th * (t - 1.0))
            cur = rng.binomial(cur, a_t / a_prev)
            out[:, j] = cur
            a_prev = a_t
        return out

    if s0 < 1:
        level = z0.astype(np.int64)
        if len(bt):
            targets = -np.log1p(-bt)
            S = np.full(n, -math.log1p(-s0))
            counts = np.zeros((n, len(bt)), dtype=np.int64)
            active = np.ones(n, dtype=bool)
            lv = level.copy()
            while active.any():
                idx = np.nonzero(active)[0]
                e = -np.log1p(-rng.random(idx.size)) / (lv[idx] + r0)
                S[idx] += e
                counts[idx] += S[idx, None] <= targets[None, :]
                lv[idx] += 1
                active[idx] = S[idx] <= targets[-1]
            zb = level[:, None] + counts
            out[:, col_b] = zb
            t_last, z_last = float(bt[-1]), zb[:, -1]
        else:
            t_last, z_last = s0, level
        if not need_one:
            return out
        z1 = rng.gamma(z_last + r0, 1.0 - t_last)
    else:
        z1 = z0.astype(float)
    out[:, col_1] = z1[:, None]
    if len(dt):
        out[:, col_d] = _death_counts(params, th * z1, dt, rng)
    return out


def sample_birth_jump_times(params: ProcessParams, k: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """(Gamma_0, ..., Gamma_k) for n paths from the sojourn construction."""
    e = -np.log1p(-rng.random((n, k + 1)))
    S = np.cumsum(e / (np.arange(k + 1) + params.r0), axis=1)
    return -np.expm1(-S)


def sample_death_jump_times(params: ProcessParams, k: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """(Delta_0, ..., Delta_k) for n paths; Delta_i is the entrance time of level i."""
    th = params.theta
    lam = th * rng.gamma(params.r0, 1.0, size=n)
    a = np.cumsum(-np.log1p(-rng.random((n, k + 1))), axis=1) / lam[:, None]
    return 1.0 + 1.0 / (th * a)


# ------------------------------------------------------------ jump densities

def gamma_jump_log_density(params: ProcessParams, s, one_minus_s=None) -> float:
    """Log joint density of the upward jump times (Gamma_0, ..., Gamma_k) at s.

    ``one_minus_s`` optionally supplies 1 - s exactly, for points close to 1.
    """
    s = np.asarray(s, dtype=float)
    if s.ndim != 1 or s.size == 0:
        raise ValueError("s must be a nonempty 1-d sequence")
    c = -s + 1.0 if one_minus_s is None else np.asarray(one_minus_s, dtype=float)
    if s[0] < 0 or c[-1] <= 0 or np.any(np.diff(s) < 0) or np.any(np.diff(c) >= 0):
        raise ValueError(f"need 0 <= s_0 < s_1 < ... < s_k < 1, got {s}")
    k, r0 = s.size - 1, params.r0
    log_c = np.log(c) if one_minus_s is not None else np.log1p(-s)
    return float(gammaln(r0 + k + 1) - gammaln(r0) + (r0 + k - 1) * log_c[-1] - 2.0 * np.sum(log_c[:-1]))


def delta_jump_log_density(params: ProcessParams, t) -> float:
    """Log joint density of the downward entrance times (Delta_0, ..., Delta_k) at t.

    ``t[i]`` is the value of Delta_i, so ``t[0] > t[1] > ... > t[k] > 1``.
    """
    t = np.asarray(t, dtype=float)
    if t.ndim != 1 or t.size == 0:
        raise ValueError("t must be a nonempty 1-d sequence")
    if t[-1] <= 1 or np.any(np.diff(t) >= 0):
        raise ValueError(f"need t_0 > t_1 > ... > t_k > 1, got {t}")
    k, r0 = t.size - 1, params.r0
    return float(
        gammaln(r0 + k + 1) - gammaln(r0)
        + (r0 + k - 1) * math.log(t[-1] - 1.0)
        - (r0 + k + 1) * math.log(t[-1])
        - 2.0 * np.sum(np.log(t[:-1] - 1.0))
    )


def hitting_time_survival(params: ProcessParams, t):
    """P(Delta_0 > t) = 1 - (1 - 1/t)^(1/theta^2) for t > 1."""
    t = np.asarray(t, dtype=float)
    with np.errstate(divide="ignore"):
        return -np.expm1(params.r0 * np.log1p(-1.0 / t))


# ------------------------------------------------------ degenerate references

def degenerate_reference(kind: str, times, n: int, rng: np.random.Generator,
                         theta: float | None = None, eta: float | None = None) -> np.ndarray:
    """Exact samples of X at ``times`` for the degenerate cases eta*theta = 0.

    ``brownian``: standard Brownian motion. ``poisson``: ``theta N_{t/theta^2} - t/theta``.
    ``poisson-inverted``: ``eta t N_{1/(t eta^2)} - 1/eta``. Returns ``(n, k)``.
    """
    times = np.asarray(times, dtype=float)
    if np.any(times <= 0) or np.any(np.diff(times) <= 0):
        raise ValueError("times must be positive and increasing")
    if kind == "brownian":
        inc = rng.standard_normal((n, len(times))) * np.sqrt(np.diff(times, prepend=0.0))
        return np.cumsum(inc, axis=1)
    if kind == "poisson":
        if not theta:
            raise ValueError("poisson reference needs theta != 0")
        clock = times / theta**2
        N = np.cumsum(rng.poisson(np.diff(clock, prepend=0.0), size=(n, len(times))), axis=1)
        return theta * N - times / theta
    if kind == "poisson-inverted":
        if not eta:
            raise ValueError("poisson-inverted reference needs eta != 0")
        clock = (1.0 / (times * eta**2))[::-1]
        N = np.cumsum(rng.poisson(np.diff(clock, prepend=0.0), size=(n, len(times))), axis=1)[:, ::-1]
        return eta * times * N - 1.0 / eta
    raise ValueError(f"unknown reference kind {kind!r}")
