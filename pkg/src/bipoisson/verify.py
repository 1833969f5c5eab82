"""Verification suites: every distributional identity of the process as a report.

Deterministic identities are checked by exact summation or quadrature.
Monte Carlo claims use independent seeded generators; claims judged by a
p-value use significance 0.01 over 20 seeds with at most one failure.
"""
from __future__ import annotations

import math
from typing import Callable

import numpy as np
from scipy import integrate, stats

from . import bridge as br
from .dists import Gamma, support_table
from .kernel import (
    ProcessParams,
    composition_case,
    forward_kernel,
    kernel_log_mass,
    marginal,
    marginal_log_mass,
    verify_ck,
)
from .mgf import (
    JointMgfQuery,
    gaussian_limit_log_mgf,
    joint_log_mgf,
    joint_log_mgf_steps,
    poisson_limit_log_mgf,
)
from .report import VerificationReport, compare
from .trajectory import (
    affine,
    delta_jump_log_density,
    gamma_jump_log_density,
    hitting_time_survival,
    sample_birth_jump_times,
    sample_death_jump_times,
    sample_fdd,
    z_to_x,
)

ALPHA = 0.01
N_SEEDS = 20
MAX_FAILURES = 1
N_SE = 4.0

SUITES = ("ck", "harness", "inversion", "moments", "limits", "representation", "hitting", "all")


def make_rng(seed: int, *keys: int) -> np.random.Generator:
    """Independent generator for (seed, keys); the same inputs give the same stream."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=tuple(keys)))


def fourth_moment(theta: float, t: float) -> float:
    """E X_t^4 = 3 t^2 + theta^2 (t + 4 t^2 + t^3)."""
    return 3 * t * t + theta**2 * (t + 4 * t * t + t**3)


def _violations(claim_id, method, flags, seed=None, **diag) -> VerificationReport:
    bad = int(np.count_nonzero(~np.asarray(flags, dtype=bool)))
    return VerificationReport(claim_id, method, bad, 0, 0, bad == 0, diag, seed)


def _repeat(claim_id: str, pvalue: Callable[[np.random.Generator], float], seed: int, key: int,
            n_seeds: int = N_SEEDS, **diag) -> VerificationReport:
    """Run a p-value producing experiment over n_seeds generators."""
    pvals = [float(pvalue(make_rng(seed, key, i))) for i in range(n_seeds)]
    failures = sum(p <= ALPHA for p in pvals)
    allowed = MAX_FAILURES if n_seeds >= N_SEEDS else 0
    diag.update(p_values=pvals, alpha=ALPHA, n_seeds=n_seeds)
    return VerificationReport(claim_id, "monte-carlo", failures, 0, allowed, failures <= allowed, diag, seed)


# ------------------------------------------------------- random configurations

def _sample_state(params, t, rng):
    if t == 0:
        return 0
    law = marginal(params, t)
    v = law.sample(rng)
    return float(v) if t == 1 else int(v)


def _sample_next(params, s, t, z, rng):
    kl = forward_kernel(params, s, t, z)
    v = kl.law.sample(rng) + kl.offset
    return float(v) if t == 1 else int(v)


def _ck_times(case: str, rng) -> tuple:
    U = lambda lo, hi, k=1: np.sort(rng.uniform(lo, hi, k))  # noqa: E731
    if case == "birth.birth":
        return tuple(U(0, 1, 3))
    if case == "birth.gamma":
        return (*U(0, 1, 2), 1.0)
    if case == "through-one":
        return (U(0, 1)[0], 1.0, U(1, 5)[0])
    if case == "ck-case-1":
        return (*U(0, 1, 2), U(1, 5)[0])
    if case == "ck-case-2":
        return (U(0, 1)[0], *U(1, 5, 2))
    if case == "entrance.death":
        return (1.0, *U(1, 5, 2))
    return tuple(U(1, 5, 3))


CK_CASES = ("birth.birth", "birth.gamma", "through-one", "ck-case-1", "ck-case-2",
            "entrance.death", "death.death")


def check_ck(params: ProcessParams, n_per_case: int = 100, seed: int = 0) -> list[VerificationReport]:
    """Chapman-Kolmogorov on random (s, m, t, z_s, z_t) for all seven compositions."""
    out = []
    for key, case in enumerate(CK_CASES):
        rng = make_rng(seed, 1, key)
        worst, errs, Ks, panels = None, [], [], []
        for _ in range(n_per_case):
            s, m, t = _ck_times(case, rng)
            assert composition_case(s, m, t) == case
            z_s = _sample_state(params, s, rng)
            z_t = _sample_next(params, s, t, z_s, rng)
            rep = verify_ck(params, s, m, t, z_s, z_t)
            err = rep.diagnostics["scaled_error"]
            errs.append(err)
            Ks.append(rep.diagnostics.get("truncation_K", 0))
            panels.append(rep.diagnostics.get("quadrature_panels", 0))
            if worst is None or err >= max(errs):
                worst = rep.diagnostics
        method = "quadrature" if case == "through-one" else "exact-sum"
        out.append(compare(f"ck/{case}", method, max(errs), 0.0, params.eps_check, seed,
                           theta=params.theta, n=n_per_case, worst=worst,
                           max_truncation_K=max(Ks), max_quadrature_panels=max(panels)))
    return out


# ------------------------------------------------------------------- bridges

BRIDGE_CASES = ("case1", "case2", "case3", "case4", "to-one", "from-one")


def _bridge_times(case, rng):
    U = lambda lo, hi, k: tuple(np.sort(rng.uniform(lo, hi, k)))  # noqa: E731
    if case == "case1":
        return U(0, 1, 3)
    if case == "case2":
        return (*U(0, 1, 2), U(1, 5, 1)[0])
    if case == "case3":
        return (U(0, 1, 1)[0], *U(1, 5, 2))
    if case == "case4":
        return U(1, 5, 3)
    if case == "to-one":
        return (*U(0, 1, 2), 1.0)
    return (1.0, *U(1, 5, 2))


def random_bridge_queries(params: ProcessParams, case: str, n: int, rng):
    """n consistent (query, z_t) pairs drawn along simulated paths."""
    out = []
    for _ in range(n):
        s, t, u = _bridge_times(case, rng)
        z_s = _sample_state(params, s, rng)
        z_t = _sample_next(params, s, t, z_s, rng)
        z_u = _sample_next(params, t, u, z_t, rng)
        out.append((br.BridgeQuery(s, t, u, z_s, z_u), z_t))
    return out


def check_bridge_bayes(params: ProcessParams, n_per_case: int = 200, seed: int = 0, tol: float = 1e-10):
    out = []
    for key, case in enumerate(BRIDGE_CASES):
        rng = make_rng(seed, 2, key)
        errs = []
        for q, z_t in random_bridge_queries(params, case, n_per_case, rng):
            zs = np.arange(max(0, z_t - 2), z_t + 3)
            a = np.exp(br.bridge_log_mass(params, q, zs))
            b = np.exp(br.bayes_log_mass(params, q, zs))
            errs.append(float(np.max(np.abs(a - b))))
        out.append(compare(f"bridge/bayes/{case}", "exact-sum", max(errs), 0.0, tol, seed,
                           theta=params.theta, n=n_per_case))
    return out


def check_harness(params: ProcessParams, n_per_case: int = 200, seed: int = 0, tol: float = 1e-10):
    """Conditional mean is linear and conditional variance quadratic (eta = theta, q = 1)."""
    out = []
    for key, case in enumerate(BRIDGE_CASES):
        rng = make_rng(seed, 2, key)
        mean_err, var_err = [], []
        for q, _ in random_bridge_queries(params, case, n_per_case, rng):
            m, v = br.conditional_moments(params, q)
            mean_err.append(abs(m - br.harness_mean(params, q)))
            var_err.append(abs(v - br.harness_variance(params, q)))
        out.append(compare(f"harness/mean/{case}", "closed-form", max(mean_err), 0.0, tol, seed,
                           theta=params.theta, n=n_per_case))
        out.append(compare(f"harness/variance/{case}", "closed-form", max(var_err), 0.0, tol, seed,
                           theta=params.theta, n=n_per_case))
    return out


def check_bridge_tower(params: ProcessParams, n_per_case: int = 50, seed: int = 0, rtol: float = 1e-10):
    """Averaging the bridge mean over Z_u | Z_s recovers E[Z_t | Z_s]."""
    out = []
    for key, case in enumerate(("case1", "case2", "case3", "case4", "from-one")):
        rng = make_rng(seed, 3, key)
        errs = []
        for q, _ in random_bridge_queries(params, case, n_per_case, rng):
            first = forward_kernel(params, q.s, q.u, q.z_s)
            ks, lp, _ = support_table(first.law, params.eps_tail)
            total = 0.0
            for z_u, w in zip(ks + first.offset, np.exp(lp)):
                qq = br.BridgeQuery(q.s, q.t, q.u, q.z_s, int(z_u))
                bl = br.bridge_law(params, qq)
                total += w * (bl.offset + bl.law.moments()[0])
            kl = forward_kernel(params, q.s, q.t, q.z_s)
            ref = kl.offset + kl.law.moments()[0]
            errs.append(abs(total - ref) / max(1.0, abs(ref)))
        out.append(compare(f"bridge/tower/{case}", "exact-sum", max(errs), 0.0, rtol, seed,
                           theta=params.theta, n=n_per_case))
    return out


# ---------------------------------------------------------------- inversion

def reversed_kernel_log_mass(params: ProcessParams, a: float, b: float, z_a, z_b):
    """log P(Z_{1/b} = z_b | Z_{1/a} = z_a) by Bayes from the forward kernel and marginals."""
    return (
        kernel_log_mass(params, 1.0 / b, 1.0 / a, z_b, z_a)
        + marginal_log_mass(params, 1.0 / b, z_b)
        - marginal_log_mass(params, 1.0 / a, z_a)
    )


def check_inversion(params: ProcessParams, n: int = 100, seed: int = 0, mc_n: int = 20_000,
                    n_seeds: int = N_SEEDS) -> list[VerificationReport]:
    rng = make_rng(seed, 4, 0)
    out = []

    # (i) Z_t and Z_{1/t} have the same law.
    diffs = []
    for t in rng.uniform(0.01, 0.99, n):
        lo, hi = marginal(params, t), marginal(params, 1.0 / t)
        diffs.append(max(abs(lo.r - hi.r), abs(lo.p - hi.p)))
    out.append(compare("inversion/marginal", "closed-form", max(diffs), 0.0, 1e-12, seed, n=n))

    # (ii) forward kernel a -> b equals the Bayes-reversed kernel 1/b -> 1/a.
    errs = []
    for _ in range(n):
        a, b = np.sort(np.exp(rng.uniform(math.log(0.1), math.log(10.0), 2)))
        z_a = _sample_state(params, a, rng)
        z_b = _sample_next(params, a, b, z_a, rng)
        fwd = math.exp(kernel_log_mass(params, a, b, z_a, z_b))
        rev = math.exp(reversed_kernel_log_mass(params, a, b, z_a, z_b))
        errs.append(abs(fwd - rev))
    out.append(compare("inversion/kernel", "closed-form", max(errs), 0.0, 1e-10, seed, n=n))

    # (iii) f_Delta(t) = f_Gamma(1/t) / prod t_i^2.
    errs = []
    for _ in range(n):
        k = int(rng.integers(0, 4))
        t = np.sort(1.0 + rng.exponential(2.0, k + 1))[::-1]
        lhs = delta_jump_log_density(params, t)
        rhs = gamma_jump_log_density(params, 1.0 / t) - 2.0 * np.sum(np.log(t))
        errs.append(abs(lhs - rhs))
    out.append(compare("inversion/jump-density", "closed-form", max(errs), 0.0, 1e-12, seed, n=n))

    # (iv) simulated (1/Delta_0, 1/Delta_1) against simulated (Gamma_0, Gamma_1).
    for i in range(2):
        def pv(g, i=i):
            up = sample_birth_jump_times(params, 1, mc_n, g)[:, i]
            down = 1.0 / sample_death_jump_times(params, 1, mc_n, g)[:, i]
            return stats.ks_2samp(up, down).pvalue
        out.append(_repeat(f"inversion/jump-times-{i}", pv, seed, 40 + i, n_seeds, n=mc_n, test="ks-2samp"))
    return out


# ------------------------------------------------------------- jump densities

def _ggg_density(params, k):
    def f(*s):
        s = s[::-1]  # dblquad passes the inner variable first
        if any(b <= a for a, b in zip(s, s[1:])):
            return 0.0
        return math.exp(gamma_jump_log_density(params, s))
    return f


def jump_density_normalization(params: ProcessParams, k: int) -> float:
    """Total mass of the density of (Gamma_0, ..., Gamma_k), k in {0, 1}.

    The last time behaves like (1 - s)^(r0 - 1) near 1, so it is integrated
    in y with 1 - s = y^m, m = max(1, 1/r0); the inner time uses
    v = 1 / (1 - s_0), which flattens its (1 - s_0)^-2 factor.
    """
    m = max(1.0, 1.0 / params.r0)

    def outer(y):
        if y <= 0.0:
            return 0.0
        c = y**m
        if k == 0:
            dens = math.exp(gamma_jump_log_density(params, [1.0 - c], one_minus_s=[c]))
        else:
            def g(v):
                c0 = 1.0 / v
                if c0 <= c:
                    return 0.0
                return math.exp(gamma_jump_log_density(params, [1.0 - c0, 1.0 - c], one_minus_s=[c0, c])) * c0 * c0
            dens, _ = integrate.quad(g, 1.0, 1.0 / c, epsabs=1e-14, epsrel=1e-12, limit=200)
        return dens * m * y ** (m - 1.0)

    if k not in (0, 1):
        raise ValueError("normalization implemented for k in {0, 1}")
    val, _ = integrate.quad(outer, 0.0, 1.0, epsabs=1e-12, epsrel=1e-12, limit=200)
    return val


def jump_cell_probabilities(params: ProcessParams, edges) -> np.ndarray:
    """P(Gamma_0 in bin i, Gamma_1 in bin j) for i <= j by 2-d quadrature."""
    nb = len(edges) - 1
    probs = np.zeros((nb, nb))
    for i in range(nb):
        for j in range(i, nb):
            lo0, hi0, lo1, hi1 = edges[i], edges[i + 1], edges[j], edges[j + 1]
            val, _ = integrate.dblquad(
                lambda s0, s1: math.exp(gamma_jump_log_density(params, [s0, s1])) if s0 < s1 else 0.0,
                lo1, hi1, lo0, lambda s1: min(hi0, s1), epsabs=1e-11, epsrel=1e-9,
            )
            probs[i, j] = val
    return probs


def _merge_small(expected: np.ndarray, observed: np.ndarray, min_expected: float = 5.0):
    order = np.argsort(expected)
    e, o = expected[order], observed[order]
    cut = 0
    while cut < len(e) and e[:cut].sum() < min_expected and e[cut] < min_expected:
        cut += 1
    if cut > 1 or (cut == 1 and e[0] < min_expected):
        e = np.concatenate([[e[:cut].sum()], e[cut:]])
        o = np.concatenate([[o[:cut].sum()], o[cut:]])
    return e, o


def chi2_gof_pvalue(observed: np.ndarray, probs: np.ndarray) -> float:
    n = observed.sum()
    e, o = _merge_small(probs * n, observed.astype(float))
    e = e * (o.sum() / e.sum())
    return float(stats.chisquare(o, e).pvalue)


def check_jump_densities(params: ProcessParams, seed: int = 0, mc_n: int = 100_000,
                         n_seeds: int = N_SEEDS, edges=(0.0, 0.2, 0.4, 0.6, 0.8, 1.0)):
    out = []
    for k in (0, 1):
        out.append(compare(f"jumps/normalization-k{k}", "quadrature", jump_density_normalization(params, k),
                           1.0, 1e-6, seed, theta=params.theta))
    edges = np.asarray(edges)
    probs = jump_cell_probabilities(params, edges)
    mask = np.triu(np.ones_like(probs, dtype=bool))

    def pv(g):
        s = sample_birth_jump_times(params, 1, mc_n, g)
        h, _, _ = np.histogram2d(s[:, 0], s[:, 1], bins=[edges, edges])
        return chi2_gof_pvalue(h[mask], probs[mask])

    out.append(_repeat("jumps/histogram", pv, seed, 50, n_seeds, n=mc_n, edges=edges.tolist(),
                       cell_mass=float(probs[mask].sum())))
    return out


# ----------------------------------------------------------------- hitting

def check_hitting_time(params: ProcessParams, seed: int = 0, n: int = 100_000,
                       t_grid=(2.0, 5.0, 10.0), k_grid=range(2, 9)):
    rng = make_rng(seed, 6, 0)
    d0 = sample_death_jump_times(params, 0, n, rng)[:, 0]
    out = [_violations("hitting/finite", "monte-carlo", np.isfinite(d0), seed, n=n)]
    for t in t_grid:
        ref = float(hitting_time_survival(params, t))
        emp = float(np.mean(d0 > t))
        se = math.sqrt(ref * (1 - ref) / n)
        out.append(compare(f"hitting/survival-t{t:g}", "monte-carlo", emp, ref, N_SE * se, seed, n=n))
    floor = min(1.0, params.r0)
    integrals = [integrate.quad(lambda t: float(hitting_time_survival(params, t)), 1.0, math.exp(k),
                                limit=400, epsabs=1e-10)[0] for k in k_grid]
    ks = list(k_grid)
    flags = [I >= 0.9 * floor * k for I, k in zip(integrals, ks)]
    flags += [b > a for a, b in zip(integrals, integrals[1:])]
    out.append(_violations("hitting/divergent-mean", "quadrature", flags, seed,
                           k=ks, partial_integrals=integrals, lower_bounds=[0.9 * floor * k for k in ks]))
    return out


# ------------------------------------------------------------------ moments

def check_covariance(params: ProcessParams, seed: int = 0, n: int = 1_000_000,
                     times=(0.25, 0.5, 1.0, 2.0, 4.0), pairs=((0.5, 2.0), (0.25, 4.0), (1.0, 2.0)),
                     fourth_at=(1.0,)):
    rng = make_rng(seed, 7, 0)
    times = tuple(sorted(set(times) | {x for p in pairs for x in p} | set(fourth_at)))
    Z = sample_fdd(params, times, n, rng)
    X = np.column_stack([z_to_x(params, t, Z[:, j]) for j, t in enumerate(times)])
    col = {t: j for j, t in enumerate(times)}
    out = []
    for t in times:
        x = X[:, col[t]]
        sd = x.std()
        out.append(compare(f"moments/mean-t{t:g}", "monte-carlo", float(x.mean()), 0.0, N_SE * sd / math.sqrt(n),
                           seed, n=n))
        var = float(x.var())
        se = math.sqrt(max(np.mean((x - x.mean()) ** 4) - var**2, 0.0) / n)
        out.append(compare(f"moments/variance-t{t:g}", "monte-carlo", var, t, N_SE * se, seed, n=n))
    for s, t in pairs:
        prod = X[:, col[s]] * X[:, col[t]]
        out.append(compare(f"moments/covariance-{s:g}-{t:g}", "monte-carlo", float(prod.mean()), min(s, t),
                           N_SE * prod.std() / math.sqrt(n), seed, n=n))
    for t in fourth_at:
        x4 = X[:, col[t]] ** 4
        out.append(compare(f"moments/fourth-t{t:g}", "monte-carlo", float(x4.mean()),
                           fourth_moment(params.theta, t), N_SE * x4.std() / math.sqrt(n), seed, n=n))
    return out


# ------------------------------------------------------------------- limits

POISSON_LIMIT_TIMES = (0.5, 1.0, 2.0)
POISSON_LIMIT_U = (-0.5, -0.1, -0.3)
BROWNIAN_LIMIT_TIMES = (0.5, 1.0, 2.0, 3.0)
BROWNIAN_LIMIT_U = (-0.5, 0.1, 0.3, -0.1)


def _limit_report(claim_id, grid, gaps, tol, **diag):
    monotone = all(b < a for a, b in zip(gaps, gaps[1:]))
    ok = monotone and gaps[-1] < tol
    diag.update(grid=list(grid), gaps=gaps, monotone=monotone)
    return VerificationReport(claim_id, "exact-sum", gaps[-1], 0.0, tol, ok, diag)


def check_poisson_limit(eps_grid=(0.3, 0.1, 0.03, 0.01), times=POISSON_LIMIT_TIMES, u=POISSON_LIMIT_U,
                        tol: float = 1e-3) -> VerificationReport:
    """E exp(sum u_j Z_{t_j eps^2}) at theta = eps approaches the unit Poisson MGF."""
    if any(v > 0 for v in u):
        raise ValueError("the Poisson limit is checked for u_j <= 0 only")
    limit = math.exp(poisson_limit_log_mgf(times, u))
    gaps = []
    for eps in eps_grid:
        q = JointMgfQuery(tuple(t * eps * eps for t in times), tuple(u), eps, space="z")
        gaps.append(abs(math.exp(joint_log_mgf(q)) - limit))
    return _limit_report("limits/poisson", eps_grid, gaps, tol, times=list(times), u=list(u), limit=limit)


def check_brownian_limit(theta_grid=(0.5, 0.2, 0.05, 0.01), times=BROWNIAN_LIMIT_TIMES, u=BROWNIAN_LIMIT_U,
                         tol: float = 1e-3) -> VerificationReport:
    limit = math.exp(gaussian_limit_log_mgf(times, u))
    gaps, cases = [], None
    for th in theta_grid:
        log_m, steps = joint_log_mgf_steps(JointMgfQuery(tuple(times), tuple(u), th))
        gaps.append(abs(math.exp(log_m) - limit))
        cases = [st.case for st in steps]
    return _limit_report("limits/brownian", theta_grid, gaps, tol, times=list(times), u=list(u), limit=limit,
                         recursion_cases=cases)


def check_joint_mgf_consistency(params: ProcessParams, u_grid=(-0.5, -0.1, 0.1, 0.3),
                                times=(0.25, 0.5, 1.0, 2.0, 4.0), rtol: float = 1e-12):
    """One-time joint MGF equals the marginal law's MGF under the affine map."""
    errs = []
    for t in times:
        a, b = affine(params, t)
        law = marginal(params, t)
        for u in u_grid:
            try:
                ref = math.exp(u * b + law.log_mgf(u * a))
            except ValueError:
                continue
            val = math.exp(joint_log_mgf(JointMgfQuery((t,), (u,), params.theta)))
            errs.append(abs(val - ref) / ref)
    return compare("limits/joint-mgf-marginal", "closed-form", max(errs), 0.0, rtol, None, theta=params.theta)


def check_joint_mgf_mc(params: ProcessParams, seed: int = 0, n: int = 1_000_000,
                       times=(0.5, 2.0), u=(0.1, 0.2)) -> VerificationReport:
    rng = make_rng(seed, 8, 0)
    Z = sample_fdd(params, times, n, rng)
    s = sum(ui * z_to_x(params, t, Z[:, j]) for j, (t, ui) in enumerate(zip(times, u)))
    e = np.exp(s)
    exact = math.exp(joint_log_mgf(JointMgfQuery(tuple(times), tuple(u), params.theta)))
    return compare("limits/joint-mgf-monte-carlo", "monte-carlo", float(e.mean()), exact,
                   N_SE * e.std() / math.sqrt(n), seed, n=n, times=list(times), u=list(u))


# ----------------------------------------------------------- representation

def _joint_codes(Z):
    """Integer code per row of a 2-column integer array."""
    return Z[:, 0].astype(np.int64) * 1_000_003 + Z[:, 1].astype(np.int64)


def two_sample_chi2_pvalue(a_codes: np.ndarray, b_codes: np.ndarray) -> float:
    cats, inv = np.unique(np.concatenate([a_codes, b_codes]), return_inverse=True)
    na = len(a_codes)
    ca = np.bincount(inv[:na], minlength=len(cats)).astype(float)
    cb = np.bincount(inv[na:], minlength=len(cats)).astype(float)
    pooled = ca + cb
    frac = min(na, len(b_codes)) / (na + len(b_codes))
    order = np.argsort(pooled)
    ca, cb, pooled = ca[order], cb[order], pooled[order]
    # pool the rarest categories into one until every expected count is >= 5
    small = pooled * frac < 5
    cut = int(np.count_nonzero(small))
    while cut < len(pooled) and pooled[:cut].sum() * frac < 5:
        cut += 1
    if cut:
        ca = np.concatenate([[ca[:cut].sum()], ca[cut:]])
        cb = np.concatenate([[cb[:cut].sum()], cb[cut:]])
    table = np.vstack([ca, cb])
    table = table[:, table.sum(axis=0) > 0]
    if table.shape[1] < 2:
        return 1.0
    return float(stats.chi2_contingency(table, correction=False).pvalue)


def check_two_simulators(params: ProcessParams, seed: int = 0, n: int = 100_000, n_seeds: int = N_SEEDS,
                         times=(0.5, 2.0)) -> VerificationReport:
    """Forward and representation constructions give the same joint law of (Z_s, Z_t)."""
    def pv(g):
        a = sample_fdd(params, times, n, g, method="forward")
        b = sample_fdd(params, times, n, g, method="representation")
        return two_sample_chi2_pvalue(_joint_codes(a), _joint_codes(b))
    return _repeat("representation/two-simulators", pv, seed, 90, n_seeds, n=n, times=list(times),
                   theta=params.theta)


def check_forward_marginals(params: ProcessParams, seed: int = 0, n: int = 100_000, n_seeds: int = N_SEEDS,
                            times=(0.25, 0.5, 0.75)) -> list[VerificationReport]:
    out = []
    for key, t in enumerate(times):
        law = marginal(params, t)
        ks, lp, _ = support_table(law)

        def pv(g, t=t, ks=ks, lp=lp):
            z = sample_fdd(params, (t,), n, g)[:, 0].astype(np.int64)
            obs = np.bincount(np.minimum(z, ks[-1]), minlength=len(ks)).astype(float)
            probs = np.exp(lp)
            probs[-1] += max(0.0, 1.0 - probs.sum())
            return chi2_gof_pvalue(obs, probs)
        out.append(_repeat(f"representation/forward-marginal-t{t:g}", pv, seed, 100 + key, n_seeds, n=n))

    def pv1(g):
        z1 = sample_fdd(params, (0.5, 1.0), n, g)[:, 1]
        return stats.kstest(z1, stats.gamma(params.r0).cdf).pvalue
    out.append(_repeat("representation/forward-z1", pv1, seed, 110, n_seeds, n=n, test="ks"))
    return out


def check_poisson_representation(params: ProcessParams, seed: int = 0, n: int = 100_000):
    """Given Z_1, windows of equal a-length carry Poisson(theta Z_1 L) counts in both phases.

    Paths come from the forward construction, so the birth-phase statements
    test the representation against an independent sampler.
    """
    rng = make_rng(seed, 9, 0)
    th = params.theta
    L = 1.0 / th
    # a = L, 2L  <->  s = 1/2, 2/3 (birth) and t = 2, 3/2 (death)
    times = (0.5, 2.0 / 3.0, 1.0, 1.5, 2.0)
    Z = sample_fdd(params, times, n, rng)
    lam = th * Z[:, 2] * L
    b1, b2 = Z[:, 0], Z[:, 1] - Z[:, 0]
    d1, d2 = Z[:, 4], Z[:, 3] - Z[:, 4]
    out = []
    sq = math.sqrt(n)
    for name, c in (("birth-1", b1), ("birth-2", b2), ("death-1", d1), ("death-2", d2)):
        ok = lam > 0
        r = (c[ok] - lam[ok]) / np.sqrt(lam[ok])
        out.append(compare(f"representation/{name}-mean", "monte-carlo", float(r.mean()), 0.0,
                           N_SE * r.std() / sq, seed, n=n))
        disp = (c[ok] - lam[ok]) ** 2 / lam[ok]
        out.append(compare(f"representation/{name}-dispersion", "monte-carlo", float(disp.mean()), 1.0,
                           N_SE * disp.std() / sq, seed, n=n))
    diff = b1 - b2
    out.append(compare("representation/equal-window-means", "monte-carlo", float(diff.mean()), 0.0,
                       N_SE * diff.std() / sq, seed, n=n))
    rb, rd = b1 - lam, d1 - lam
    corr = float(np.corrcoef(rb, rd)[0, 1])
    out.append(compare("representation/phase-independence", "monte-carlo", corr, 0.0, N_SE / sq, seed, n=n))
    ratio = float(b1.var() / b1.mean())
    se = ratio * math.sqrt(2.0 / n) * 2.0
    out.append(compare("representation/overdispersion", "monte-carlo", ratio, 1.0 + th * L, N_SE * se, seed,
                       n=n, exceeds_one=ratio > 1.0))
    return out


# -------------------------------------------------------------------- suites

def run_suite(name: str, params: ProcessParams, seed: int = 0, n: int = 100_000,
              n_seeds: int = N_SEEDS) -> list[VerificationReport]:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {SUITES}")
    names = SUITES[:-1] if name == "all" else (name,)
    out: list[VerificationReport] = []
    for nm in names:
        if nm == "ck":
            out += check_ck(params, 100, seed)
        elif nm == "harness":
            out += check_bridge_bayes(params, 200, seed)
            out += check_harness(params, 200, seed)
            out += check_bridge_tower(params, 50, seed)
        elif nm == "inversion":
            out += check_inversion(params, 100, seed, mc_n=max(1000, n // 5), n_seeds=n_seeds)
            out += check_jump_densities(params, seed, mc_n=n, n_seeds=n_seeds)
        elif nm == "moments":
            out += check_covariance(params, seed, n)
        elif nm == "limits":
            out.append(check_poisson_limit())
            out.append(check_brownian_limit())
            out.append(check_joint_mgf_consistency(params))
            out.append(check_joint_mgf_mc(params, seed, n))
        elif nm == "representation":
            out.append(check_two_simulators(params, seed, n, n_seeds))
            out += check_forward_marginals(params, seed, n, n_seeds)
            out += check_poisson_representation(params, seed, n)
        elif nm == "hitting":
            out += check_hitting_time(params, seed, n)
    for r in out:
        if r.seed is None:
            r.seed = seed
    return sorted(out, key=lambda r: r.claim_id)
