import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from bipoisson.kernel import ProcessParams, marginal
from bipoisson.trajectory import (
    degenerate_reference,
    delta_jump_log_density,
    gamma_jump_log_density,
    hitting_time_survival,
    sample_birth_jump_times,
    sample_death_jump_times,
    sample_fdd,
    simulate_by_representation,
    simulate_death_given_z1,
    simulate_forward,
    x_to_z,
    z_to_x,
)

P1 = ProcessParams(1.0)
P2 = ProcessParams(2.0)


def rng(seed=0):
    return np.random.default_rng(seed)


def test_affine_examples():
    assert z_to_x(P1, 0.0, 0) == 0.0
    assert z_to_x(P1, 1.0, 2.5) == 1.5
    assert z_to_x(P2, 3.0, 1) == 3.5


@settings(max_examples=200, deadline=None)
@given(theta=st.floats(0.1, 5.0), t=st.floats(0.001, 10.0), z=st.integers(0, 10**6))
def test_round_trip_on_lattice(theta, t, z):
    p = ProcessParams(theta)
    if t == 1.0:
        return
    assert x_to_z(p, t, z_to_x(p, t, z)) == z


def test_x_to_z_rejects_off_lattice():
    with pytest.raises(ValueError):
        x_to_z(P1, 0.5, 0.3)
    with pytest.raises(ValueError):
        x_to_z(P1, 0.0, 0.1)
    assert x_to_z(P1, 1.0, 0.25) == 1.25


@pytest.mark.parametrize("sim", [simulate_forward, simulate_by_representation])
def test_trajectory_structure(sim):
    tr = sim(P1, 3.0, rng(1), delta=1e-4)
    assert not tr.truncated
    assert np.all(np.diff(tr.birth_times) > 0) and np.all(np.diff(tr.death_times) > 0)
    assert np.array_equal(tr.birth_levels, np.arange(1, len(tr.birth_times) + 1))
    if len(tr.death_times):
        assert np.all(np.diff(tr.death_levels) == -1) and tr.death_levels[-1] == tr.z_T
    assert tr.birth_times[-1] < 1 - 1e-4 and tr.death_times[0] > 1 + 1e-4
    # piecewise evaluation agrees with the jump counts
    assert tr.z_at(0.5) == np.sum(tr.birth_times <= 0.5)
    assert tr.z_at(2.0) == tr.z_T + np.sum(tr.death_times > 2.0)
    assert tr.z_at(1.0) == tr.z1
    ev = tr.events()
    assert [r[0] for r in ev].count("one") == 1
    births = [r[2] for r in ev if r[0] == "birth"]
    deaths = [r[2] for r in ev if r[0] == "death"]
    assert births == sorted(births) and deaths == sorted(deaths, reverse=True)


def test_grid_lies_on_lines():
    tr = simulate_forward(P2, 3.0, rng(2), delta=1e-3)
    t, x = tr.grid(501)
    for ti, xi in zip(t, x):
        z = tr.z_at(ti)
        if ti < 1:
            assert xi == pytest.approx(2.0 * (1 - ti) * z - ti / 2.0, abs=1e-12)
        elif ti > 1:
            assert xi == pytest.approx(2.0 * (ti - 1) * z - 0.5, abs=1e-12)


def test_truncation_flag():
    tr = simulate_forward(P1, 3.0, rng(3), delta=1e-6, k_max=100)
    assert tr.truncated and len(tr.birth_times) == 100
    assert tr.birth_window_end == tr.birth_times[-1]


def test_determinism():
    a = simulate_forward(P1, 3.0, rng(42), delta=1e-4)
    b = simulate_forward(P1, 3.0, rng(42), delta=1e-4)
    assert a.events() == b.events()


def test_first_birth_uniform_at_theta_one():
    g0 = sample_birth_jump_times(P1, 0, 20000, rng(4))[:, 0]
    assert stats.kstest(g0, "uniform").pvalue > 0.001


@pytest.mark.parametrize("theta", [0.5, 2.0])
def test_first_birth_survival(theta):
    p = ProcessParams(theta)
    g0 = sample_birth_jump_times(p, 0, 20000, rng(5))[:, 0]
    assert stats.kstest(g0, lambda s: 1 - (1 - s) ** p.r0).pvalue > 0.001


def test_mean_birth_count():
    n = 200_000
    z = sample_fdd(P1, (0.5,), n, rng(6))[:, 0]
    mean, var = marginal(P1, 0.5).moments()
    assert mean == 1.0
    assert abs(z.mean() - 1.0) < 4 * math.sqrt(var / n)


def test_death_phase_given_z1():
    n = 20000
    r = rng(7)
    zT = np.array([simulate_death_given_z1(P1, 2.0, 3.0, r, delta=0.5).z_T for _ in range(n)])
    assert abs(zT.mean() - 1.0) < 4 * math.sqrt(1.0 / n)
    assert abs(np.mean(zT == 0) - math.exp(-1)) < 4 * math.sqrt(math.exp(-1) * (1 - math.exp(-1)) / n)
    empty = simulate_death_given_z1(P1, 0.0, 3.0, r)
    assert empty.z_T == 0 and len(empty.death_times) == 0


def test_level_at_horizon_is_poisson_given_z1():
    seg = [simulate_death_given_z1(P2, 1.5, 2.5, rng(i), delta=0.2) for i in range(3000)]
    counts = np.array([s.z_T + len(s.death_times) for s in seg])
    # Z_{1.2} | Z_1 = 1.5 ~ Poisson(1.5 / 0.2)
    assert abs(counts.mean() - 7.5) < 4 * math.sqrt(7.5 / 3000)


def test_martingale_from_interior_start():
    n = 200_000
    for (s, z), t in (((0.3, 2), 0.8), ((0.3, 2), 2.0), ((1.0, 1.7), 2.5), ((1.5, 4), 3.0)):
        Z = sample_fdd(P1, (t,), n, rng(8), start=(s, z))[:, 0]
        X = z_to_x(P1, t, Z)
        assert abs(X.mean() - z_to_x(P1, s, z)) < 4 * X.std() / math.sqrt(n)


def test_jump_density_examples():
    assert gamma_jump_log_density(P1, [0.3]) == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(ValueError):
        gamma_jump_log_density(P1, [0.5, 0.3])
    with pytest.raises(ValueError):
        delta_jump_log_density(P1, [2.0, 3.0])
    assert float(hitting_time_survival(P1, 10.0)) == pytest.approx(0.1, rel=1e-14)


@settings(max_examples=100, deadline=None)
@given(theta=st.floats(0.2, 4.0), t=st.lists(st.floats(1.001, 50.0), min_size=1, max_size=4, unique=True))
def test_inversion_identity(theta, t):
    p = ProcessParams(theta)
    t = np.sort(np.asarray(t))[::-1]
    lhs = delta_jump_log_density(p, t)
    rhs = gamma_jump_log_density(p, 1.0 / t) - 2.0 * np.sum(np.log(t))
    assert lhs == pytest.approx(rhs, abs=1e-12)


def test_death_jump_sampler_survival():
    d0 = sample_death_jump_times(P2, 0, 20000, rng(9))[:, 0]
    assert stats.kstest(d0, lambda t: 1 - hitting_time_survival(P2, t)).pvalue > 0.001


def test_degenerate_references():
    r = rng(10)
    times = np.array([0.5, 1.0, 2.0])
    B = degenerate_reference("brownian", times, 200_000, r)
    assert np.cov(B[:, 0], B[:, 2])[0, 1] == pytest.approx(0.5, abs=0.02)
    X = degenerate_reference("poisson", times, 200_000, r, theta=0.7)
    assert np.allclose(X.mean(axis=0), 0.0, atol=0.02) and np.allclose(X.var(axis=0), times, rtol=0.02)
    Y = degenerate_reference("poisson-inverted", times, 200_000, r, eta=0.7)
    assert np.allclose(Y.mean(axis=0), 0.0, atol=0.02) and np.allclose(Y.var(axis=0), times, rtol=0.02)
    # the clock runs backwards, so forward increments are not independent of the later value
    assert abs(np.corrcoef(Y[:, 2] - Y[:, 1], Y[:, 2] / 2.0)[0, 1]) > 0.1
    with pytest.raises(ValueError):
        degenerate_reference("nope", times, 10, r)
