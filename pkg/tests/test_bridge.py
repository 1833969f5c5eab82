import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bipoisson import bridge as br
from bipoisson.dists import Binomial, NegativeBinomial, Poisson
from bipoisson.kernel import ProcessParams
from bipoisson.verify import BRIDGE_CASES, random_bridge_queries

P1 = ProcessParams(1.0)


def test_case1_example():
    q = br.BridgeQuery(0.2, 0.4, 0.6, 0, 2)
    bl = br.bridge_law(P1, q)
    assert bl.case == "case1" and bl.offset == 0 and bl.orientation == br.FROM_LEFT
    assert bl.law.n == 2 and bl.law.p == pytest.approx(1.0 / 3.0, rel=1e-14)
    # the Bayes composition agrees on every support point
    ks = np.arange(3)
    assert np.allclose(br.bridge_log_mass(P1, q, ks), br.bayes_log_mass(P1, q, ks), atol=1e-12)


def test_case2_example():
    bl = br.bridge_law(P1, br.BridgeQuery(0.5, 0.8, 2.0, 1, 0))
    assert bl.case == "case2" and bl.offset == 1
    assert bl.law.r == pytest.approx(2.0) and bl.law.p == pytest.approx(0.5, rel=1e-14)


def test_equal_endpoints_are_point_mass():
    bl = br.bridge_law(P1, br.BridgeQuery(0.1, 0.3, 0.7, 4, 4))
    assert bl.law == Binomial(0, bl.law.p) and bl.offset == 4
    assert br.bridge_log_mass(P1, br.BridgeQuery(0.1, 0.3, 0.7, 4, 4), 4) == 0.0


def test_case1_all_successes():
    q = br.BridgeQuery(0.1, 0.5, 0.7, 1, 4)
    p = br.bridge_law(P1, q).law.p
    assert br.bridge_log_mass(P1, q, 4) == pytest.approx(3 * math.log(p), abs=1e-14)


def test_case3_support():
    p2 = ProcessParams(2.0)
    q = br.BridgeQuery(0.5, 1.5, 3.0, 0, 1)
    assert br.bridge_law(p2, q).case == "case3"
    assert np.isfinite(br.bridge_log_mass(p2, q, 1))
    assert br.bridge_log_mass(p2, q, 0) == -np.inf


def test_boundary_cases():
    bl = br.bridge_law(P1, br.BridgeQuery(0.2, 0.5, 1.0, 1, 2.5))
    assert bl.case == "to-one" and isinstance(bl.law, Poisson)
    bl = br.bridge_law(P1, br.BridgeQuery(1.0, 2.0, 3.0, 2.5, 1))
    assert bl.case == "from-one" and isinstance(bl.law, Poisson) and bl.orientation == br.FROM_RIGHT
    with pytest.raises(br.UnsupportedBridgeError):
        br.bridge_law(P1, br.BridgeQuery(0.5, 1.0, 2.0, 1, 1))


@pytest.mark.parametrize("args", [(0.5, 0.4, 0.6, 0, 1), (0.2, 0.4, 0.6, 3, 1), (1.5, 2.0, 3.0, 1, 2),
                                  (0.0, 0.5, 0.7, 1, 2), (0.2, 0.4, 0.6, 0.5, 1)])
def test_invalid_queries(args):
    with pytest.raises((ValueError, TypeError)):
        br.BridgeQuery(*args)


@pytest.mark.parametrize("theta", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("case", BRIDGE_CASES)
def test_bayes_and_harness(theta, case):
    p = ProcessParams(theta)
    rng = np.random.default_rng(11)
    for q, z_t in random_bridge_queries(p, case, 30, rng):
        zs = np.arange(max(0, z_t - 3), z_t + 4)
        a = np.exp(br.bridge_log_mass(p, q, zs))
        b = np.exp(br.bayes_log_mass(p, q, zs))
        assert np.max(np.abs(a - b)) < 1e-10
        m, v = br.conditional_moments(p, q)
        assert m == pytest.approx(br.harness_mean(p, q), abs=1e-10)
        assert v == pytest.approx(br.harness_variance(p, q), abs=1e-10)


@settings(max_examples=100, deadline=None)
@given(s=st.floats(0.0, 0.9), dt=st.floats(0.01, 0.5), du=st.floats(0.01, 0.5),
       zs=st.integers(0, 10), extra=st.integers(0, 10))
def test_case1_conditional_mean_is_linear(s, dt, du, zs, extra):
    t, u = s + dt * (1 - s), s + (dt + du * (1 - dt)) * (1 - s)
    if not (s < t < u < 1):
        return
    zs = 0 if s == 0 else zs
    q = br.BridgeQuery(s, t, u, zs, zs + extra)
    assert br.conditional_moments(P1, q)[0] == pytest.approx(br.harness_mean(P1, q), abs=1e-9)
