import json
import math
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bipoisson.dists import DivergenceError
from bipoisson.kernel import ProcessParams, marginal
from bipoisson.mgf import (
    JointMgfQuery,
    gaussian_limit_log_mgf,
    joint_log_mgf,
    joint_log_mgf_steps,
    joint_mgf,
    poisson_limit_log_mgf,
)
from bipoisson.trajectory import affine

ORACLES = json.loads((Path(__file__).parent / "oracles.json").read_text())


@pytest.mark.parametrize("row", ORACLES["joint_mgf"], ids=lambda r: f"theta{r['theta']}-{len(r['times'])}pt")
def test_joint_mgf_matches_path_integral_oracle(row):
    q = JointMgfQuery(tuple(row["times"]), tuple(row["u"]), row["theta"])
    assert joint_mgf(q) == pytest.approx(row["value"], rel=1e-12)


def test_zero_argument_is_one():
    q = JointMgfQuery((0.3, 1.0, 2.5), (0.0, 0.0, 0.0), 1.5)
    assert joint_mgf(q) == 1.0


def test_single_time_is_marginal_mgf():
    p = ProcessParams(0.8)
    for t in (0.4, 1.0, 3.0):
        a, b = affine(p, t)
        u = -0.2
        ref = math.exp(u * b) * marginal(p, t).mgf(u * a)
        assert joint_mgf(JointMgfQuery((t,), (u,), 0.8)) == pytest.approx(ref, rel=1e-13)


def test_divergence_reports_step_and_bound():
    with pytest.raises(DivergenceError) as err:
        joint_mgf(JointMgfQuery((0.5, 2.0), (0.1, 5.0), 1.0))
    assert "step" in str(err.value) and err.value.bound > 0


def test_recursion_cases_listed_backwards():
    _, steps = joint_log_mgf_steps(JointMgfQuery((0.5, 1.0, 2.0, 3.0), (0.1, 0.1, 0.1, 0.1), 1.0))
    assert [s.case for s in steps] == ["death", "entrance", "birth-to-one", "birth"]


def test_query_validation():
    with pytest.raises(ValueError):
        JointMgfQuery((0.5, 0.5), (0.1, 0.1), 1.0)
    with pytest.raises(ValueError):
        JointMgfQuery((0.5,), (0.1, 0.2), 1.0)
    with pytest.raises(ValueError):
        JointMgfQuery((0.0,), (0.1,), 1.0)
    with pytest.raises(ValueError):
        JointMgfQuery((0.5,), (0.1,), 1.0, space="y")


def test_second_derivatives_give_covariance():
    # d^2/du1 du2 log M at 0 is Cov(X_s, X_t) = min(s, t)
    th, s, t, h = 0.7, 0.5, 2.0, 1e-4
    f = lambda a, b: joint_log_mgf(JointMgfQuery((s, t), (a, b), th))  # noqa: E731
    d = (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4 * h * h)
    assert d == pytest.approx(min(s, t), rel=1e-5)


@settings(max_examples=50, deadline=None)
@given(theta=st.floats(0.2, 3.0), t=st.floats(0.05, 5.0), u=st.floats(-0.3, 0.3))
def test_z_space_single_time(theta, t, u):
    p = ProcessParams(theta)
    q = JointMgfQuery((t,), (u,), theta, space="z")
    try:
        ref = marginal(p, t).mgf(u)
    except DivergenceError:
        with pytest.raises(DivergenceError):
            joint_log_mgf(q)
        return
    assert joint_mgf(q) == pytest.approx(ref, rel=1e-12)


def test_limit_formulas():
    assert poisson_limit_log_mgf([1.0], [math.log(2.0)]) == pytest.approx(1.0)
    # N_1 + N_2 = 2 N_1 + (N_2 - N_1)
    ref = math.expm1(0.2) + math.expm1(0.1)
    assert poisson_limit_log_mgf([1.0, 2.0], [0.1, 0.1]) == pytest.approx(ref, rel=1e-14)
    assert gaussian_limit_log_mgf([1.0, 2.0], [1.0, -1.0]) == pytest.approx(0.5, rel=1e-14)


def test_approach_to_limits():
    times, u = (0.5, 1.0, 2.0), (-0.5, -0.1, -0.3)
    lim = math.exp(poisson_limit_log_mgf(times, u))
    gaps = [abs(joint_mgf(JointMgfQuery(tuple(t * e * e for t in times), u, e, space="z")) - lim)
            for e in (0.3, 0.1, 0.03, 0.01)]
    assert np.all(np.diff(gaps) < 0) and gaps[-1] < 1e-3
    # the Gaussian gap is first order in theta, so it is only asserted to shrink here
    lim = math.exp(gaussian_limit_log_mgf(times, u))
    gaps = [abs(joint_mgf(JointMgfQuery(times, u, th)) - lim) for th in (0.5, 0.2, 0.05, 0.01)]
    assert np.all(np.diff(gaps) < 0)
    assert gaps[-1] / gaps[-2] == pytest.approx(0.2, rel=0.1)
