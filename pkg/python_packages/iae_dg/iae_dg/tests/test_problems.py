import numpy as np
import pytest
from scipy.integrate import quad

from ..problems import (
    IaeProblem,
    MissingExactSolution,
    PerturbationSpec,
    ProblemError,
    Vie1Problem,
    make_vie1,
    rhs_oracle,
)
from ..problems.utils import first_kind_oracle
from ..types import PerturbationProfile
from .conftest import one


def test_closed_forms_match_oracle(builtin):
    rng = np.random.default_rng(7)
    for t in rng.uniform(0.0, builtin.T, 20):
        f1, f2 = rhs_oracle(builtin, t)
        assert builtin.f1(t) == pytest.approx(f1, abs=1e-10)
        assert builtin.f2(t) == pytest.approx(f2, abs=1e-10)


def test_example1_spot_value(ex1):
    assert ex1.f2(1.0) == pytest.approx((np.e**2 - 3) / 4, abs=1e-10)
    assert ex1.f2(1.0) == pytest.approx(1.0972640, abs=1e-7)


@pytest.mark.parametrize(
    "key,x1",
    [
        ["ex1", lambda s: s * np.exp(-s)],
        ["ex2", lambda s: s * np.sin(s)],
        ["ex3", np.cos],
    ],
)
def test_second_equation_data(key, x1, ex1, ex2, ex3):
    """f2 against an adaptive quadrature of int exp(2t - s) x1(s) ds"""
    problem = {"ex1": ex1, "ex2": ex2, "ex3": ex3}[key]
    for t in [0.25, 0.5, 1.0]:
        expected, _ = quad(
            lambda s: np.exp(2.0 * t - s) * x1(s), 0.0, t, epsabs=1e-13, epsrel=1e-13
        )
        assert problem.f2(t) == pytest.approx(expected, abs=1e-10)


def test_oracle_at_origin(ex1):
    f1, f2 = rhs_oracle(ex1, 0.0)
    assert f1 == pytest.approx(0.0)
    assert f2 == 0.0


def test_oracle_bad_input(ex1):
    with pytest.raises(ProblemError):
        rhs_oracle(ex1, 0.5, q=8)
    with pytest.raises(ProblemError):
        rhs_oracle(ex1, 1.5)


def test_odd_derivative_flags(ex1, ex2, ex3):
    assert not ex1.x1_odd_derivatives_vanish
    assert ex2.x1_odd_derivatives_vanish
    assert ex3.x1_odd_derivatives_vanish


def _problem(**overrides):
    fields = dict(
        key="bad",
        K11=lambda t, s: 0.0,
        K12=lambda t, s: 1.0,
        K21=lambda t, s: 1.0,
        f1=lambda t: 2.0 * t,
        f2=lambda t: 0.5 * t**2,
    )
    fields.update(overrides)
    return IaeProblem(**fields)


@pytest.mark.parametrize(
    "overrides",
    [
        # f2(0) != 0
        {"f2": lambda t: 1.0 + t},
        # K21 K12 vanishes on the diagonal
        {"K21": lambda t, s: t - s},
        # data does not belong to the exact solution
        {"exact_x1": lambda t: t, "exact_x2": lambda t: 2.0 + 0 * t},
        {"T": -1.0},
    ],
)
def test_bad_problem(overrides):
    with pytest.raises(ProblemError):
        _problem(**overrides)


def test_no_exact_solution():
    problem = _problem()
    assert not problem.has_exact
    with pytest.raises(MissingExactSolution):
        problem.exact(1)
    with pytest.raises(ProblemError):
        problem.kernel(2, 2)


def test_first_kind(ex1):
    vie1 = ex1.first_kind()
    assert isinstance(vie1, Vie1Problem)
    assert vie1.k is ex1.K21
    assert vie1.exact(1) is ex1.exact_x1


def test_make_vie1_from_oracle():
    problem = make_vie1(lambda t, s: np.exp(t - s), exact=np.cos)
    # int_0^t exp(t - s) cos(s) ds
    expected = 0.5 * (np.sin(0.7) - np.cos(0.7) + np.exp(0.7))
    assert problem.g(np.array(0.7)) == pytest.approx(expected, abs=1e-12)
    assert first_kind_oracle(problem.k, np.cos, 0.0) == 0.0


def test_make_vie1_needs_data():
    with pytest.raises(ProblemError):
        make_vie1(lambda t, s: 1.0)


def test_vie1_kernel_vanishes():
    with pytest.raises(ProblemError):
        Vie1Problem(key="bad", k=lambda t, s: t - s, g=lambda t: t)


def test_perturbation_profiles():
    s = np.array([0.0, 0.5, 1.0])
    smooth = PerturbationSpec(m1=2, shape=one)
    resonant = PerturbationSpec(m1=2, shape=one, profile="resonant")
    assert resonant.profile is PerturbationProfile.RESONANT
    np.testing.assert_allclose(smooth.local_values(0.5, 3, 0.0, s), 0.25)
    np.testing.assert_allclose(
        resonant.local_values(0.5, 3, 0.0, s), 0.25 * np.array([-2.0, -1.0, 0.0])
    )


def test_bad_perturbation():
    with pytest.raises(ProblemError):
        PerturbationSpec(m1=0)
