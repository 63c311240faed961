import numpy as np
from pytest import fixture

# local imports
from iae_dg import ConvergenceStudy, DgSolver, Mesh
from iae_dg.problems import IaeProblem, example1, example2, example3
from iae_dg.registry import ProblemRegistry

# the doubling sequence of the convergence tables
TABLE_N = [4, 8, 16, 32]

ORDER_TOL = 0.35


def one(t):
    return np.ones_like(t)


def polynomial_iae() -> IaeProblem:
    """x1 = t and x2 = 1 lie in every trial space with m >= 2"""
    return IaeProblem(
        key="polynomial",
        K11=lambda t, s: 0.0,
        K12=lambda t, s: 1.0,
        K21=lambda t, s: 1.0,
        f1=lambda t: 2.0 * t,
        f2=lambda t: 0.5 * t**2,
        exact_x1=lambda t: t,
        exact_x2=one,
    )


def not_a_problem():
    return {"key": "nope"}


@fixture(scope="session")
def study() -> ConvergenceStudy:
    """shared so the table tests solve each (problem, m, N) once"""
    return ConvergenceStudy(max_workers=2)


@fixture
def solver() -> DgSolver:
    return DgSolver(check_residual=True)


@fixture
def registry() -> ProblemRegistry:
    return ProblemRegistry()


@fixture(scope="session")
def ex1():
    return example1()


@fixture(scope="session")
def ex2():
    return example2()


@fixture(scope="session")
def ex3():
    return example3()


@fixture(params=["ex1", "ex2", "ex3"])
def builtin(request, ex1, ex2, ex3) -> IaeProblem:
    return {"ex1": ex1, "ex2": ex2, "ex3": ex3}[request.param]


@fixture
def mesh4() -> Mesh:
    return Mesh(T=1.0, N=4)


@fixture
def polynomial() -> IaeProblem:
    return polynomial_iae()
