""" built-in problems
"""

# flake8: noqa: F401

from .example1 import Example1
from .example2 import Example2
from .example3 import Example3
from .utils import (
    ExampleSpec,
    IaeProblem,
    MissingExactSolution,
    PerturbationSpec,
    ProblemError,
    Vie1Problem,
    evaluate,
    first_kind_oracle,
    make_vie1,
    rhs_oracle,
)

ex1 = Example1()
ex2 = Example2()
ex3 = Example3()


def example1() -> IaeProblem:
    return ex1()


def example2() -> IaeProblem:
    return ex2()


def example3() -> IaeProblem:
    return ex3()
