# flake8: noqa: F401
from ._version import __version__
from .analysis import (
    ConvergenceError,
    ConvergenceReport,
    ConvergenceStudy,
    expected_order,
    global_error,
    order_regression,
    perturbation_study,
    perturbed_order,
    superconv_error,
)
from .basis import gauss_rule, legendre_eval, superconv_points
from .mesh import Mesh
from .problems import IaeProblem, PerturbationSpec, Vie1Problem, make_vie1
from .registry import ProblemRegistry
from .solver import DgSolution, DgSolver, StepSolveError, solve_iae, solve_vie1
from .spectral import build as build_spectral
from .spectral import verify_identities
from .types import ErrorKind, Mode, Parity, PerturbationProfile
