""" error measurement and convergence-order regression
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Text, Tuple

import numpy as np
from traitlets import Float, Instance, Int, default
from traitlets.config import LoggingConfigurable

from .basis import gauss_rule, superconv_points
from .constants import ERROR_FLOOR, GLOBAL_SAMPLES, MIN_GLOBAL_SAMPLES
from .mesh import Mesh
from .problems.utils import (
    IaeProblem,
    PerturbationSpec,
    Vie1Problem,
    default_shape,
    evaluate,
)
from .solver import DgSolution, DgSolver, StepSolveError
from .types import ErrorKind, Function, Parity, PerturbationProfile, ReportDict


class AnalysisError(ValueError):
    """A measurement or regression was requested with bad parameters"""


class ConvergenceError(ArithmeticError):
    """A solve inside a regression failed; names the offending mesh"""

    def __init__(self, problem: Text, m: int, N: int, cause: Exception):
        self.problem = problem
        self.m = m
        self.N = N
        self.step = getattr(cause, "step", None)
        self.cause = cause
        where = f"problem {problem}, m={m}, N={N}"
        if self.step is not None:
            where += f", step {self.step}"
        super().__init__(f"{where}: {cause}")


@dataclass(frozen=True)
class ErrorSample:
    component: int
    kind: ErrorKind
    value: float
    argmax_t: float


def _sample(
    solution: DgSolution,
    exact: Function,
    component: int,
    kind: ErrorKind,
    s: np.ndarray,
) -> ErrorSample:
    mesh = solution.mesh
    n = np.repeat(np.arange(mesh.N)[:, None], len(s), axis=1)
    local = np.broadcast_to(s[None, :], n.shape)
    t = mesh.nodes[:-1, None] + local * mesh.h
    # the right end of the last interval is T itself
    t = np.where((n == mesh.N - 1) & (local == 1.0), mesh.T, t)

    gaps = np.abs(evaluate(exact, t) - solution.eval_local(component, n, local))
    worst = int(np.argmax(gaps))
    return ErrorSample(
        component=component,
        kind=kind,
        value=float(gaps.flat[worst]),
        argmax_t=float(t.flat[worst]),
    )


def global_error(
    solution: DgSolution,
    problem,
    component: int,
    samples_per_interval: int = GLOBAL_SAMPLES,
) -> ErrorSample:
    """sup-norm error over Gauss points, the superconvergence points and the
    right end of every interval"""
    if samples_per_interval < MIN_GLOBAL_SAMPLES:
        raise AnalysisError(
            f"at least {MIN_GLOBAL_SAMPLES} samples per interval are needed"
        )
    s = np.unique(
        np.concatenate(
            [
                gauss_rule(samples_per_interval).nodes,
                superconv_points(solution.m).points,
                [1.0],
            ]
        )
    )
    return _sample(solution, problem.exact(component), component, ErrorKind.GLOBAL, s)


def superconv_error(solution: DgSolution, problem, component: int) -> ErrorSample:
    """largest error at t_n + s_r h over the superconvergence points s_r"""
    s = np.asarray(superconv_points(solution.m).points)
    return _sample(
        solution, problem.exact(component), component, ErrorKind.SUPERCONV, s
    )


def expected_order(
    kind: ErrorKind, component: int, m: int, x1_odd_derivatives_vanish: bool = False
) -> int:
    """orders the global and local convergence results predict for the
    index-2 system"""
    odd = Parity.of(m) is Parity.ODD
    gains = odd and x1_odd_derivatives_vanish

    if kind is ErrorKind.GLOBAL:
        if component == 1:
            return m if odd else m - 1
        return (m - 1 if gains else m - 2) if odd else m - 3

    if kind is ErrorKind.SUPERCONV:
        if component == 1:
            return (m + 1 if gains else m) if odd else m
        return (m - 1 if gains else m - 2) if odd else m - 2

    raise AnalysisError(f"no index-2 order for {kind.value} errors")


def perturbed_order(m: int, m1: float) -> float:
    """worst-case order of a first-kind DG solution with O(h^m1) data error"""
    if Parity.of(m) is Parity.ODD:
        return min(m, m1 - 2)
    return min(m - 1, m1 - 2)


def check_n_list(N_list: Sequence[int]) -> List[int]:
    N_list = [int(N) for N in N_list]
    if len(N_list) < 3:
        raise AnalysisError(f"at least 3 meshes are needed, not {N_list}")
    if N_list[0] < 2 or any(b != 2 * a for a, b in zip(N_list, N_list[1:])):
        raise AnalysisError(f"interval counts must double: {N_list}")
    return N_list


def _order(coarse: float, fine: float) -> float:
    if coarse > 0 and fine > 0:
        return math.log2(coarse / fine)
    return float("nan")


@dataclass
class ConvergenceReport:
    """errors over a doubling sequence of meshes and the orders between them"""

    problem: Text
    m: int
    kind: ErrorKind
    component: int
    rows: List[Tuple[int, float]]
    orders: List[float] = field(default_factory=list)
    floored: List[bool] = field(default_factory=list)
    expected: Optional[float] = None
    floor: float = ERROR_FLOOR

    def __post_init__(self):
        self.rows = sorted(self.rows)
        if not self.orders:
            pairs = list(zip(self.rows, self.rows[1:]))
            self.orders = [_order(a[1], b[1]) for a, b in pairs]
            self.floored = [
                a[1] < self.floor or b[1] < self.floor for a, b in pairs
            ]

    @property
    def final_order(self) -> float:
        return self.orders[-1]

    @property
    def final_floored(self) -> bool:
        return self.floored[-1]

    @property
    def errors(self) -> List[float]:
        return [error for _, error in self.rows]

    def to_dict(self) -> ReportDict:
        return {
            "problem": self.problem,
            "m": self.m,
            "kind": self.kind.value,
            "component": self.component,
            "rows": [
                {
                    "N": N,
                    "error": error,
                    "order": None if i == 0 else _finite(self.orders[i - 1]),
                    "floored": False if i == 0 else self.floored[i - 1],
                }
                for i, (N, error) in enumerate(self.rows)
            ],
            "final_order": _finite(self.final_order),
            "expected": self.expected,
        }


def _finite(value: float) -> Optional[float]:
    return value if math.isfinite(value) else None


class ConvergenceStudy(LoggingConfigurable):
    """Solve over refinement sequences and regress the orders"""

    max_workers = Int(
        1, help="meshes of one regression solved concurrently"
    ).tag(config=True)

    samples_per_interval = Int(
        GLOBAL_SAMPLES, help="Gauss points per interval for global errors"
    ).tag(config=True)

    floor = Float(
        ERROR_FLOOR, help="errors below this do not take part in order checks"
    ).tag(config=True)

    solver = Instance(DgSolver)

    @default("solver")
    def _default_solver(self):
        return DgSolver(parent=self)

    def __init__(self, **kwargs):
        self._solutions: Dict[Tuple[Text, int, int, Optional[int]], DgSolution] = {}
        super().__init__(**kwargs)

    def solve(self, problem, m: int, N: int) -> DgSolution:
        """solve once per (problem, m, N); first-kind problems are not cached
        since their perturbation depends on the mesh"""
        mesh = Mesh(T=problem.T, N=N)
        try:
            if isinstance(problem, IaeProblem):
                slot = (problem.key, m, N, self.solver.quad_points)
                if slot not in self._solutions:
                    self._solutions[slot] = self.solver.solve_iae(problem, mesh, m)
                return self._solutions[slot]
            return self.solver.solve_vie1(problem, mesh, m)
        except StepSolveError as err:
            raise ConvergenceError(problem.key, m, N, err) from err

    def solve_all(self, problem, m: int, N_list: Sequence[int]) -> List[DgSolution]:
        N_list = check_n_list(N_list)
        if self.max_workers > 1:
            with ThreadPoolExecutor(max_workers=self.max_workers) as executor:
                return list(executor.map(lambda N: self.solve(problem, m, N), N_list))
        return [self.solve(problem, m, N) for N in N_list]

    def measure(self, solution: DgSolution, problem, kind: ErrorKind, component: int):
        if kind is ErrorKind.SUPERCONV:
            return superconv_error(solution, problem, component)
        return global_error(solution, problem, component, self.samples_per_interval)

    def _report(self, problem, m, kind, component, solutions, measure_kind, expected):
        rows = [
            (
                solution.mesh.N,
                self.measure(solution, problem, measure_kind, component).value,
            )
            for solution in solutions
        ]
        report = ConvergenceReport(
            problem=problem.key,
            m=m,
            kind=kind,
            component=component,
            rows=rows,
            expected=expected,
            floor=self.floor,
        )
        if report.final_floored:
            self.log.warning(
                "[iae-dg] %s m=%s %s x%s: finest errors are below %.0e",
                problem.key,
                m,
                kind.value,
                component,
                self.floor,
            )
        self.log.info(
            "[iae-dg] %s m=%s %s x%s: final order %.3f (expected %s)",
            problem.key,
            m,
            kind.value,
            component,
            report.final_order,
            expected,
        )
        return report

    def order_regressions(
        self,
        problem: IaeProblem,
        m: int,
        N_list: Sequence[int],
        kind: ErrorKind,
        components: Sequence[int] = (1, 2),
    ) -> List[ConvergenceReport]:
        """one report per component, sharing the solves"""
        kind = ErrorKind(kind)
        solutions = self.solve_all(problem, m, N_list)
        return [
            self._report(
                problem,
                m,
                kind,
                component,
                solutions,
                kind,
                expected_order(
                    kind, component, m, problem.x1_odd_derivatives_vanish
                ),
            )
            for component in components
        ]

    def order_regression(
        self,
        problem: IaeProblem,
        m: int,
        N_list: Sequence[int],
        kind: ErrorKind,
        component: int,
    ) -> ConvergenceReport:
        return self.order_regressions(problem, m, N_list, kind, [component])[0]

    def perturbation_study(
        self,
        base: Vie1Problem,
        m: int,
        m1: float,
        N_list: Sequence[int],
        shape: Optional[Function] = None,
        amplitude: float = 1.0,
        profile: PerturbationProfile = PerturbationProfile.RESONANT,
    ) -> ConvergenceReport:
        """global order of the first-kind DG solution with data perturbed by
        amplitude * h^m1"""
        if not base.has_exact:
            raise AnalysisError(f"{base.key} needs an exact solution")
        perturbed = base.with_perturbation(
            PerturbationSpec(
                m1=m1,
                shape=shape or default_shape,
                amplitude=amplitude,
                profile=PerturbationProfile(profile),
            )
        )
        solutions = self.solve_all(perturbed, m, N_list)
        return self._report(
            perturbed,
            m,
            ErrorKind.PERTURBED,
            1,
            solutions,
            ErrorKind.GLOBAL,
            perturbed_order(m, m1),
        )


def order_regression(
    problem: IaeProblem,
    m: int,
    N_list: Sequence[int],
    kind: ErrorKind,
    component: int,
) -> ConvergenceReport:
    return ConvergenceStudy().order_regression(problem, m, N_list, kind, component)


def perturbation_study(
    base: Vie1Problem, m: int, m1: float, N_list: Sequence[int], **kwargs
) -> ConvergenceReport:
    return ConvergenceStudy().perturbation_study(base, m, m1, N_list, **kwargs)

