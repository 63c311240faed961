""" time-marching DG solvers for index-2 systems and Volterra equations
"""

import warnings
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Dict, List, Optional, Text, Tuple

import numpy as np
from scipy.linalg import LinAlgWarning, get_lapack_funcs, lu_factor, lu_solve
from traitlets import Bool, Float, Int
from traitlets.config import LoggingConfigurable

from .assembly import MomentAssembler, MomentBlock, default_rule
from .basis import QuadRule, legendre_table
from .constants import (
    CONDITION_LIMIT,
    MAX_BASIS_ORDER,
    REFINEMENT_STEPS,
    RESIDUAL_TOL,
)
from .mesh import Mesh
from .problems.utils import IaeProblem, Vie1Problem
from .types import Function, Kernel

IAE_KERNELS = ((1, 1), (1, 2), (2, 1))


class SolutionError(ValueError):
    """A DG solution was queried for a component it does not have"""


class StepSolveError(ArithmeticError):
    """The step matrix of one interval is singular or too ill-conditioned,
    which means h is too large for the problem"""

    def __init__(self, step: int, condition: float, key: Text = ""):
        self.step = step
        self.condition = condition
        self.key = key
        super().__init__(
            f"{key or 'problem'}: step {step} matrix has condition {condition:.3e}"
        )


@dataclass(frozen=True, eq=False)
class DgSolution:
    """Legendre coefficients U[p - 1, n, j] of each component on every interval,
    so that x_p(t_n + s h) = sum_j P_j(s) U[p - 1, n, j] for s in (0, 1]"""

    mesh: Mesh
    m: int
    coeffs: np.ndarray
    conditions: np.ndarray
    key: Text = ""

    @property
    def components(self) -> int:
        return self.coeffs.shape[0]

    def _component(self, p: int) -> np.ndarray:
        if not 1 <= p <= self.components:
            raise SolutionError(
                f"no component {p} in a {self.components}-component solution"
            )
        return self.coeffs[p - 1]

    def eval_local(self, p: int, n, s) -> np.ndarray:
        """evaluate on given intervals without locating them"""
        coefficients = self._component(p)[np.asarray(n)]
        basis = np.moveaxis(legendre_table(self.m, s), 0, -1)
        return np.sum(coefficients * basis, axis=-1)

    def eval(self, p: int, t):
        n, s = self.mesh.locate(t)
        value = self.eval_local(p, n, s)
        return value[()] if np.ndim(value) == 0 else value


@dataclass
class StepSystem:
    """One step of the marching scheme before scaling; the scaled system is
    diag(row_scaling) lhs diag(column_scaling) z = diag(row_scaling) rhs with
    the coefficients recovered as column_scaling * z

    The LU factors are computed once in double precision and shared by the
    condition estimate and the solve. Each solve is followed by
    ``refinements`` residual corrections in the precision of ``lhs``.
    """

    lhs: np.ndarray
    rhs: np.ndarray
    row_scaling: np.ndarray
    column_scaling: np.ndarray
    refinements: int = REFINEMENT_STEPS

    def scaled(self) -> Tuple[np.ndarray, np.ndarray]:
        lhs = self.row_scaling[:, None] * self.lhs * self.column_scaling[None, :]
        return lhs, self.row_scaling * self.rhs

    @cached_property
    def _scaled(self) -> Tuple[np.ndarray, np.ndarray]:
        return self.scaled()

    @cached_property
    def _lu(self):
        lhs, _ = self._scaled
        with warnings.catch_warnings():
            # exactly singular matrices are reported by ``condition``
            warnings.simplefilter("ignore", LinAlgWarning)
            return lu_factor(lhs.astype(float))

    def condition(self) -> float:
        """1-norm condition number of the scaled matrix, from the LAPACK
        estimator on the LU factors"""
        lhs, _ = self._scaled
        if not np.all(np.isfinite(lhs)):
            return float("inf")
        lu, _ = self._lu
        (gecon,) = get_lapack_funcs(("gecon",), (lu,))
        rcond, info = gecon(lu, np.linalg.norm(lhs.astype(float), 1), norm="1")
        if info != 0 or not rcond > 0:
            return float("inf")
        return float(1.0 / rcond)

    def solve(self) -> np.ndarray:
        lhs, rhs = self._scaled
        z = lu_solve(self._lu, rhs.astype(float)).astype(lhs.dtype)
        for _ in range(self.refinements):
            z = z + lu_solve(self._lu, (rhs - lhs @ z).astype(float))
        return self.column_scaling * z


def _history(block: MomentBlock, key, coeffs: np.ndarray) -> np.ndarray:
    """sum over l < n of B^(n,l) U_l for one kernel"""
    if not block.n:
        return np.zeros(block.m, dtype=block.dtype)
    return np.einsum("lij,lj->i", block.history(key), coeffs)


def iae_step(block: MomentBlock, previous: np.ndarray, h: float) -> StepSystem:
    """the 2m x 2m block system of step n; ``previous`` holds U[:, :n]"""
    m = block.m
    B11, B12, B21 = (block.Bn[key] for key in IAE_KERNELS)

    lhs = np.zeros((2 * m, 2 * m), dtype=block.dtype)
    lhs[:m, :m] = block.A + h * B11
    lhs[:m, m:] = h * B12
    lhs[m:, :m] = h * B21

    U1, U2 = previous
    rhs = np.concatenate(
        [
            block.Fn[1]
            - h * (_history(block, (1, 1), U1) + _history(block, (1, 2), U2)),
            block.Fn[2] - h * _history(block, (2, 1), U1),
        ]
    )

    # second block row divided by h; x2 solved for as h U2
    scaling = np.concatenate(
        [np.ones(m, dtype=block.dtype), np.full(m, 1 / h, dtype=block.dtype)]
    )
    return StepSystem(lhs=lhs, rhs=rhs, row_scaling=scaling, column_scaling=scaling)


def vie1_step(
    block: MomentBlock, previous: np.ndarray, h: float, delta: Optional[np.ndarray]
) -> StepSystem:
    m = block.m
    rhs = block.Fn[1] - h * _history(block, (1, 1), previous[0])
    if delta is not None:
        rhs = rhs + delta
    return StepSystem(
        lhs=h * block.Bn[(1, 1)],
        rhs=rhs,
        row_scaling=np.full(m, 1 / h, dtype=block.dtype),
        column_scaling=np.ones(m, dtype=block.dtype),
    )


def vie2_step(block: MomentBlock, previous: np.ndarray, h: float) -> StepSystem:
    m = block.m
    return StepSystem(
        lhs=block.A + h * block.Bn[(1, 1)],
        rhs=block.Fn[1] - h * _history(block, (1, 1), previous[0]),
        row_scaling=np.ones(m, dtype=block.dtype),
        column_scaling=np.ones(m, dtype=block.dtype),
    )


def step_determinant(block: MomentBlock, h: float) -> Tuple[float, float]:
    """determinant of the unscaled IAE step matrix, directly and from the
    block structure (-1)^m h^2m det(B21) det(B12)"""
    m = block.m
    system = iae_step(block, np.zeros((2, block.n, m), dtype=block.dtype), h)
    structured = (
        (-1) ** m
        * float(h) ** (2 * m)
        * np.linalg.det(block.Bn[(2, 1)].astype(float))
        * np.linalg.det(block.Bn[(1, 2)].astype(float))
    )
    return float(np.linalg.det(system.lhs.astype(float))), float(structured)


def _relative(terms: List[np.ndarray], load: np.ndarray) -> float:
    residual = np.max(np.abs(sum(terms) - load))
    scale = max([np.max(np.abs(term)) for term in terms] + [np.max(np.abs(load))])
    return float(residual / scale) if scale > 0 else float(residual)


class DgSolver(LoggingConfigurable):
    """March the DG equations interval by interval"""

    condition_limit = Float(
        CONDITION_LIMIT,
        help="largest 1-norm condition number of a scaled step matrix",
    ).tag(config=True)

    quad_points = Int(
        None,
        allow_none=True,
        help="Gauss points per direction for the moment integrals "
        "(default: basis order + 6)",
    ).tag(config=True)

    check_residual = Bool(
        False, help="re-evaluate the discrete Galerkin equations after marching"
    ).tag(config=True)

    residual_tol = Float(
        RESIDUAL_TOL, help="largest relative Galerkin residual accepted"
    ).tag(config=True)

    cache_moments = Bool(
        True, help="keep moment integrals of a solve for the residual check"
    ).tag(config=True)

    extended_precision = Bool(
        True,
        help="assemble moments, loads and step right-hand sides in long double; "
        "first-kind equations amplify their rounding error by powers of 1/h",
    ).tag(config=True)

    @property
    def dtype(self):
        return np.longdouble if self.extended_precision else float

    def rule_for(self, m: int, rule: Optional[QuadRule] = None) -> QuadRule:
        return rule or default_rule(m, self.quad_points)

    def _assembler(self, kernels, mesh: Mesh, m: int, rule: Optional[QuadRule]):
        if not 1 <= m <= MAX_BASIS_ORDER:
            raise SolutionError(f"basis order must be in 1..{MAX_BASIS_ORDER}, not {m}")
        return MomentAssembler(
            kernels,
            mesh,
            m,
            self.rule_for(m, rule),
            cache=self.cache_moments,
            dtype=self.dtype,
        )

    def _march(
        self,
        key: Text,
        assembler: MomentAssembler,
        loads: Dict[int, Function],
        components: int,
        build_step: Callable[[MomentBlock, np.ndarray], StepSystem],
    ) -> DgSolution:
        mesh, m = assembler.mesh, assembler.m
        coeffs = np.zeros((components, mesh.N, m), dtype=assembler.dtype)
        conditions = np.zeros(mesh.N)

        for n in range(mesh.N):
            block = assembler.block(n, loads)
            system = build_step(block, coeffs[:, :n])
            conditions[n] = system.condition()
            if not conditions[n] <= self.condition_limit:
                self.log.error(
                    "[iae-dg] %s: step %s of N=%s, m=%s is ill-conditioned (%.3e)",
                    key,
                    n,
                    mesh.N,
                    m,
                    conditions[n],
                )
                raise StepSolveError(step=n, condition=conditions[n], key=key)
            coeffs[:, n] = system.solve().reshape(components, m)

        self.log.debug(
            "[iae-dg] %s: solved N=%s, m=%s (largest step condition %.3e)",
            key,
            mesh.N,
            m,
            conditions.max(),
        )
        coeffs.setflags(write=False)
        return DgSolution(
            mesh=mesh, m=m, coeffs=coeffs, conditions=conditions, key=key
        )

    def _check(self, problem, solution: DgSolution, assembler: MomentAssembler):
        if not self.check_residual:
            return
        residual = self.galerkin_residual(problem, solution, assembler=assembler)
        if residual > self.residual_tol:
            raise SolutionError(
                f"{problem.key}: Galerkin residual {residual:.3e} exceeds "
                f"{self.residual_tol:.1e}"
            )

    def solve_iae(
        self, problem: IaeProblem, mesh: Mesh, m: int, rule: Optional[QuadRule] = None
    ) -> DgSolution:
        kernels = {key: problem.kernel(*key) for key in IAE_KERNELS}
        assembler = self._assembler(kernels, mesh, m, rule)
        loads = {1: problem.f1, 2: problem.f2}
        h = mesh.step(assembler.dtype)
        solution = self._march(
            problem.key,
            assembler,
            loads,
            2,
            lambda block, previous: iae_step(block, previous, h),
        )
        self._check(problem, solution, assembler)
        return solution

    def _delta(self, problem: Vie1Problem, assembler: MomentAssembler, n: int):
        if problem.perturbation is None:
            return None
        return assembler.perturbation(problem.perturbation, n)

    def solve_vie1(
        self, problem: Vie1Problem, mesh: Mesh, m: int, rule: Optional[QuadRule] = None
    ) -> DgSolution:
        assembler = self._assembler({(1, 1): problem.k}, mesh, m, rule)
        h = mesh.step(assembler.dtype)
        solution = self._march(
            problem.key,
            assembler,
            {1: problem.g},
            1,
            lambda block, previous: vie1_step(
                block, previous, h, self._delta(problem, assembler, block.n)
            ),
        )
        self._check(problem, solution, assembler)
        return solution

    def solve_vie2(
        self,
        kernel: Kernel,
        f: Function,
        mesh: Mesh,
        m: int,
        rule: Optional[QuadRule] = None,
        key: Text = "vie2",
    ) -> DgSolution:
        assembler = self._assembler({(1, 1): kernel}, mesh, m, rule)
        h = mesh.step(assembler.dtype)
        return self._march(
            key,
            assembler,
            {1: f},
            1,
            lambda block, previous: vie2_step(block, previous, h),
        )

    def galerkin_residual(
        self,
        problem,
        solution: DgSolution,
        rule: Optional[QuadRule] = None,
        assembler: Optional[MomentAssembler] = None,
    ) -> float:
        """largest relative residual of the discrete equations over all steps,
        with the moments assembled again from the problem"""
        mesh, m, U = solution.mesh, solution.m, solution.coeffs

        if isinstance(problem, IaeProblem):
            kernels = {key: problem.kernel(*key) for key in IAE_KERNELS}
            loads = {1: problem.f1, 2: problem.f2}
        else:
            kernels = {(1, 1): problem.k}
            loads = {1: problem.g}

        if assembler is None:
            assembler = self._assembler(kernels, mesh, m, rule)
        h = mesh.step(assembler.dtype)

        worst = 0.0
        for n in range(mesh.N):
            block = assembler.block(n, loads)
            if isinstance(problem, IaeProblem):
                first = [
                    block.A @ U[0, n],
                    h * block.Bn[(1, 1)] @ U[0, n],
                    h * block.Bn[(1, 2)] @ U[1, n],
                    h * _history(block, (1, 1), U[0, :n]),
                    h * _history(block, (1, 2), U[1, :n]),
                ]
                second = [
                    h * block.Bn[(2, 1)] @ U[0, n],
                    h * _history(block, (2, 1), U[0, :n]),
                ]
                worst = max(
                    worst,
                    _relative(first, block.Fn[1]),
                    _relative(second, block.Fn[2]),
                )
            else:
                load = block.Fn[1]
                delta = self._delta(problem, assembler, n)
                if delta is not None:
                    load = load + delta
                terms = [
                    h * block.Bn[(1, 1)] @ U[0, n],
                    h * _history(block, (1, 1), U[0, :n]),
                ]
                worst = max(worst, _relative(terms, load))
        return worst


def solve_iae(
    problem: IaeProblem, mesh: Mesh, m: int, rule: Optional[QuadRule] = None
) -> DgSolution:
    return DgSolver().solve_iae(problem, mesh, m, rule)


def solve_vie1(
    problem: Vie1Problem, mesh: Mesh, m: int, rule: Optional[QuadRule] = None
) -> DgSolution:
    return DgSolver().solve_vie1(problem, mesh, m, rule)


def solve_vie2(
    kernel: Kernel, f: Function, mesh: Mesh, m: int, rule: Optional[QuadRule] = None
) -> DgSolution:
    return DgSolver().solve_vie2(kernel, f, mesh, m, rule)
