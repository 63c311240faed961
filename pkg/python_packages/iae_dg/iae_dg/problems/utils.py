""" problem types shared by the built-in examples and library users
"""

import dataclasses
from dataclasses import dataclass
from typing import Optional, Text, Tuple

import numpy as np

from ..basis import composite_gauss
from ..constants import (
    DEFAULT_K0,
    ORACLE_MIN_POINTS,
    ORACLE_PANEL_WIDTH,
    ORACLE_POINTS,
)
from ..types import Function, Kernel, PerturbationProfile

# sampling used by the construction-time checks
KERNEL_SAMPLES = 50
RESIDUAL_SAMPLES = 20
RESIDUAL_POINTS = 32
RESIDUAL_TOL = 1e-8
ORIGIN_TOL = 1e-12
SAMPLE_SEED = 20211


class ProblemError(ValueError):
    """A problem definition violates the conditions the DG scheme needs"""


class MissingExactSolution(ProblemError):
    """An error measurement was requested for a problem without exact solution"""


def evaluate(fn, *args, dtype=float) -> np.ndarray:
    """call ``fn`` and broadcast its result to the shape of its arguments, so
    constant kernels may simply return a scalar"""
    arrays = [np.asarray(arg, dtype=dtype) for arg in args]
    shape = np.broadcast(*arrays).shape
    return np.broadcast_to(np.asarray(fn(*arrays), dtype=dtype), shape)


def default_shape(t: np.ndarray) -> np.ndarray:
    return np.sin(t + 1.0)


@dataclass(frozen=True)
class PerturbationSpec:
    """A perturbation of the first-kind data of size amplitude * h^m1

    With the ``smooth`` profile the realized perturbation is
    ``amplitude * h**m1 * shape(t)``. The ``resonant`` profile multiplies this
    by ``(-1)**n + P_1(s)`` on interval n, which keeps the size but excites
    the error modes the first-kind scheme propagates without damping.
    """

    m1: float
    shape: Function = default_shape
    amplitude: float = 1.0
    profile: PerturbationProfile = PerturbationProfile.SMOOTH

    def __post_init__(self):
        if not self.m1 > 0:
            raise ProblemError(f"perturbation exponent must be positive, not {self.m1}")
        if not isinstance(self.profile, PerturbationProfile):
            object.__setattr__(self, "profile", PerturbationProfile(self.profile))

    def local_values(
        self, h: float, n: int, t0: float, s: np.ndarray, dtype=float
    ) -> np.ndarray:
        """delta(t0 + s h) on interval n, where t0 is its left node"""
        s = np.asarray(s, dtype=dtype)
        values = (
            self.amplitude
            * h**self.m1
            * evaluate(self.shape, t0 + s * h, dtype=dtype)
        )
        if self.profile is PerturbationProfile.RESONANT:
            values = values * ((-1.0) ** n + (2.0 * s - 1.0))
        return values


def _sample_times(T: float, count: int) -> np.ndarray:
    rng = np.random.default_rng(SAMPLE_SEED)
    return np.sort(rng.uniform(0.0, T, count))


def _check_time(T: float, t: float) -> None:
    if not 0.0 <= t <= T:
        raise ProblemError(f"t = {t} is outside [0, {T}]")


@dataclass(frozen=True)
class IaeProblem:
    """x1 + int_0^t K11 x1 + K12 x2 ds = f1, int_0^t K21 x1 ds = f2 on [0, T]

    The conditions f2(0) = 0 and |K21(t, t) K12(t, t)| >= k0 are checked on
    construction, as is the consistency of the data with the exact solution
    when one is given.
    """

    key: Text
    K11: Kernel
    K12: Kernel
    K21: Kernel
    f1: Function
    f2: Function
    exact_x1: Optional[Function] = None
    exact_x2: Optional[Function] = None
    T: float = 1.0
    description: Text = ""
    #: x1^(m)(0) = 0 for every odd m
    x1_odd_derivatives_vanish: bool = False
    k0: float = DEFAULT_K0

    components = 2

    def __post_init__(self):
        self.validate()

    @property
    def has_exact(self) -> bool:
        return self.exact_x1 is not None and self.exact_x2 is not None

    def kernel(self, p: int, q: int) -> Kernel:
        kernels = {(1, 1): self.K11, (1, 2): self.K12, (2, 1): self.K21}
        try:
            return kernels[(p, q)]
        except KeyError:
            raise ProblemError(f"no kernel K{p}{q} in an index-2 system") from None

    def data(self, p: int) -> Function:
        return {1: self.f1, 2: self.f2}[p]

    def exact(self, p: int) -> Function:
        fn = {1: self.exact_x1, 2: self.exact_x2}.get(p)
        if fn is None:
            raise MissingExactSolution(f"{self.key} has no exact x{p}")
        return fn

    def validate(self) -> None:
        if not self.T > 0:
            raise ProblemError(f"{self.key}: T must be positive, not {self.T}")

        origin = float(evaluate(self.f2, 0.0))
        if abs(origin) > ORIGIN_TOL:
            raise ProblemError(f"{self.key}: f2(0) = {origin!r}, but must vanish")

        t = np.linspace(0.0, self.T, KERNEL_SAMPLES)
        product = np.abs(evaluate(self.K21, t, t) * evaluate(self.K12, t, t))
        if np.min(product) < self.k0:
            worst = t[np.argmin(product)]
            raise ProblemError(
                f"{self.key}: |K21(t,t) K12(t,t)| = {np.min(product):.3e} < "
                f"{self.k0:.3e} at t = {worst}"
            )

        if self.has_exact:
            for t_i in _sample_times(self.T, RESIDUAL_SAMPLES):
                f1, f2 = rhs_oracle(self, t_i, RESIDUAL_POINTS)
                gap = max(
                    abs(float(evaluate(self.f1, t_i)) - f1),
                    abs(float(evaluate(self.f2, t_i)) - f2),
                )
                if gap > RESIDUAL_TOL:
                    raise ProblemError(
                        f"{self.key}: exact solution misses the equations by "
                        f"{gap:.3e} at t = {t_i}"
                    )

    def first_kind(self) -> "Vie1Problem":
        """the first-kind equation int_0^t K21 x1 ds = f2 on its own"""
        return Vie1Problem(
            key=f"{self.key}-first-kind",
            k=self.K21,
            g=self.f2,
            exact_y=self.exact_x1,
            T=self.T,
            description=f"second equation of {self.key}",
            k0=self.k0,
        )


@dataclass(frozen=True)
class Vie1Problem:
    """int_0^t k(t, s) y(s) ds = g(t) (+ delta) on [0, T]"""

    key: Text
    k: Kernel
    g: Function
    exact_y: Optional[Function] = None
    perturbation: Optional[PerturbationSpec] = None
    T: float = 1.0
    description: Text = ""
    k0: float = DEFAULT_K0

    components = 1

    def __post_init__(self):
        self.validate()

    @property
    def has_exact(self) -> bool:
        return self.exact_y is not None

    def exact(self, p: int = 1) -> Function:
        if p != 1 or self.exact_y is None:
            raise MissingExactSolution(f"{self.key} has no exact y{p}")
        return self.exact_y

    def validate(self) -> None:
        if not self.T > 0:
            raise ProblemError(f"{self.key}: T must be positive, not {self.T}")

        origin = float(evaluate(self.g, 0.0))
        if abs(origin) > ORIGIN_TOL:
            raise ProblemError(f"{self.key}: g(0) = {origin!r}, but must vanish")

        t = np.linspace(0.0, self.T, KERNEL_SAMPLES)
        diagonal = np.abs(evaluate(self.k, t, t))
        if np.min(diagonal) < self.k0:
            raise ProblemError(
                f"{self.key}: |k(t,t)| = {np.min(diagonal):.3e} < {self.k0:.3e}"
            )

    def with_perturbation(self, perturbation: Optional[PerturbationSpec]):
        return dataclasses.replace(self, perturbation=perturbation)


def rhs_oracle(
    problem: IaeProblem, t: float, q: int = ORACLE_POINTS
) -> Tuple[float, float]:
    """f1(t), f2(t) recomputed from the exact solution by composite Gauss
    quadrature on panels of width at most 0.1"""
    if q < ORACLE_MIN_POINTS:
        raise ProblemError(f"oracle needs at least {ORACLE_MIN_POINTS} points, not {q}")
    x1, x2 = problem.exact(1), problem.exact(2)
    _check_time(problem.T, t)

    rule = composite_gauss(0.0, t, q, ORACLE_PANEL_WIDTH)
    s, weights = rule.nodes, rule.weights

    f1 = float(evaluate(x1, t))
    f2 = 0.0
    if len(s):
        f1 += float(
            weights
            @ (
                evaluate(problem.K11, t, s) * evaluate(x1, s)
                + evaluate(problem.K12, t, s) * evaluate(x2, s)
            )
        )
        f2 = float(weights @ (evaluate(problem.K21, t, s) * evaluate(x1, s)))
    return f1, f2


def first_kind_oracle(
    kernel: Kernel, exact: Function, t: float, q: int = ORACLE_POINTS
) -> float:
    """int_0^t kernel(t, s) exact(s) ds by the same composite rule"""
    rule = composite_gauss(0.0, t, q, ORACLE_PANEL_WIDTH)
    if not len(rule.nodes):
        return 0.0
    return float(
        rule.weights @ (evaluate(kernel, t, rule.nodes) * evaluate(exact, rule.nodes))
    )


def make_vie1(
    kernel: Kernel,
    g: Optional[Function] = None,
    exact: Optional[Function] = None,
    perturbation: Optional[PerturbationSpec] = None,
    T: float = 1.0,
    key: Text = "vie1",
    description: Text = "",
) -> Vie1Problem:
    """bundle a first-kind problem; without ``g``, the data is integrated from
    ``exact`` by the quadrature oracle"""
    if g is None:
        if exact is None:
            raise ProblemError(f"{key}: either g or the exact solution is required")

        def oracle_g(t):
            t = np.asarray(t, dtype=float)
            flat = [first_kind_oracle(kernel, exact, t_i) for t_i in t.ravel()]
            return np.reshape(flat, t.shape)

        g = oracle_g

    return Vie1Problem(
        key=key,
        k=kernel,
        g=g,
        exact_y=exact,
        perturbation=perturbation,
        T=T,
        description=description,
    )


class ExampleSpec:
    """Helper for the built-in examples on [0, 1], which share the kernels
    K11 = t - s, K12 = exp(t - s), K21 = exp(2t - s) and differ in the exact
    solution (and so in the data).

    Instances are the callables published as problem entry points.
    """

    key: Text = ""
    description: Text = ""
    x1_odd_derivatives_vanish = False
    T = 1.0

    @staticmethod
    def K11(t, s):
        return t - s

    @staticmethod
    def K12(t, s):
        return np.exp(t - s)

    @staticmethod
    def K21(t, s):
        return np.exp(2.0 * t - s)

    @staticmethod
    def memory(t):
        """int_0^t exp(t - s) cos(s) ds, shared by the data of several examples"""
        return 0.5 * (np.sin(t) - np.cos(t) + np.exp(t))

    def f1(self, t):  # pragma: no cover
        raise NotImplementedError()

    def f2(self, t):  # pragma: no cover
        raise NotImplementedError()

    def x1(self, t):  # pragma: no cover
        raise NotImplementedError()

    def x2(self, t):  # pragma: no cover
        raise NotImplementedError()

    def __call__(self) -> IaeProblem:
        return IaeProblem(
            key=self.key,
            K11=self.K11,
            K12=self.K12,
            K21=self.K21,
            f1=self.f1,
            f2=self.f2,
            exact_x1=self.x1,
            exact_x2=self.x2,
            T=self.T,
            description=self.description,
            x1_odd_derivatives_vanish=self.x1_odd_derivatives_vanish,
        )
