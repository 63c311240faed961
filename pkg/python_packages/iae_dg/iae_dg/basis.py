""" shifted Legendre polynomials on [0, 1], Gauss rules and superconvergence points
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple, Union

import numpy as np
from numpy.polynomial import legendre as npleg
from scipy.linalg import eigh_tridiagonal

from .constants import MAX_BASIS_ORDER, MAX_GAUSS_POINTS
from .types import Parity

ArrayLike = Union[float, np.ndarray]

NEWTON_TOL = 1e-14
NEWTON_MAX_ITER = 100


class BasisError(ArithmeticError):
    """A basis construction (quadrature or superconvergence points) failed,
    which indicates a bug rather than bad input"""


def _frozen(values) -> np.ndarray:
    array = np.array(values, dtype=float)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class QuadRule:
    """A quadrature rule on [0, 1]"""

    nodes: np.ndarray
    weights: np.ndarray

    @property
    def size(self) -> int:
        return len(self.nodes)

    def integrate(self, values: np.ndarray) -> np.ndarray:
        """integrate samples taken at ``nodes`` along the last axis"""
        return np.asarray(values) @ self.weights


@dataclass(frozen=True)
class SuperconvPoints:
    """Points of the reference interval where the DG error gains an order:
    the zeros of P'_{m+1} for odd m and of P'_m for even m"""

    m: int
    parity: Parity
    degree: int
    points: np.ndarray


def _standard(j: int, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """standard Legendre L_j and L_j' at x in [-1, 1]"""
    value_prev, value = np.ones_like(x), x.copy()
    deriv_prev, deriv = np.zeros_like(x), np.ones_like(x)

    if j == 0:
        return value_prev, deriv_prev

    for k in range(1, j):
        value_prev, value = value, ((2 * k + 1) * x * value - k * value_prev) / (k + 1)
        # L'_{k+1} = L'_{k-1} + (2k + 1) L_k, with value_prev now holding L_k
        deriv_prev, deriv = deriv, deriv_prev + (2 * k + 1) * value_prev

    return value, deriv


def legendre_eval(j: int, s: ArrayLike) -> ArrayLike:
    """P_j(s) = L_j(2s - 1), normalized so that P_j(1) = 1"""
    if j < 0:
        raise BasisError(f"negative degree {j}")
    x = 2.0 * np.asarray(s, dtype=float) - 1.0
    value, _ = _standard(j, np.atleast_1d(x))
    return value.reshape(x.shape)[()] if x.ndim == 0 else value


def legendre_deriv(j: int, s: ArrayLike) -> ArrayLike:
    """P_j'(s), from the derivative recurrence of the standard polynomials"""
    if j < 0:
        raise BasisError(f"negative degree {j}")
    x = 2.0 * np.asarray(s, dtype=float) - 1.0
    _, deriv = _standard(j, np.atleast_1d(x))
    deriv = 2.0 * deriv
    return deriv.reshape(x.shape)[()] if x.ndim == 0 else deriv


def legendre_deriv2(j: int, s: ArrayLike) -> ArrayLike:
    """P_j''(s) in the open interval (0, 1), from the Legendre equation"""
    x = 2.0 * np.asarray(s, dtype=float) - 1.0
    value, deriv = _standard(j, np.atleast_1d(x))
    xs = np.atleast_1d(x)
    second = 4.0 * (2.0 * xs * deriv - j * (j + 1) * value) / (1.0 - xs**2)
    return second.reshape(x.shape)[()] if x.ndim == 0 else second


def legendre_table(m: int, s: ArrayLike, dtype=float) -> np.ndarray:
    """P_0 .. P_{m-1} at every s: shape ``(m,) + shape(s)``"""
    x = 2.0 * np.asarray(s, dtype=dtype) - 1.0
    table = np.empty((m,) + x.shape, dtype=dtype)
    if m == 0:
        return table
    table[0] = 1.0
    if m > 1:
        table[1] = x
    for k in range(1, m - 1):
        table[k + 1] = ((2 * k + 1) * x * table[k] - k * table[k - 1]) / (k + 1)
    return table


@lru_cache(maxsize=None)
def gauss_rule(q: int) -> QuadRule:
    """q-point Gauss-Legendre rule mapped to [0, 1]

    Nodes come from the symmetric tridiagonal (Golub-Welsch) eigenproblem and
    are polished by Newton steps on L_q.
    """
    if not 1 <= q <= MAX_GAUSS_POINTS:
        raise BasisError(f"Gauss rule size must be in 1..{MAX_GAUSS_POINTS}, not {q}")

    if q == 1:
        return QuadRule(nodes=_frozen([0.5]), weights=_frozen([1.0]))

    k = np.arange(1, q)
    x = eigh_tridiagonal(np.zeros(q), k / np.sqrt(4.0 * k**2 - 1.0), eigvals_only=True)

    for _ in range(3):
        value, deriv = _standard(q, x)
        x = x - value / deriv

    _, deriv = _standard(q, x)
    weights = 2.0 / ((1.0 - x**2) * deriv**2)

    nodes = 0.5 * (np.sort(x) + 1.0)
    weights = 0.5 * weights[np.argsort(x)]

    # exact symmetry about 1/2
    nodes = 0.5 * (nodes + (1.0 - nodes[::-1]))
    weights = 0.5 * (weights + weights[::-1])
    weights = weights / weights.sum()

    return QuadRule(nodes=_frozen(nodes), weights=_frozen(weights))


def composite_gauss(a: float, b: float, q: int, width: float) -> QuadRule:
    """q-point Gauss on ceil((b - a) / width) equal panels of [a, b]

    The returned nodes and weights live on [a, b], not on [0, 1].
    """
    if b <= a:
        return QuadRule(nodes=_frozen([]), weights=_frozen([]))
    rule = gauss_rule(q)
    panels = max(1, math.ceil((b - a) / width - 1e-12))
    edges = np.linspace(a, b, panels + 1)
    lengths = np.diff(edges)
    nodes = edges[:-1, None] + lengths[:, None] * rule.nodes[None, :]
    weights = lengths[:, None] * rule.weights[None, :]
    return QuadRule(nodes=_frozen(nodes.ravel()), weights=_frozen(weights.ravel()))


def superconv_degree(m: int) -> int:
    """degree of the Legendre polynomial whose derivative vanishes at the points"""
    return m + 1 if Parity.of(m) is Parity.ODD else m


@lru_cache(maxsize=None)
def superconv_points(m: int) -> SuperconvPoints:
    """zeros of P'_{m+1} (odd m) or P'_m (even m) inside (0, 1)"""
    if not 1 <= m <= MAX_BASIS_ORDER:
        raise BasisError(f"basis order must be in 1..{MAX_BASIS_ORDER}, not {m}")

    degree = superconv_degree(m)
    coefficients = np.zeros(degree + 1)
    coefficients[-1] = 1.0
    guesses = np.sort(np.real(npleg.legroots(npleg.legder(coefficients))))
    points = 0.5 * (guesses + 1.0)

    for index, point in enumerate(points):
        for _ in range(NEWTON_MAX_ITER):
            step = legendre_deriv(degree, point) / legendre_deriv2(degree, point)
            point -= step
            if abs(step) <= NEWTON_TOL:
                break
        else:
            raise BasisError(
                f"zero {index} of P'_{degree} did not converge in "
                f"{NEWTON_MAX_ITER} iterations"
            )
        points[index] = point

    # the zeros of P'_d interlace the d Gauss nodes
    gauss = gauss_rule(degree).nodes
    if not np.all((gauss[:-1] < points) & (points < gauss[1:])):
        raise BasisError(f"zeros of P'_{degree} escaped their Gauss brackets")

    points = 0.5 * (points + (1.0 - points[::-1]))

    return SuperconvPoints(
        m=m, parity=Parity.of(m), degree=degree, points=_frozen(points)
    )
