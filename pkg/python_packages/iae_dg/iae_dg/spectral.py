""" structural matrices M, N and the vectors v, w, v~, q of the DG step system
"""

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Text, Tuple

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from .constants import IDENTITY_TOL, MAX_BASIS_ORDER
from .types import Parity


class SpectralError(ValueError):
    """An unsupported basis order was requested"""


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=float)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class SpectralMatrices:
    """M and N are the constant-kernel limits of the triangle and square
    moment matrices; v = M^-1 e0, w = M^-1 e_{m-1}, v~ M = e0^T"""

    m: int
    parity: Parity
    alphas: np.ndarray
    M: np.ndarray
    N: np.ndarray
    v: np.ndarray
    w: np.ndarray
    v_tilde: np.ndarray
    q: np.ndarray
    _lu: Tuple[np.ndarray, np.ndarray] = field(repr=False, compare=False)

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        """apply M^-1 through the stored LU factors"""
        return lu_solve(self._lu, rhs)

    def lu_determinant(self) -> float:
        lu, piv = self._lu
        swaps = np.count_nonzero(piv != np.arange(len(piv)))
        return float((-1) ** swaps * np.prod(np.diag(lu)))

    def continuant(self) -> float:
        """det(M) from the three-term continuant recurrence"""
        previous, current = 1.0, self.M[0, 0]
        for j in range(1, self.m):
            coupling = self.M[j - 1, j] * self.M[j, j - 1]
            previous, current = current, self.M[j, j] * current - coupling * previous
        return float(current)


def alpha(j: int) -> float:
    return 1.0 / (8.0 * j * j - 2.0)


@lru_cache(maxsize=None)
def build(m: int) -> SpectralMatrices:
    if not 1 <= m <= MAX_BASIS_ORDER:
        raise SpectralError(f"basis order must be in 1..{MAX_BASIS_ORDER}, not {m}")

    parity = Parity.of(m)
    alphas = np.array([alpha(j) for j in range(1, m)])

    M = np.zeros((m, m))
    M[0, 0] = 0.5
    for j in range(1, m):
        M[j - 1, j] = -alphas[j - 1]
        M[j, j - 1] = alphas[j - 1]

    N = np.zeros((m, m))
    N[0, 0] = 1.0

    odd_numbers = 2.0 * np.arange(m) + 1.0
    w = 2.0 * (2 * m - 1) * odd_numbers

    even_index = np.arange(m) % 2 == 0
    if parity is Parity.ODD:
        v = np.where(even_index, 2.0 * odd_numbers, 0.0)
        v_tilde = v.copy()
    else:
        v = np.where(even_index, 0.0, -2.0 * odd_numbers)
        v_tilde = -v

    q = w / w[0] - v / 2.0

    return SpectralMatrices(
        m=m,
        parity=parity,
        alphas=_frozen(alphas),
        M=_frozen(M),
        N=_frozen(N),
        v=_frozen(v),
        w=_frozen(w),
        v_tilde=_frozen(v_tilde),
        q=_frozen(q),
        _lu=lu_factor(M),
    )


@dataclass
class IdentityReport:
    """named residual norms of the structural identities of one basis order"""

    m: int
    parity: Parity
    tol: float
    residuals: Dict[Text, float]

    @property
    def failures(self) -> List[Text]:
        return [name for name, value in self.residuals.items() if not value <= self.tol]

    @property
    def ok(self) -> bool:
        return not self.failures


def _norm(array: np.ndarray) -> float:
    return float(np.max(np.abs(array))) if np.size(array) else 0.0


def verify_identities(S: SpectralMatrices, tol: float = IDENTITY_TOL) -> IdentityReport:
    """evaluate every identity for the parity of ``S.m``; the caller decides
    what to do with residuals above ``tol``"""
    m = S.m
    eye = np.eye(m)
    e0, e_last = eye[0], eye[m - 1]

    # small enough to form explicitly
    M_inv_N = S.solve(S.N)

    residuals: Dict[Text, float] = {
        "M v - e0": _norm(S.M @ S.v - e0),
        "M w - e_(m-1)": _norm(S.M @ S.w - e_last),
        "v~ M - e0^T": _norm(S.v_tilde @ S.M - e0),
        "M^-1 N - v e0^T": _norm(M_inv_N - np.outer(S.v, e0)),
    }

    if m >= 2:
        residuals["M (6 e0 - 3 v) - e1"] = _norm(S.M @ (6.0 * e0 - 3.0 * S.v) - eye[1])

    if S.parity is Parity.ODD:
        residuals["-2 M^-1 N + (M^-1 N)^2"] = _norm(-2.0 * M_inv_N + M_inv_N @ M_inv_N)
        residuals["(I - M^-1 N)^2 - I"] = _norm(
            (eye - M_inv_N) @ (eye - M_inv_N) - eye
        )
        residuals["M^-1 N q"] = _norm(M_inv_N @ S.q)
    else:
        residuals["N M^-1 N"] = _norm(S.N @ M_inv_N)
        residuals["M^-1 N q - q0 v"] = _norm(M_inv_N @ S.q - S.q[0] * S.v)

    continuant = S.continuant()
    residuals["det(M) vs LU pivots"] = abs(continuant - S.lu_determinant()) / abs(
        continuant
    )

    return IdentityReport(m=m, parity=S.parity, tol=tol, residuals=residuals)
