""" Galerkin moment integrals of the DG step systems, by Gauss quadrature
"""

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Optional, Tuple

import numpy as np

from .basis import QuadRule, gauss_rule, legendre_table
from .constants import QUAD_EXTRA
from .mesh import Mesh
from .problems.utils import PerturbationSpec, evaluate
from .types import Function, Kernel

GRAM_TOL = 1e-13

KernelKey = Tuple[int, int]


class AssemblyError(ValueError):
    """A moment was requested for an interval pair outside the mesh, or the
    quadrature does not reproduce the Gram matrix"""


def default_rule(m: int, quad_points: Optional[int] = None) -> QuadRule:
    """q = m + 6 nodes per direction unless overridden"""
    return gauss_rule(quad_points or m + QUAD_EXTRA)


def _weighted_basis(m: int, rule: QuadRule, dtype=float) -> np.ndarray:
    return legendre_table(m, rule.nodes, dtype) * rule.weights.astype(dtype)


@lru_cache(maxsize=None)
def gram(m: int, dtype=float) -> np.ndarray:
    """(int_0^1 P_j P_i ds)_ij, which is diag(1, 1/3, ..., 1/(2m - 1)); the
    quadrature is checked against the closed form, which is returned"""
    rule = gauss_rule(m)
    computed = _weighted_basis(m, rule) @ legendre_table(m, rule.nodes).T
    expected = np.diag(1.0 / (2.0 * np.arange(m, dtype=dtype) + 1.0))
    gap = np.max(np.abs(computed - expected))
    if gap > GRAM_TOL:
        raise AssemblyError(f"Gram matrix of order {m} is off by {gap:.3e}")
    expected.setflags(write=False)
    return expected


def _check_step(mesh: Mesh, n: int) -> None:
    if not 0 <= n < mesh.N:
        raise AssemblyError(f"interval {n} is outside 0..{mesh.N - 1}")


def beta_diag(
    kernel: Kernel, mesh: Mesh, n: int, m: int, rule: QuadRule, dtype=float
):
    """triangle moments on interval n: the inner integral over [0, s] is mapped
    onto [0, 1] and evaluated with the same rule as the outer one"""
    _check_step(mesh, n)
    h, t_n = mesh.step(dtype), mesh.node(n, dtype)
    s, weights = rule.nodes.astype(dtype), rule.weights.astype(dtype)
    tau = s[:, None] * s[None, :]

    values = evaluate(kernel, t_n + s[:, None] * h, t_n + tau * h, dtype=dtype)
    inner = np.einsum("b,ab,jab->ja", weights, values, legendre_table(m, tau, dtype))
    inner = inner * s[None, :]
    return np.einsum("ia,ja->ij", _weighted_basis(m, rule, dtype), inner)


def beta_history(
    kernel: Kernel, mesh: Mesh, n: int, m: int, rule: QuadRule, dtype=float
):
    """square moments of interval n against every earlier interval l < n,
    stacked along the first axis"""
    _check_step(mesh, n)
    h, s = mesh.step(dtype), rule.nodes.astype(dtype)
    basis = _weighted_basis(m, rule, dtype)
    t = mesh.node(n, dtype) + s * h
    earlier = mesh.node(np.arange(n), dtype)[:, None] + s[None, :] * h
    values = evaluate(kernel, t[None, :, None], earlier[:, None, :], dtype=dtype)
    return np.einsum("ia,lab,jb->lij", basis, values, basis)


def beta_offdiag(
    kernel: Kernel, mesh: Mesh, n: int, l: int, m: int, rule: QuadRule, dtype=float
):
    """square moments of interval n against interval l < n"""
    _check_step(mesh, n)
    if not 0 <= l < n:
        raise AssemblyError(f"history interval {l} is not before {n}")
    h, s = mesh.step(dtype), rule.nodes.astype(dtype)
    basis = _weighted_basis(m, rule, dtype)
    values = evaluate(
        kernel,
        mesh.node(n, dtype) + s[:, None] * h,
        mesh.node(l, dtype) + s[None, :] * h,
        dtype=dtype,
    )
    return basis @ values @ basis.T


def load_vector(f: Function, mesh: Mesh, n: int, m: int, rule: QuadRule, dtype=float):
    _check_step(mesh, n)
    t = mesh.node(n, dtype) + rule.nodes.astype(dtype) * mesh.step(dtype)
    return _weighted_basis(m, rule, dtype) @ evaluate(f, t, dtype=dtype)


def perturbation_moments(
    perturbation: PerturbationSpec,
    mesh: Mesh,
    n: int,
    m: int,
    rule: QuadRule,
    dtype=float,
):
    """moments of the realized perturbation on interval n"""
    _check_step(mesh, n)
    values = perturbation.local_values(
        mesh.step(dtype), n, mesh.node(n, dtype), rule.nodes, dtype=dtype
    )
    return _weighted_basis(m, rule, dtype) @ values


@dataclass
class MomentBlock:
    """everything step n needs: Gram matrix, triangle moments per kernel,
    square moments per kernel and earlier interval, load vectors"""

    m: int
    n: int
    A: np.ndarray
    Bn: Dict[KernelKey, np.ndarray] = field(default_factory=dict)
    Bnl: Dict[Tuple[int, int, int], np.ndarray] = field(default_factory=dict)
    Fn: Dict[int, np.ndarray] = field(default_factory=dict)

    @property
    def dtype(self):
        return self.A.dtype

    def history(self, key: KernelKey) -> np.ndarray:
        """square moments of one kernel as an (n, m, m) stack"""
        p, q = key
        if not self.n:
            return np.zeros((0, self.m, self.m), dtype=self.dtype)
        return np.stack([self.Bnl[(p, q, l)] for l in range(self.n)])


class MomentAssembler:
    """Assemble moment blocks for a fixed set of kernels on one mesh

    With ``cache=True`` the history stacks are kept per (kernel, n), so a
    second pass over the same steps (the Galerkin residual check) does not
    integrate them again. ``dtype`` is the working precision of every moment,
    kernel and load evaluation; the rule itself stays in double precision.
    """

    def __init__(
        self,
        kernels: Dict[KernelKey, Kernel],
        mesh: Mesh,
        m: int,
        rule: QuadRule,
        cache: bool = False,
        dtype=float,
    ):
        self.kernels = kernels
        self.mesh = mesh
        self.m = m
        self.rule = rule
        self.dtype = dtype
        self._cache: Optional[Dict[Tuple[KernelKey, int, str], np.ndarray]] = (
            {} if cache else None
        )

    def _cached(self, key: KernelKey, n: int, kind: str, compute):
        if self._cache is None:
            return compute(
                self.kernels[key], self.mesh, n, self.m, self.rule, self.dtype
            )
        slot = (key, n, kind)
        if slot not in self._cache:
            self._cache[slot] = compute(
                self.kernels[key], self.mesh, n, self.m, self.rule, self.dtype
            )
        return self._cache[slot]

    def diag(self, key: KernelKey, n: int) -> np.ndarray:
        return self._cached(key, n, "diag", beta_diag)

    def history(self, key: KernelKey, n: int) -> np.ndarray:
        return self._cached(key, n, "history", beta_history)

    def perturbation(self, perturbation: PerturbationSpec, n: int) -> np.ndarray:
        return perturbation_moments(
            perturbation, self.mesh, n, self.m, self.rule, self.dtype
        )

    def block(self, n: int, loads: Dict[int, Function]) -> MomentBlock:
        block = MomentBlock(m=self.m, n=n, A=gram(self.m, self.dtype))
        for key in self.kernels:
            block.Bn[key] = self.diag(key, n)
            for l, moments in enumerate(self.history(key, n)):
                block.Bnl[key + (l,)] = moments
        for p, f in loads.items():
            block.Fn[p] = load_vector(f, self.mesh, n, self.m, self.rule, self.dtype)
        return block
