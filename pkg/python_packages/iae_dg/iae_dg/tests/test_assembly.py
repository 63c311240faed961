import math

import numpy as np
import pytest

from ..assembly import (
    AssemblyError,
    MomentAssembler,
    beta_diag,
    beta_history,
    beta_offdiag,
    default_rule,
    gram,
    load_vector,
)
from ..basis import gauss_rule
from ..mesh import Mesh
from ..problems.utils import ExampleSpec
from ..spectral import build


def constant(t, s):
    return 1.0


@pytest.mark.parametrize("m", [1, 2, 4, 8])
def test_gram(m):
    np.testing.assert_allclose(
        gram(m), np.diag(1 / (2 * np.arange(m) + 1)), atol=1e-13
    )
    assert not gram(m).flags.writeable


@pytest.mark.parametrize("m", range(1, 7))
def test_constant_kernel_degeneracy(m):
    mesh = Mesh(T=1.0, N=8)
    rule = default_rule(m)
    S = build(m)
    np.testing.assert_allclose(beta_diag(constant, mesh, 5, m, rule), S.M, atol=1e-12)
    np.testing.assert_allclose(
        beta_offdiag(constant, mesh, 5, 2, m, rule), S.N, atol=1e-12
    )


def test_triangle_entries():
    B = beta_diag(constant, Mesh(T=1.0, N=2), 0, 2, default_rule(2))
    assert B[0, 0] == pytest.approx(1 / 2)
    assert B[0, 1] == pytest.approx(-1 / 6)
    assert B[1, 0] == pytest.approx(1 / 6)


def test_square_entry():
    B = beta_offdiag(lambda t, s: s, Mesh(T=1.0, N=2), 1, 0, 2, default_rule(2))
    assert B[0, 0] == pytest.approx(0.25)


def test_history_stack_matches_offdiag():
    mesh = Mesh(T=1.0, N=6)
    rule = default_rule(3)
    stack = beta_history(ExampleSpec.K21, mesh, 4, 3, rule)
    assert stack.shape == (4, 3, 3)
    for l in range(4):
        np.testing.assert_allclose(
            stack[l], beta_offdiag(ExampleSpec.K21, mesh, 4, l, 3, rule), atol=1e-15
        )


@pytest.mark.parametrize(
    "f, n, m, expected",
    [
        (lambda t: 1.0, 1, 3, [1.0, 0.0, 0.0]),
        (lambda t: t, 0, 2, [0.5, 1 / 6]),
        (lambda t: 0.0, 1, 2, [0.0, 0.0]),
    ],
)
def test_load_vector(f, n, m, expected):
    mesh = Mesh(T=2.0, N=2)
    np.testing.assert_allclose(
        load_vector(f, mesh, n, m, default_rule(m)), expected, atol=1e-14
    )


def test_outside_mesh():
    mesh = Mesh(T=1.0, N=4)
    rule = default_rule(2)
    with pytest.raises(AssemblyError):
        beta_diag(constant, mesh, 4, 2, rule)
    with pytest.raises(AssemblyError):
        beta_offdiag(constant, mesh, 2, 2, 2, rule)


@pytest.mark.parametrize("kernel", [ExampleSpec.K11, ExampleSpec.K12, ExampleSpec.K21])
def test_quadrature_converged(kernel):
    mesh = Mesh(T=1.0, N=4)
    m = 4
    rule, doubled = default_rule(m), gauss_rule(2 * (m + 6))
    np.testing.assert_allclose(
        beta_diag(kernel, mesh, 3, m, rule),
        beta_diag(kernel, mesh, 3, m, doubled),
        atol=1e-12,
    )
    np.testing.assert_allclose(
        beta_offdiag(kernel, mesh, 3, 1, m, rule),
        beta_offdiag(kernel, mesh, 3, 1, m, doubled),
        atol=1e-12,
    )


def _observed_order(gaps):
    return math.log2(gaps[-2] / gaps[-1])


@pytest.mark.parametrize("m", [2, 4])
def test_triangle_moments_approach_diagonal_value(m):
    """B^n - K(t_n, t_n) M shrinks like h at a fixed time"""
    kernel, M, t = ExampleSpec.K21, build(m).M, 0.5
    gaps = []
    for N in [8, 16, 32]:
        mesh = Mesh(T=1.0, N=N)
        n = int(t * N)
        B = beta_diag(kernel, mesh, n, m, default_rule(m))
        gaps.append(np.max(np.abs(B - kernel(t, t) * M)))
    assert _observed_order(gaps) == pytest.approx(1.0, abs=0.2)


@pytest.mark.parametrize("m", [2, 4])
def test_triangle_moments_vary_slowly(m):
    """B^n - B^(n-1) shrinks like h at a fixed time"""
    kernel, t = ExampleSpec.K21, 0.5
    gaps = []
    for N in [8, 16, 32]:
        mesh = Mesh(T=1.0, N=N)
        n = int(t * N)
        rule = default_rule(m)
        B = beta_diag(kernel, mesh, n, m, rule)
        B_prev = beta_diag(kernel, mesh, n - 1, m, rule)
        gaps.append(np.max(np.abs(B - B_prev)))
    assert _observed_order(gaps) == pytest.approx(1.0, abs=0.2)


def test_assembler_cache():
    mesh = Mesh(T=1.0, N=4)
    kernels = {(1, 1): ExampleSpec.K11}
    assembler = MomentAssembler(kernels, mesh, 2, default_rule(2), cache=True)
    first = assembler.block(3, {1: np.sin})
    second = assembler.block(3, {1: np.sin})
    assert first.Bn[(1, 1)] is second.Bn[(1, 1)]
    assert first.history((1, 1)).shape == (3, 2, 2)
    assert assembler.block(0, {}).history((1, 1)).shape == (0, 2, 2)


def test_long_double_moments(ex1):
    """moments in long double agree with the double ones and keep their type"""
    mesh, m = Mesh(T=1.0, N=8), 4
    rule = default_rule(m)
    for compute in [beta_diag, beta_history]:
        wide = compute(ExampleSpec.K21, mesh, 5, m, rule, np.longdouble)
        assert wide.dtype == np.longdouble
        np.testing.assert_allclose(
            wide.astype(float), compute(ExampleSpec.K21, mesh, 5, m, rule), atol=1e-14
        )
    load = load_vector(ex1.f2, mesh, 5, m, rule, np.longdouble)
    assert load.dtype == np.longdouble
    np.testing.assert_allclose(
        load.astype(float), load_vector(ex1.f2, mesh, 5, m, rule), atol=1e-14
    )
    assert gram(m, np.longdouble)[1, 1] == np.longdouble(1) / 3
