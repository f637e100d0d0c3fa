import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_family
from gaugeids.blocks import (Block, BlockError, InterpolatedFamily, RadialFamily, RootError, assemble_block,
                             block_eigenvalues, block_matrix, class_g_values, free_tau, g_of_xi,
                             in_shell_set, is_monotone, modulus_power, tau_roots)
from gaugeids.geometry import CongruenceClass


def test_modulus_power_branches():
    pts = np.array([[3.0, 4.0]])
    assert modulus_power(pts, 1.0)[0] == 25.0
    assert modulus_power(pts, 1.5)[0] == pytest.approx(125.0)
    z = np.array([[3.0 + 0.1j, 4.0]])
    assert modulus_power(z, 1.5)[0] == pytest.approx(np.sum(z * z) ** 1.5)


@given(st.integers(0, 10 ** 6), st.integers(1, 6), st.sampled_from([1.0, 1.5]))
def test_block_matrix_hermitian_with_free_diagonal(seed, s, w):
    fam = random_family(np.random.default_rng(seed), s, w)
    pts = fam.points(np.array([300.0]))[0]
    H = block_matrix(pts, w, fam.W)
    assert np.allclose(H, H.conj().T, atol=1e-12)
    assert np.allclose(np.diag(H).real, np.sum(pts * pts, axis=1) ** w)


def test_block_eigenvalues_rejects_non_hermitian():
    with pytest.raises(BlockError):
        block_eigenvalues(np.array([[1.0, 2.0], [0.0, 1.0]]))
    assert np.allclose(block_eigenvalues(Block(np.zeros((2, 1)), np.diag([2.0, 1.0]))), [1.0, 2.0])


def test_free_roots_hit_sphere():
    fam = random_family(np.random.default_rng(1), 4, 1.0)
    rho = 310.0
    tau0 = fam.free_roots(rho)
    pts = fam.X[0] + fam.a[0] + tau0[0][:, None] * fam.Phi[0]
    assert np.allclose(np.linalg.norm(pts, axis=1), rho)
    assert np.allclose(free_tau(fam.X[0], fam.a[0], fam.Phi[0], rho), tau0[0])
    with pytest.raises(RootError):
        RadialFamily(np.zeros((1, 1, 2)), [0.0, 400.0], [1.0, 0.0], 1.0).free_roots(10.0)


@given(st.integers(0, 10 ** 6), st.integers(1, 6), st.sampled_from([1.0, 1.5, 2.0]))
def test_tau_roots_solve_eigenvalue_equation(seed, s, w):
    fam = random_family(np.random.default_rng(seed), s, w)
    rho = 300.0
    tau = tau_roots(fam, rho)
    ev = np.linalg.eigvalsh(fam.matrix(tau))  # (1, s, s): all eigenvalues at each root
    for j in range(s):
        assert ev[0, j, j] == pytest.approx(rho ** (2 * w), rel=1e-12)


def test_tau_roots_free_family():
    fam = RadialFamily(np.array([[[0.0, 0.0], [0.0, 1.0]]]), [3.0, 0.0], [1.0, 0.0], 1.0)
    assert np.allclose(np.sort(tau_roots(fam, 50.0)[0]), np.sort(fam.free_roots(50.0)[0]))


def test_derivative_matches_finite_difference():
    fam = random_family(np.random.default_rng(4), 5, 1.5)
    z = np.array([280.0])
    h = 1e-4
    fd = (fam.matrix(z + h) - fam.matrix(z - h)) / (2 * h)
    assert np.allclose(fam.derivative(z), fd, rtol=1e-6, atol=1e-6)


def test_interpolated_family_matches_roots(lift_setup):
    sp, _, gr, geom = lift_setup
    xi = np.array([0.3, 2.1 * sp.rho_n])
    cls = geom.congruence_class(xi)
    pts = cls.ordered()
    X = pts.copy()
    X[:, 1] = 0.0
    fam = RadialFamily(X[None], [0.0, 0.0], [0.0, 1.0], sp.w, gr.w)
    rho = 2 * sp.rho_n
    tau0 = fam.free_roots(rho)
    sur = InterpolatedFamily(fam, tau0.min(axis=1) - 2, tau0.max(axis=1) + 2, 6)
    assert sur.rel_error < 1e-10
    assert np.allclose(tau_roots(sur, rho), tau_roots(fam, rho), rtol=1e-10)


def test_assemble_block_and_g(lift_setup):
    sp, _, gr, geom = lift_setup
    xi = np.array([0.3, 2.1 * sp.rho_n])
    cls = geom.congruence_class(xi)
    assert in_shell_set(geom, cls)
    blk = assemble_block(cls, gr.w, sp.w)
    assert blk.invariance_defect == 0.0 and blk.hermiticity_defect() < 1e-14
    g = class_g_values(cls, gr.w, sp.w)
    assert np.all(np.diff(g) >= 0)
    t = int(np.flatnonzero(np.all(np.abs(blk.points - xi) < 1e-9, axis=1))[0])
    assert g_of_xi(xi, geom, gr.w) == pytest.approx(g[t])
    # eigenvalues sum to the trace; W keeps its zero-frequency diagonal
    assert np.sum(g) == pytest.approx(np.trace(blk.matrix).real, rel=1e-12)


def test_assemble_block_detects_leak(lift_setup):
    sp, _, gr, geom = lift_setup
    cls = geom.congruence_class(np.array([0.3, 2.1 * sp.rho_n]))
    cut = CongruenceClass(cls.seed, cls.points[:2], cls.witness[:2])
    with pytest.raises(BlockError, match="invariant"):
        assemble_block(cut, gr.w, sp.w)


def test_g_outside_shell_is_free(lift_setup):
    sp, _, gr, geom = lift_setup
    xi = np.array([3.0 * sp.rho_n, 1.3 * sp.rho_n])
    assert g_of_xi(xi, geom, gr.w) == pytest.approx(np.sum(xi ** 2))
    far = np.array([0.2, 10 * sp.rho_n])
    assert g_of_xi(far, geom, gr.w) == pytest.approx(np.sum(far ** 2))


@given(st.integers(0, 10 ** 6), st.sampled_from([1.0, 1.5, 2.0]))
def test_monotone_in_r(seed, w):
    fam = random_family(np.random.default_rng(seed), 6, w)
    assert all(is_monotone(fam, r, 5.0) for r in np.linspace(60.0, 400.0, 12))
