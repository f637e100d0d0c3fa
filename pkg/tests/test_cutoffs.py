import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import shell_points
from gaugeids.cutoffs import (CutoffFamily, chi_tilde, chi_tilde_matrix, free_difference, natural_part,
                              partition_symbol)
from gaugeids.params import ScaleParams
from gaugeids.problems import cosine_potential

SP = ScaleParams(d=2, w=1.0, rho_n=200.0)
CF = CutoffFamily(SP)
FREQS = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0], [0.0, 0.0]])

coord = st.floats(-3000, 3000)


def test_shell_cutoff_values():
    theta = np.array([[1.0, 0.0]])
    # u = 0 at |2 xi + theta| = 7.5 rho_n
    xi = np.array([[(7.5 * 200 - 1) / 2, 0.0]])
    assert CF.u(theta, xi)[0, 0] == pytest.approx(0.0)
    assert CF.e(theta, xi)[0, 0] == 1.0
    far = np.array([[5000.0, 0.0]])
    assert CF.e(theta, far)[0, 0] == 0.0 and CF.l_gt(theta, far)[0, 0] == 1.0
    near = np.array([[1.0, 0.0]])
    assert CF.e(theta, near)[0, 0] == 0.0 and CF.l_lt(theta, near)[0, 0] == 1.0


@given(coord, coord)
def test_cutoffs_partition_unity(x, y):
    xi = np.array([[x, y]])
    e, z, p = CF.e(FREQS[:3], xi), CF.zeta(FREQS[:3], xi), CF.phi(FREQS[:3], xi)
    total = e * (z + p) + CF.l_gt(FREQS[:3], xi) + CF.l_lt(FREQS[:3], xi)
    assert np.allclose(total, 1.0, atol=1e-14)


def test_zeta_marks_slab():
    theta = np.array([[1.0, 0.0]])
    inside = np.array([[0.0, 700.0]])
    outside = np.array([[200.0 ** SP.beta * 1.2, 700.0]])
    assert CF.zeta(theta, inside)[0, 0] == 1.0
    assert CF.zeta(theta, outside)[0, 0] == 0.0
    assert CF.zeta(np.zeros((1, 2)), inside)[0, 0] == 0.0


@given(coord, coord)
def test_partition_reassembles_symbol(x, y):
    b = cosine_potential(2, [1.0, 0.5])
    xi = np.array([[x, y]])
    total = sum(p.coeffs(xi) for p in partition_symbol(b, CF).parts() if not p.is_zero)
    assert np.allclose(total, b.coeffs(xi), atol=1e-13)


@given(st.floats(-2000, 2000), st.floats(-2000, 2000), st.sampled_from([1.0, 1.5, 2.0]))
def test_free_difference_matches_direct(x, y, w):
    xi = np.array([[x, y]])
    direct = np.sum((xi + FREQS[:3]) ** 2, axis=1) ** w - np.sum(xi ** 2) ** w
    val = free_difference(FREQS[:3], xi, w)[:, 0]
    assert np.allclose(val, direct, rtol=1e-9, atol=1e-6 * max(1.0, np.sum(xi ** 2) ** (w - 0.5)))


def test_free_difference_no_cancellation():
    # |xi| = 1e8: the direct difference loses every digit for w = 3/2
    xi = np.array([[1e8, 0.0]])
    theta = np.array([[0.0, 1.0]])
    expected = 1.5 * 1e8 ** 1 * 1.0  # w |xi|^{2w-2} |theta|^2 to leading order
    assert free_difference(theta, xi, 1.5)[0, 0] == pytest.approx(expected, rel=1e-8)


def test_chi_tilde_zero_frequency_and_off_support():
    xi = shell_points(200, 2, 100, 1600)
    M = chi_tilde_matrix(FREQS, xi, CF)
    assert np.all(M[3] == 0)
    ep = CF.e_phi(FREQS[:3], xi)
    assert np.all(M[:3][ep == 0] == 0)


def test_chi_tilde_bounded_on_support():
    # on supp(e phi) the denominator is at least ~ 2 rho_n^beta |theta|
    xi = shell_points(2000, 2, 70, 1600, seed=1)
    M = chi_tilde_matrix(FREQS[:3], xi, CF)
    bound = 1.0 / (2 * 200.0 ** SP.beta * np.linalg.norm(FREQS[:3], axis=1) * 0.99)
    assert np.all(np.abs(M) <= bound[:, None])


def test_chi_tilde_scalar():
    xi = np.array([700.0, 300.0])
    theta = np.array([1.0, 0.0])
    expected = CF.e_phi(theta[None], xi[None])[0, 0] / (2 * xi @ theta + 1.0)
    assert chi_tilde(theta, xi, SP) == pytest.approx(expected)


def test_natural_part_support():
    b = cosine_potential(2, [1.0])
    nat = natural_part(b, CF)
    xi = np.array([[0.0, 700.0], [700.0, 0.0]])
    c = nat.coeffs(xi)
    k = nat.index_of([1.0, 0.0])
    assert c[k, 0] == 0  # resonant slab
    assert c[k, 1] == pytest.approx(1.0)
