import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_family
from gaugeids.blocks import tau_roots
from gaugeids.contour import (ContourSpec, QuadratureError, a_coefficient, a_coefficients, a_series,
                              contour_fraction, contour_power_sum, denominator_series_check, gbinom)


def test_contour_fraction():
    assert contour_fraction(1.0) == 1 / 8
    assert contour_fraction(2.0) == 1 / 8
    assert contour_fraction(3.5) == pytest.approx(3 / 40)


def test_contour_spec_node_count():
    with pytest.raises(ValueError):
        ContourSpec(1.0, 0.5, 48)
    with pytest.raises(ValueError):
        ContourSpec(1.0, 0.5, 96)
    z, wts = ContourSpec(2.0, 0.5, 64).nodes()
    assert np.allclose(np.abs(z - 2.0), 0.5)
    # trapezoid weights integrate 1/(z - c) to 2 pi i
    assert np.sum(wts / (z - 2.0)) == pytest.approx(1.0)


@given(st.floats(-3, 3), st.integers(0, 6))
def test_gbinom_matches_integer_binomial(p, j):
    n = int(round(p)) + 3
    assert gbinom(n, j) == math.comb(n, j)
    # generalised binomial recursion
    assert gbinom(p, j + 1) == pytest.approx(gbinom(p, j) * (p - j) / (j + 1), abs=1e-12)


def test_a_coefficients_known_values():
    for w in (1.0, 1.5, 2.0):
        assert a_coefficient(1, 0, w) == 1 / (2 * w)
        # (z^{2w} - rho^{2w})^{-1} = rho^{-2w} (2w u)^{-1} (1 + (2w-1)/2 u + ...)^{-1}
        assert a_coefficient(1, 1, w) == pytest.approx(-(2 * w - 1) / (4 * w))
    # w = 1: (z^2 - rho^2)^{-1} = rho^{-2} u^{-1} (2 + u)^{-1}, so A_{1j} = (-1)^j 2^{-j-1}
    A = a_coefficients(1, 10, 1.0)
    assert np.allclose(A, [(-1) ** j / 2 ** (j + 1) for j in range(11)])
    with pytest.raises(ValueError):
        a_coefficients(0, 3, 1.0)


@given(st.sampled_from([1.0, 1.5, 2.0]), st.integers(1, 3), st.floats(0.0, 2 * np.pi))
def test_a_series_on_contour(w, l, angle):
    rho = 300.0
    z = rho + contour_fraction(w) * 200.0 * np.exp(1j * angle)
    exact = (z ** (2 * w) - rho ** (2 * w)) ** (-l)
    assert abs(a_series(np.array([z]), rho, l, w)[0] / exact - 1) < 1e-10


@given(st.integers(0, 10 ** 6), st.integers(1, 6), st.integers(0, 3))
def test_contour_counts_and_power_sums(seed, s, K):
    fam = random_family(np.random.default_rng(seed), s, 1.5)
    rho = 330.0
    res = contour_power_sum(fam, rho, K, ContourSpec.standard(rho, 200.0, 1.5), rtol=1e-12)
    assert res.count == pytest.approx(s, abs=1e-8)
    direct = np.sum(tau_roots(fam, rho)[0] ** (K + 1))
    assert res.value == pytest.approx(direct, rel=1e-8)
    assert abs(res.imag) < 1e-8 * abs(direct)
    assert res.min_abs_det > 0


def test_contour_refuses_unconverged():
    fam = random_family(np.random.default_rng(2), 3, 1.0)
    with pytest.raises(QuadratureError):
        contour_power_sum(fam, 300.0, 2, ContourSpec.standard(300.0, 200.0, 1.0), rtol=1e-30, max_nodes=128)


@given(st.floats(200.0, 800.0), st.floats(0.2, 1.3), st.floats(-2, 2), st.floats(-2, 2))
def test_denominator_series(r, ang, a1, a2):
    Phi = np.array([math.cos(ang), math.sin(ang)])
    a = np.array([a1, a2])
    theta = np.array([1.0, 0.0])
    phi = np.array([0.0, 1.0])
    assert denominator_series_check(theta, phi, np.zeros(2), a, r, Phi, 1.0).defect < 1e-14
    assert denominator_series_check(theta, phi, np.zeros(2), a, r, Phi, 1.5).defect < 1e-10


def test_denominator_series_outside_regime():
    theta = np.array([1.0, 0.0])
    with pytest.raises(ValueError):
        denominator_series_check(theta, np.zeros(2), np.zeros(2), np.array([0.0, 30.0]), 1.0,
                                 np.array([1.0, 0.0]), 1.5)
