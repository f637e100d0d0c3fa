from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gaugeids.problems import cosine_potential, frequency_set
from gaugeids.symbols import (Frequency, FrequencySet, RadialTerm, SymbolError, apply_to_exponential,
                              apply_to_vector, build_symbol, check_symmetry, free_symbol,
                              multiple_commutator, nabla_theta, parse_rational, symbol_commutator,
                              symbol_norm, symbol_product, zero_symbol)


def _merge(u, v, sign=1.0):
    out = dict(u)
    for k, x in v.items():
        match = next((k2 for k2 in out if max(abs(a - b) for a, b in zip(k, k2)) < 1e-9), None)
        if match is None:
            out[k] = sign * x
        else:
            out[match] += sign * x
    return out


def _close(u, v, tol=1e-10):
    diff = _merge(u, v, -1.0)
    scale = max([abs(x) for x in u.values()] + [1.0])
    return all(abs(x) <= tol * scale for x in diff.values())


def two_mode_symbol(c1=0.7, c2=0.3 - 0.2j, tau_amp=0.25):
    """Self-adjoint symbol with frequencies +-e_1, +-e_2 and a xi-dependent layer."""
    fs = frequency_set([(1, 0), (0, 1)], 2)
    idx = {tuple(int(round(x)) for x in f.coords): i for i, f in enumerate(fs)}
    coeffs = {(idx[(1, 0)], (0, 0)): c1, (idx[(-1, 0)], (0, 0)): c1,
              (idx[(0, 1)], (0, 0)): c2, (idx[(0, -1)], (0, 0)): np.conj(c2)}
    # real tau-layer at theta = 0 keeps self-adjointness
    coeffs[(idx[(0, 0)], (1, 0))] = tau_amp
    return build_symbol(fs, [RadialTerm(0.0, coeffs)], 4.0, kappa=0.0)


def test_parse_rational_forms():
    assert parse_rational("3/4") == (0.75, Fraction(3, 4))
    assert parse_rational(2) == (2.0, Fraction(2))
    assert parse_rational(0.5) == (0.5, None)
    with pytest.raises(SymbolError):
        parse_rational("x/2")
    with pytest.raises(SymbolError):
        parse_rational(True)


def test_frequency_exactness_and_negation():
    f = Frequency.parse(["1/2", 1])
    assert f.exact == (Fraction(1, 2), Fraction(1))
    assert (-f).exact == (Fraction(-1, 2), Fraction(-1))
    assert Frequency.parse([0.5, 1]).exact is None
    with pytest.raises(SymbolError):
        Frequency((0.5,), (Fraction(1, 3),))


def test_frequency_set_validation():
    fs = FrequencySet.from_generators([(1, 0), (0, 1)], 2)
    assert len(fs) == 5 and fs.has_exact
    with pytest.raises(SymbolError, match="zero"):
        FrequencySet([Frequency.parse([1, 0]), Frequency.parse([-1, 0])], 2)
    with pytest.raises(SymbolError, match="symmetric"):
        FrequencySet([Frequency.parse([0, 0]), Frequency.parse([1, 0]), Frequency.parse([0, 1]),
                      Frequency.parse([0, -1])], 2)
    with pytest.raises(SymbolError, match="span"):
        FrequencySet.from_generators([(1, 0)], 2)


def test_frequency_set_deduplicates():
    fs = FrequencySet.from_generators([(1, 0), (1, 0), (-1, 0), (0, 1)], 2)
    assert len(fs) == 5


def test_zero_symbol_has_no_frequencies():
    z = zero_symbol(2)
    assert z.is_zero
    assert z.coeffs(np.ones((3, 2))).shape == (0, 3)
    assert apply_to_exponential(z, [1.0, 2.0]) == {}
    empty = build_symbol(frequency_set([(1, 0), (0, 1)], 2), [], 4.0)
    assert empty.is_zero


def test_cosine_coefficients():
    b = cosine_potential(2, [1.5])
    xi = np.array([10.0, -3.0])
    assert b.fourier_coeff([1, 0], xi) == pytest.approx(1.5)
    assert b.fourier_coeff([-1, 0], xi) == pytest.approx(1.5)
    assert b.fourier_coeff([0, 1], xi) == 0


def test_radial_exponent_above_kappa_rejected():
    fs = frequency_set([(1,)], 1)
    with pytest.raises(SymbolError, match="exceeds kappa"):
        build_symbol(fs, [RadialTerm(1.0, {(1, (0,)): 1.0})], 4.0, kappa=0.5)


def test_radial_cutoff_below_c0():
    fs = frequency_set([(1,)], 1)
    b = build_symbol(fs, [RadialTerm(0.5, {(0, (0,)): 1.0})], 4.0, kappa=1.0)
    c = b.coeffs(np.array([[1.0], [100.0]]))
    assert c[0, 0] == 0
    assert c[0, 1] == pytest.approx(10.0)


@given(st.floats(-50, 50), st.floats(-50, 50))
def test_symmetry_of_self_adjoint_symbol(x, y):
    b = two_mode_symbol()
    assert check_symmetry(b, xi=np.array([[x, y]])) < 1e-12


def test_symmetry_detects_non_self_adjoint():
    fs = frequency_set([(1, 0), (0, 1)], 2)
    idx = {tuple(int(round(x)) for x in f.coords): i for i, f in enumerate(fs)}
    b = build_symbol(fs, [RadialTerm(0.0, {(idx[(1, 0)], (0, 0)): 1.0})], 4.0, self_adjoint=False)
    assert check_symmetry(b, 20) == pytest.approx(1.0)


@given(st.floats(-30, 30), st.floats(-30, 30))
def test_product_matches_sequential_application(x, y):
    b, g = two_mode_symbol(), two_mode_symbol(0.2, 0.5j, -0.1)
    nu = np.array([x, y])
    direct = apply_to_exponential(symbol_product(b, g), nu)
    sequential = apply_to_vector(b, apply_to_exponential(g, nu))
    assert _close(direct, sequential)


@given(st.floats(-30, 30), st.floats(-30, 30))
def test_commutator_matches_sequential_application(x, y):
    b, g = two_mode_symbol(), two_mode_symbol(0.2, 0.5j, -0.1)
    nu = np.array([x, y])
    direct = apply_to_exponential(symbol_commutator(b, g), nu)
    bg = apply_to_vector(b, apply_to_exponential(g, nu))
    gb = apply_to_vector(g, apply_to_exponential(b, nu))
    expected = {k: 1j * v for k, v in _merge(bg, gb, -1.0).items()}
    assert _close(direct, expected)


def test_commutator_with_free_symbol_is_multiplier():
    b = two_mode_symbol(tau_amp=0.0)
    h0 = free_symbol(2, 1.0)
    c = symbol_commutator(h0, b)
    xi = np.array([3.0, 4.0])
    theta = np.array([1.0, 0.0])
    expected = 1j * (np.sum((xi + theta) ** 2) - np.sum(xi ** 2)) * b.fourier_coeff(theta, xi)
    assert c.fourier_coeff(theta, xi) == pytest.approx(expected)


def test_multiple_commutator_is_left_fold():
    a, p, q = free_symbol(2, 1.0), two_mode_symbol(), two_mode_symbol(0.1, 0.2, 0.0)
    nu = np.array([2.0, -1.0])
    left = apply_to_exponential(multiple_commutator(a, [p, q]), nu)
    fold = apply_to_exponential(symbol_commutator(symbol_commutator(a, p), q), nu)
    assert _close(left, fold, 1e-12)


def test_nabla_theta_is_difference():
    b = two_mode_symbol()
    theta = np.array([0.0, 1.0])
    xi = np.array([[7.0, 2.0]])
    nb = nabla_theta(b, theta)
    assert np.allclose(nb.coeffs(xi), b.coeffs(xi + theta) - b.coeffs(xi))


def test_symbol_norm_of_constant_cosine():
    b = cosine_potential(1, [1.0])
    # two modes of size 1, weight <theta>^0, alpha = 0, no derivatives
    assert symbol_norm(b, 0.0, 0.0, 0) == pytest.approx(2.0)
    assert symbol_norm(b, 0.0, 0.0, 2) == pytest.approx(2.0)
    with pytest.raises(SymbolError):
        symbol_norm(b, 0.0, 0.0, 4)


def test_symbol_norm_weight_on_theta():
    b = cosine_potential(1, [1.0])
    assert symbol_norm(b, 0.0, 2.0, 0) == pytest.approx(2.0 * 2.0)
