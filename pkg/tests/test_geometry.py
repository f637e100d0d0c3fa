import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import shell_points
from gaugeids.geometry import (GeometryError, ResonanceGeometry, Subspace, build_chart, chart_from_vectors,
                               check_condition_A, enumerate_subspaces, geometry_constants, ordering, rref,
                               theta_closure)
from gaugeids.problems import frequency_set

FS2 = frequency_set([(1, 0), (0, 1)], 2)


def test_closure_of_coordinate_frequencies():
    closed = theta_closure(FS2, 2)
    # 0, +-e1, +-e2, +-2e1, +-2e2, +-e1+-e2
    assert len(closed) == 13
    assert closed.has_exact
    assert theta_closure(FS2, 1) is FS2
    with pytest.raises(GeometryError):
        theta_closure(FS2, 0)


@given(st.integers(1, 3))
def test_closure_symmetric_and_nested(k):
    fs = frequency_set([("1/2",), (1,)], 1) if k == 1 else frequency_set([(1, 0), ("1/3", 1)], 2)
    a, b = theta_closure(fs, k), theta_closure(fs, k + 1)

    def keys(arr):
        return {tuple((np.round(x, 9) + 0.0).tolist()) for x in arr}

    assert keys(a.array) <= keys(b.array)
    assert keys(-a.array) == keys(a.array)


def test_rref():
    R = rref(np.array([[2.0, 4.0], [1.0, 2.0], [0.0, 3.0]]))
    assert np.allclose(R, np.eye(2))
    assert rref(np.array([[2.0, 4.0], [1.0, 2.0]])).shape == (1, 2)


def test_subspace_operations():
    V = Subspace.span(np.array([[1.0, 1.0, 0.0], [2.0, 2.0, 0.0]]), 3)
    assert V.dim == 1
    assert V.contains(np.array([[3.0, 3.0, 0.0]]))[0]
    assert not V.contains(np.array([[1.0, 0.0, 0.0]]))[0]
    Q = V.complement_basis()
    assert Q.shape == (2, 3) and np.allclose(Q @ V.basis.T, 0)
    U = Subspace.span(np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]), 3)
    assert V.is_subspace_of(U) and not U.is_subspace_of(V)
    assert Subspace.span(np.array([[1.0, 1.0, 0.0]]), 3).key == V.key


def test_enumerate_subspaces_coordinate_toy():
    levels = enumerate_subspaces(theta_closure(FS2, 2))
    assert [len(l) for l in levels] == [1, 4, 1]


def test_geometry_constants():
    closed = theta_closure(FS2, 2)
    subs = [V for lvl in enumerate_subspaces(closed) for V in lvl]
    c = geometry_constants(closed, subs, rho=1e6, k=4)
    assert c["s"] == pytest.approx(math.sqrt(0.5))
    assert c["r"] == pytest.approx(1.0) and c["R"] == pytest.approx(2.0)
    assert c["card"] == 13 and not c["s_vacuous"]
    one = frequency_set([(1,)], 1)
    c1 = geometry_constants(theta_closure(one, 2), [V for l in enumerate_subspaces(one) for V in l], 100.0, 4)
    assert c1["s_vacuous"] and c1["s"] == 1.0


def test_condition_a_relations():
    fs = frequency_set([(1, 0), ("1/2", "1/3")], 2)
    res = check_condition_A(fs, 2)
    assert res.passed and res.checked > 0 and res.dependent
    for combo, kernel in res.dependent:
        total = [sum(Fraction(n) * v[i] for n, v in zip(kernel, combo)) for i in range(2)]
        assert total == [0, 0] and all(isinstance(n, int) for n in kernel) and any(kernel)


def test_condition_a_needs_exact_coordinates():
    fs = frequency_set([(1.0, 0.0), (0.0, math.sqrt(2))], 2)
    with pytest.raises(GeometryError, match="rational coords missing"):
        check_condition_A(fs)


def test_ordering_by_modulus_then_lexicographic():
    pts = np.array([[0.0, 2.0], [1.0, 0.0], [-1.0, 0.0], [0.0, -1.0]])
    assert ordering(pts).tolist() == [2, 3, 1, 0]


@given(st.floats(0.0, 2 * np.pi), st.floats(2 / 3, 6.0))
def test_regions_partition_shell(lift_setup, angle, radius):
    sp, _, _, geom = lift_setup
    xi = radius * sp.rho_n * np.array([[math.cos(angle), math.sin(angle)]])
    mem = geom.region_membership(xi)
    assert mem.sum() == 1
    # removing only the codimension-one extensions gives the same regions
    assert np.array_equal(mem, geom.region_membership(xi, mode="all"))


def test_plane_region_far_from_strips(lift_setup):
    sp, _, _, geom = lift_setup
    xi = np.array([[3 * sp.rho_n, 1.3 * sp.rho_n]])
    (i,) = geom.classify_region(xi)
    assert geom.region_dim(i) == 0
    cls = geom.congruence_class(xi[0])
    assert cls.size == 1 and cls.diameter() == 0.0


def test_class_diameter_within_flag_box(lift_setup):
    sp, _, _, geom = lift_setup
    xi = shell_points(400, 2, 2 * sp.rho_n / 3, 6 * sp.rho_n, seed=5)
    for p, i in zip(xi, geom.classify_region(xi)):
        m = geom.region_dim(i)
        cls = geom.congruence_class(p)
        if m == 0:
            assert cls.size == 1
            continue
        # each class point has a V-component in a box of half-widths L_1..L_m
        assert cls.diameter() <= 2 * math.sqrt(np.sum(geom.L[:m] ** 2)) * (1 + 1e-12)
        V = geom.subspaces[i]
        steps = cls.points - p
        assert np.all(V.contains(steps))


def test_class_witness_chain(lift_setup):
    sp, _, _, geom = lift_setup
    cls = geom.congruence_class(np.array([0.3, 2.5 * sp.rho_n]))
    assert cls.size > 1
    for k, (parent, t, l) in enumerate(cls.witness[1:], start=1):
        step = cls.points[k] - cls.points[parent]
        assert np.allclose(step, l * geom.moves[t])
        assert geom.in_lambda(geom.moves[t], cls.points[k])[0]
        assert geom.in_lambda(geom.moves[t], cls.points[parent])[0]


def test_class_cap(lift_setup):
    sp, _, _, _ = lift_setup
    closed = theta_closure(FS2, 2)
    small = ResonanceGeometry(closed, sp, class_cap=5)
    with pytest.raises(GeometryError, match="cap"):
        small.congruence_class(np.array([0.0, 0.0]))


def test_components_and_charts(lift_setup):
    sp, _, _, geom = lift_setup
    for i, V in enumerate(geom.subspaces):
        if V.dim == 2:
            assert geom.components(i) == []
            continue
        comps = geom.components(i)
        assert comps
        for comp in comps:
            if not comp.minimal:
                with pytest.raises(GeometryError):
                    build_chart(geom, comp)
                continue
            ch = build_chart(geom, comp)
            assert ch.K == 1 - V.dim
            assert np.allclose(ch.mus @ ch.apex, geom.L[V.dim])
            # a point inside the component round-trips through the chart
            xi = ch.apex + 3.0 * ch.vertices.mean(axis=0)
            X, r, Phi = ch.to_chart(xi[None, :])
            assert ch.in_simplex(Phi)[0]
            assert np.allclose(ch.from_chart(X, r, Phi), xi)


def test_chart_from_vectors_round_trip():
    ch = chart_from_vectors(np.array([[0.0, 0.0, 1.0]]), np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]), 2.0, 3)
    assert ch.m == 1 and ch.K == 1
    assert np.allclose(ch.apex, [2.0, 2.0, 0.0])
    xi = np.array([[5.0, 4.0, -7.0]])
    X, r, Phi = ch.to_chart(xi)
    assert np.allclose(ch.from_chart(X, r, Phi), xi)
    assert ch.in_simplex(Phi)[0]
    assert not ch.in_simplex(np.array([[-1.0, 0.0, 0.0]]))[0]
