from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from mahlerlab.errors import AllCoefficientsZero
from mahlerlab.field import Cyclotomic
from mahlerlab.points import (
    ALGEBRAIC,
    ELEMENT,
    UNITY,
    PointClass,
    classify_point,
    is_anxious,
    orbit_horizon,
    orbit_step,
    root_modulus_bounds,
    split_classes,
    support_set,
    uniform_orbits,
)
from mahlerlab.poly import Poly, RatFun, valuation_at_class

from conftest import lin, nonzero_ratfuns

F = Fraction


def test_classification_examples():
    c = classify_point(PointClass.element(1), 2)
    assert c.anxious and c.unity == (1, 1)
    assert not is_anxious(PointClass.unity(3), 3)
    c2 = classify_point(PointClass.element(2), 2)
    assert c2.anxious and c2.unity is None
    assert not is_anxious(PointClass.zero(), 2)
    # -1 has order 2, calm for even k, anxious with period 1 for odd k
    assert not is_anxious(PointClass.element(-1), 2)
    assert classify_point(PointClass.element(-1), 3).unity == (2, 1)


def test_orbit_step_examples():
    assert orbit_step(PointClass.element(2), 2).poly == lin(4)
    s = orbit_step(PointClass.algebraic(Poly([-2, 0, 1])), 2)
    assert s.kind == ELEMENT and s.poly == lin(2)
    u = orbit_step(PointClass.unity(5), 2)
    assert u.kind == UNITY and u.order == 5 and u.poly == PointClass.unity(5).poly


def test_split_classes_separates_cyclotomic_factors():
    p = Poly([-1, 0, 1]) * Poly([-2, 0, 1]) * Poly([1, 1, 1])
    kinds = sorted((c.kind, c.order) for c in split_classes(p))
    assert kinds == [(ALGEBRAIC, None), (ELEMENT, 1), (ELEMENT, 2), (UNITY, 3)]


def test_unity_classes_in_cyclotomic_field():
    K = Cyclotomic(5)
    a = PointClass.element(K.zeta() ** 2, K)
    assert a.order == 5
    assert classify_point(a, 2).unity == (5, 4)
    assert orbit_step(a, 2).poly == lin(K.zeta() ** 4)


def test_support_set_examples():
    s = support_set([RatFun(lin(4), lin(2))])
    assert s.polys() == [lin(2), lin(4)] or set(s.polys()) == {lin(2), lin(4)}
    i2 = s.polys().index(lin(2))
    i4 = s.polys().index(lin(4))
    assert s.valuation(i2, 0) == -1 and s.valuation(i4, 0) == 1
    assert [c.poly for c in s.pole_classes()] == [lin(2)]


def test_support_set_of_the_order_two_example(example_eq):
    s = support_set(example_eq.coeffs)
    assert set(s.polys()) == {lin(2), lin(8), lin(F(8, 5))}
    assert [c.poly for c in s.anxious_pole_classes(3)] == [lin(2)]
    assert set(support_set([RatFun(Poly([1, 1]))]).polys()) == {Poly([1, 1])}


def test_support_set_rejects_all_zero():
    with pytest.raises(AllCoefficientsZero):
        support_set([RatFun(Poly([]))])


def test_orbit_horizon_examples():
    sup = support_set([RatFun(Poly([1]), lin(2) * lin(4) * lin(8))])
    hz = orbit_horizon(PointClass.element(2), sup, 2)
    # 2, 4 meet the support; 16 exceeds every root modulus of it
    assert hz.certified and hz.T == 2
    assert [s.poly for s in hz.steps[:3]] == [lin(2), lin(4), lin(16)]
    hz = orbit_horizon(PointClass.element(2), support_set([RatFun(lin(2))]), 3)
    assert hz.T == 1 and hz.certified
    hz = orbit_horizon(PointClass.algebraic(Poly([-3, 0, 1])), support_set([RatFun(lin(3))]), 2)
    assert hz.T == 2 and hz.certified


def test_orbit_horizon_cap():
    # points on the unit circle that are not roots of unity never certify
    p = Poly([1, F(-6, 5), 1])  # roots (3 +- 4i)/5
    sup = support_set([RatFun(Poly([1]), p)])
    hz = orbit_horizon(PointClass.algebraic(p), sup, 2, cap=6)
    assert not hz.certified and hz.T == 6


@given(st.integers(2, 50), st.integers(2, 4))
def test_large_elements_certify_quickly(a, k):
    sup = support_set([RatFun(Poly([1]), lin(a))])
    hz = orbit_horizon(PointClass.element(a), sup, k)
    assert hz.certified and hz.T <= 1


@given(st.lists(st.integers(-20, 20).filter(lambda x: x), min_size=1, max_size=3))
def test_root_modulus_bounds_enclose_roots(roots):
    p = Poly([1])
    for r in roots:
        p = p * lin(r)
    lo, hi = root_modulus_bounds(p)
    assert lo <= min(abs(r) for r in roots) and max(abs(r) for r in roots) <= hi


@given(nonzero_ratfuns, st.sampled_from([lin(2), lin(F(1, 3)), Poly([-2, 0, 1]), Poly([1, 1, 1]), lin(-1)]), st.sampled_from([2, 3]))
def test_valuation_transport(c, f, k):
    # v_p(c(z^k)) = v_{p^k}(c) whenever c is uniform on p^k
    p = split_classes(f)[0]
    q = orbit_step(p, k)
    assume(all(g.poly == q.poly for g in split_classes(q.poly)))
    assert valuation_at_class(c.compose_power(k), p.poly) == valuation_at_class(c, q.poly)


@given(st.integers(2, 30), st.sampled_from([2, 3, 5]))
def test_unity_anxiousness_stable_along_orbit(b, k):
    p = PointClass.unity(b)
    a = is_anxious(p, k)
    for _ in range(4):
        p = orbit_step(p, k)
        if a:
            assert is_anxious(p, k)


def test_uniform_orbits_split_cyclotomic_class():
    # Phi_3 against a support containing only one of its conjugates over Q(zeta_3)
    K = Cyclotomic(3)
    w = K.zeta()
    sup = support_set([RatFun(Poly([1]), Poly([-w, 1]))])
    pieces = uniform_orbits(PointClass.unity(3, Poly([1, 1, 1]).map_coeffs(K.embed)), sup, 2)
    assert sorted(o.start.poly.deg for o in pieces) == [1, 1]
    for o in pieces:
        assert o.period == 2
