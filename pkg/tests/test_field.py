from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from mahlerlab.field import (
    Cyclotomic,
    cyclotomic_coeffs,
    euler_phi,
    format_scalar,
    multiplicative_order,
)

from conftest import cyclo_elems, rationals


def test_cyclotomic_polynomials():
    # Phi_1 .. Phi_6, low degree first
    assert cyclotomic_coeffs(1) == (-1, 1)
    assert cyclotomic_coeffs(4) == (1, 0, 1)
    assert cyclotomic_coeffs(6) == (1, -1, 1)
    assert cyclotomic_coeffs(5) == (1, 1, 1, 1, 1)


def test_cyclotomic_against_sympy():
    sympy = pytest.importorskip("sympy")
    x = sympy.Symbol("x")
    for n in range(1, 31):
        ref = sympy.Poly(sympy.cyclotomic_poly(n, x), x).all_coeffs()[::-1]
        assert list(cyclotomic_coeffs(n)) == [int(c) for c in ref]


def test_phi_and_order():
    assert [euler_phi(n) for n in range(1, 11)] == [1, 1, 2, 2, 4, 2, 6, 4, 6, 4]
    assert multiplicative_order(2, 5) == 4
    assert multiplicative_order(3, 7) == 6
    assert multiplicative_order(2, 1) == 1


def test_singleton_and_rational_field():
    assert Cyclotomic(5) is Cyclotomic(5)
    assert Cyclotomic(1).is_rational and Cyclotomic(2).is_rational
    assert not Cyclotomic(3).is_rational


def test_zeta_relations():
    K = Cyclotomic(5)
    z = K.zeta()
    assert z ** 5 == K.one
    assert z ** 4 + z ** 3 + z ** 2 + z + 1 == K.zero
    assert K.root_of_unity_order(z) == 5
    assert K.root_of_unity_order(-z) == 10
    assert K.root_of_unity_order(K.embed(2)) is None
    assert K.unity_order == 10
    assert Cyclotomic(4).unity_order == 4


def test_coords_length_is_phi():
    for N in (3, 4, 5, 7, 8, 12):
        K = Cyclotomic(N)
        assert len(K.coords(K.zeta() ** 3 + 2)) == euler_phi(N)


def test_formatting():
    K = Cyclotomic(5)
    assert format_scalar(Fraction(-3, 4)) == "-3/4"
    assert "zeta" in format_scalar(K.zeta() + 1)


@given(cyclo_elems(), cyclo_elems(), cyclo_elems())
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == Cyclotomic(5).zero


@given(cyclo_elems())
def test_inverse(a):
    K = Cyclotomic(5)
    if a != K.zero:
        assert a * a.inverse() == K.one
        assert a / a == K.one


@given(st.sampled_from([3, 4, 7, 8, 9, 12]), st.data())
def test_inverse_other_fields(N, data):
    K = Cyclotomic(N)
    a = data.draw(cyclo_elems(N))
    if a != K.zero:
        assert a * (1 / a) == K.one


@given(cyclo_elems(), st.sampled_from([1, 2, 3, 4]))
def test_galois_is_ring_map(a, g):
    b = a * a + 3
    assert b.conjugate(g) == a.conjugate(g) * a.conjugate(g) + 3


@given(rationals)
def test_embedding_of_rationals(q):
    K = Cyclotomic(7)
    x = K.embed(q)
    assert x.is_rational()
    assert K.coords(x)[0] == q
