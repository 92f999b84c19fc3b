import random
from fractions import Fraction
from math import inf

import pytest
from hypothesis import assume, given, settings, strategies as st

from mahlerlab.calmness import (
    INFINITE_TAIL,
    UNITY_CYCLE,
    SequenceSpec,
    WitnessTrace,
    act,
    clm_of_sequence,
    is_calm,
    is_precalm,
    min_clm,
    polynomialize,
    precalm_witness,
    prepolynomialize,
)
from mahlerlab.errors import AllCoefficientsZero, HorizonUncertified, NotCalm, NotPrecalm, Undecided, ZeroAction
from mahlerlab.field import Cyclotomic
from mahlerlab.points import PointClass, support_set
from mahlerlab.poly import Poly, RatFun, valuation_at_class

from conftest import lin
from oracles import brute_min_clm, random_coefficients

F = Fraction
Z = Poly([0, 1])


def rf(num, den=(1,)):
    return RatFun(Poly(num) if not isinstance(num, Poly) else num, Poly(den) if not isinstance(den, Poly) else den)


def no_anxious_pole(coeffs, k):
    try:
        return not support_set(coeffs).anxious_pole_classes(k)
    except AllCoefficientsZero:
        return True


# the action


def test_act_examples():
    c = [RatFun(lin(4), lin(2))]
    assert act(lin(4), c, 2) == [RatFun(Poly([2, 1]))]
    d = [rf([1, 2]), rf([0, 1], [3, 1])]
    assert act(Poly([1]), d, 3) == d
    assert act(Z, [rf([5, 1])], 2) == [rf([0, 5, 1])]


def test_act_zero():
    with pytest.raises(ZeroAction):
        act(Poly([]), [rf([1])], 2)


# calmness of sequences


def test_clm_of_sequence_examples(example_eq):
    c = example_eq.coeffs
    two = PointClass.element(2)
    assert clm_of_sequence(c, SequenceSpec(two, (1, 1), INFINITE_TAIL), 3) == -1
    # c_2 vanishes at 8
    assert clm_of_sequence(c, SequenceSpec(two, (1, 2), INFINITE_TAIL), 3) == 0
    zero_first = [RatFun(Poly([])), rf([1, 1])]
    assert clm_of_sequence(zero_first, SequenceSpec(two, (1, 2), INFINITE_TAIL), 2) == inf


def test_clm_rejects_short_prefix(example_eq):
    with pytest.raises(ValueError):
        clm_of_sequence(example_eq.coeffs, SequenceSpec(PointClass.element(2), (), INFINITE_TAIL), 3)


def test_min_clm_examples():
    v, spec = min_clm([RatFun(lin(4), lin(2))], PointClass.element(2), 2)
    assert v == 0 and spec.entries[:2] == (1, 1)
    v, spec = min_clm([rf([1], [1, -1])], PointClass.element(1), 2)
    assert v == -inf and spec.mode == UNITY_CYCLE and spec.entries == (1,)


def test_min_clm_position_dependent_unity():
    K = Cyclotomic(5)
    w = K.zeta()
    c = [RatFun(Poly([-w ** 2, 1]), Poly([-w, 1]))]
    v, spec = min_clm(c, PointClass.element(w, K), 2)
    assert v == 0 and spec.entries == (1, 1, 1, 1)


def test_min_clm_of_calm_start_rejected():
    with pytest.raises(ValueError):
        min_clm([rf([1, 1])], PointClass.unity(3), 3)


def test_uncertified_horizon_is_undecided():
    p = Poly([1, F(-6, 5), 1])  # roots on the unit circle, not roots of unity
    with pytest.raises(HorizonUncertified):
        min_clm([RatFun(Poly([1]), p)], PointClass.algebraic(p), 2, cap=8)
    with pytest.raises(Undecided):
        is_precalm([RatFun(Poly([1]), p)], 2, cap=8)


# the decision


def test_precalm_examples(example_eq):
    v = is_precalm(example_eq.coeffs, 3)
    assert not v.precalm
    cls, spec, val = v.violation
    assert cls.poly == lin(2) and spec.entries == (1, 1) and val == -1
    assert is_precalm([rf([1, 1])], 2).precalm
    assert is_precalm([RatFun(lin(4), lin(2))], 2).precalm


def test_witness_examples():
    assert precalm_witness([RatFun(lin(4), lin(2))], 2) == lin(4)
    K = Cyclotomic(5)
    w = K.zeta()
    c = [RatFun(Poly([-w ** 2, 1]), Poly([-w, 1]))]
    h = precalm_witness(c, 2)
    assert h == Poly([-w ** 2, 1])
    assert act(h, c, 2) == [RatFun(Poly([w, 1]))]
    assert precalm_witness([rf([1, 1])], 2) == Poly([1])


def test_witness_of_non_precalm_raises(example_eq):
    with pytest.raises(NotPrecalm):
        precalm_witness(example_eq.coeffs, 3)


def test_prepolynomialize_examples():
    assert prepolynomialize([rf([1], [0, 1])], 2) == Z
    assert prepolynomialize([rf([1, 0, 1])], 2) == Poly([1])
    # calm pole at the primitive cube roots of unity for k = 3
    h = prepolynomialize([rf([1], [1, 1, 1])], 3)
    assert h == lin(1)
    assert all(c.is_poly() for c in act(h, [rf([1], [1, 1, 1])], 3))
    with pytest.raises(NotCalm):
        prepolynomialize([rf([1], [1, 0, 0, -1])], 3)


def test_polynomialize_examples():
    assert polynomialize([RatFun(lin(4), lin(2))], 2) == lin(4)
    assert polynomialize([rf([1, 1])], 2) == Poly([1])
    assert polynomialize([rf([1, 1], [0, 1])], 2) == Z


def test_is_calm():
    assert is_calm([rf([1, 1])], 2)
    assert not is_calm([RatFun(lin(4), lin(2))], 2)


# properties


def _instance(seed, **kw):
    rng = random.Random(seed)
    return random_coefficients(rng, rng.random() < 0.5, **kw), rng.choice([2, 3])


@settings(max_examples=40)
@given(st.integers(0, 10 ** 6))
def test_min_clm_matches_brute_force(seed):
    coeffs, k = _instance(seed)
    assume(any(not c.is_zero() for c in coeffs))
    for cls in support_set(coeffs).anxious_pole_classes(k):
        assert min_clm(coeffs, cls, k)[0] == brute_min_clm(coeffs, cls, k)


@settings(max_examples=40)
@given(st.integers(0, 10 ** 6))
def test_precalm_iff_every_min_clm_nonnegative(seed):
    coeffs, k = _instance(seed)
    assume(any(not c.is_zero() for c in coeffs))
    vals = [min_clm(coeffs, c, k)[0] for c in support_set(coeffs).anxious_pole_classes(k)]
    assert is_precalm(coeffs, k, witness=False).precalm == all(v >= 0 for v in vals)


@settings(max_examples=40)
@given(st.integers(0, 10 ** 6))
def test_witness_soundness(seed):
    coeffs, k = _instance(seed)
    assume(any(not c.is_zero() for c in coeffs))
    v = is_precalm(coeffs, k)
    assume(v.precalm)
    assert no_anxious_pole(act(v.witness, coeffs, k), k)
    for step in v.trace.steps:
        if step["stage"] == "sigma":
            assert step["sigma_after"] < step["sigma_before"]
    p = polynomialize(coeffs, k)
    assert all(c.is_poly() for c in act(p, coeffs, k))


@settings(max_examples=40)
@given(st.integers(0, 10 ** 6), st.sampled_from([2, 3, F(1, 2), -2]), st.integers(-2, 2))
def test_action_shifts_non_unity_min_clm(seed, alpha, e):
    coeffs, k = _instance(seed)
    assume(any(not c.is_zero() for c in coeffs))
    K = Cyclotomic(5) if any(not isinstance(x, (int, Fraction)) for c in coeffs for x in c.num.c + c.den.c) else Cyclotomic(1)
    start = PointClass.element(K.embed(alpha), K)
    h = RatFun(Poly.linear(K.embed(alpha))) ** e * RatFun(Poly([K.embed(3), K.one]))
    before = min_clm(coeffs, start, k)[0]
    after = min_clm(act(h, coeffs, k), start, k)[0]
    assert after == before - valuation_at_class(h, start.poly)


@settings(max_examples=30)
@given(st.integers(0, 10 ** 6), st.lists(st.integers(1, 3), min_size=1, max_size=6))
def test_action_preserves_unity_cycles(seed, walk):
    rng = random.Random(seed)
    coeffs = random_coefficients(rng, True, n=3, allow_zero=False)
    k = rng.choice([2, 3])
    K = Cyclotomic(5)
    start = PointClass.element(K.zeta() ** rng.randint(1, 4), K)
    # close the walk: the orbit of a primitive fifth root has period 4 for k = 2, 3
    r = -sum(walk) % 4
    walk = tuple(walk) + ((r,) if r else ())
    h = RatFun(Poly([-K.zeta() ** rng.randint(1, 4), K.one])) * RatFun(Poly([K.embed(2), K.one]))
    spec = SequenceSpec(start, walk, UNITY_CYCLE)
    assert clm_of_sequence(act(h, coeffs, k), spec, k) == clm_of_sequence(coeffs, spec, k)
