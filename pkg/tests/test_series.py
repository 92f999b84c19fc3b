import random
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from mahlerlab.errors import ConstantTermNotOne, ConstraintViolated, Inconsistent, TruncationTooShort
from mahlerlab.operators import MahlerEquation, MahlerOperator
from mahlerlab.poly import Poly, RatFun
from mahlerlab.series import (
    Truncation,
    apply_operator,
    becker_product,
    cartier_series,
    guess_relation,
    kernel_rank_probe,
    series_residue,
    solve_series,
    verify_counterexample,
)

from conftest import rationals

F = Fraction


def rf(num, den=(1,)):
    return RatFun(Poly(num), Poly(den))


BINARY = MahlerEquation(2, [rf([1], [1, -1])])
ONES = MahlerEquation(2, [rf([1, 1])])


def binary_partitions(T):
    b = [1]
    for n in range(1, T):
        b.append(b[n - 1] if n % 2 else b[n - 1] + b[n // 2])
    return b


def random_equation(rng, max_n=2, max_deg=3):
    """Polynomial coefficients with sum c_i(0) = 1, so a power series solution exists."""
    k = rng.choice([2, 3])
    n = rng.randint(1, max_n)
    cs = [Poly([F(rng.randint(-3, 3), rng.choice([1, 1, 2])) for _ in range(rng.randint(1, max_deg + 1))]) for _ in range(n)]
    s = sum((c.c[0] if c.c else 0) for c in cs)
    cs[0] = cs[0] + Poly([1 - s])
    if cs[-1].is_zero():
        cs[-1] = Poly([0, 1])
    return MahlerEquation(k, [RatFun(c) for c in cs])


truncations = st.lists(rationals, min_size=12, max_size=40).map(Truncation)


# solving


def test_binary_partitions():
    t = solve_series(BINARY, 8).solution
    assert t.coeffs == [1, 1, 2, 2, 4, 4, 6, 6]
    assert solve_series(BINARY, 300).solution.coeffs == binary_partitions(300)


def test_geometric_series():
    assert solve_series(ONES, 6).solution.coeffs == [1] * 6


def test_order_two_example_residue(example_eq):
    rep = solve_series(example_eq, 200)
    assert rep.solution[0] == 1 and rep.free_parameters == [0]
    assert series_residue(example_eq, rep.solution).is_zero()


def test_seeds_and_inconsistency():
    t = solve_series(ONES, 5, seeds={0: 3}).solution
    assert t.coeffs == [3] * 5
    with pytest.raises(Inconsistent):
        solve_series(MahlerEquation(2, [rf([2])]), 10)


@settings(max_examples=30)
@given(st.integers(0, 10 ** 6))
def test_solution_satisfies_equation(seed):
    eq = random_equation(random.Random(seed))
    t = solve_series(eq, 120).solution
    assert series_residue(eq, t).is_zero()
    # uncleared form: f - sum c_i f(z^{k^i})
    op = MahlerOperator({0: RatFun(Poly([1]))}, eq.k) - MahlerOperator({i + 1: c for i, c in enumerate(eq.coeffs)}, eq.k)
    assert apply_operator(op, t).is_zero()


def test_rational_coefficient_residue():
    eq = MahlerEquation(2, [rf([1, 1], [1, -2]), rf([0, 1], [1, 1])])
    t = solve_series(eq, 150).solution
    op = MahlerOperator({0: RatFun(Poly([1]))}, 2) - MahlerOperator({i + 1: c for i, c in enumerate(eq.coeffs)}, 2)
    assert apply_operator(op, t).is_zero()
    assert series_residue(eq, t).is_zero()


# Cartier operators on series


def test_cartier_series_examples():
    t = Truncation([1, 0] * 10)
    assert cartier_series(t, 0, 2).coeffs == [1] * 10
    assert cartier_series(t, 1, 2).is_zero()


@given(truncations, st.sampled_from([2, 3]))
def test_cartier_reconstruction(t, k):
    out = [0] * t.T
    for r in range(k):
        lam = cartier_series(t, r, k)
        for j, x in enumerate(lam.coeffs):
            if j * k + r < t.T:
                out[j * k + r] += x
    assert out == t.coeffs


@given(truncations, truncations, st.sampled_from([2, 3]), st.data())
def test_cartier_of_mahler_product(f, g, k, data):
    r = data.draw(st.integers(0, k - 1))
    T = min(f.T, g.T)
    f, g = Truncation(f.coeffs[:T]), Truncation(g.coeffs[:T])
    lhs = cartier_series(f * g.compose_power(k), r, k)
    rhs = cartier_series(f, r, k) * g
    n = min(lhs.T, rhs.T)
    assert lhs.coeffs[:n] == rhs.coeffs[:n]


@settings(max_examples=30)
@given(st.integers(0, 10 ** 6))
def test_operator_application_is_multiplicative(seed):
    rng = random.Random(seed)
    eq = random_equation(rng)
    t = solve_series(random_equation(rng), 80).solution
    A = eq.operator()
    B = MahlerOperator({0: rf([1, rng.randint(-2, 2)]), 1: rf([rng.randint(-2, 2), 1])}, eq.k)
    assert apply_operator(A * B, t) == apply_operator(A, apply_operator(B, t))


# kernel probe


def test_probe_examples(example_eq):
    ones = kernel_rank_probe(Truncation([1] * 256), 4, k=2)
    assert ones.rank == 1 and ones.closed
    bp = kernel_rank_probe(BINARY, 6, T=1024)
    assert not bp.closed and bp.ranks == sorted(bp.ranks)
    ex = kernel_rank_probe(example_eq, 4, T=2187)
    assert ex.closed


def test_probe_needs_enough_terms():
    with pytest.raises(TruncationTooShort):
        kernel_rank_probe(BINARY, 6, T=512)


@pytest.mark.parametrize("depth", [2, 3, 4])
def test_closed_probe_stable_under_longer_truncation(example_eq, depth):
    a = kernel_rank_probe(example_eq, depth, T=32 * 3 ** (depth - 1))
    b = kernel_rank_probe(example_eq, depth, T=64 * 3 ** (depth - 1))
    if a.closed:
        assert b.closed and a.rank == b.rank


# guessing


def test_guess_recovers_binary_partition_equation():
    t = solve_series(BINARY, 200).solution
    rel = guess_relation(t, 1, 1, 2)
    assert rel is not None and rel.coeffs == BINARY.coeffs


def test_guess_finds_no_order_one_relation_for_the_example(example_eq):
    t = solve_series(example_eq, 600).solution
    assert guess_relation(t, 1, 6, 3) is None


def test_guess_polynomial_series():
    # f = 1 + z satisfies f(z) = (1+z)/(1+z^2) f(z^2)
    t = Truncation.from_poly(Poly([1, 1]), 100)
    rel = guess_relation(t, 1, 2, 2)
    assert rel is not None and series_residue(rel, t).is_zero()


def test_guess_needs_terms():
    with pytest.raises(TruncationTooShort):
        guess_relation(Truncation([1] * 40), 2, 4, 2)


# Becker products


def test_becker_examples():
    h, res = becker_product(rf([1, -1]), 2, 16)
    assert h.coeffs == binary_partitions(16) and res.is_zero()
    h, res = becker_product(rf([1]), 3, 10)
    assert h.coeffs == [1] + [0] * 9
    h, res = becker_product(rf([1, 1]), 2, 32)
    assert h.coeffs == [1, -1] + [0] * 30 and res.is_zero()


def test_becker_rejects_bad_constant_term():
    with pytest.raises(ConstantTermNotOne):
        becker_product(rf([2, 1]), 2, 8)


@settings(max_examples=25)
@given(st.lists(st.integers(-3, 3), min_size=1, max_size=4), st.lists(st.integers(-3, 3), min_size=0, max_size=3), st.sampled_from([2, 3]))
def test_becker_identity(num_tail, den_tail, k):
    c0 = rf([1] + num_tail, [1] + den_tail)
    assume(not c0.is_zero())
    h, res = becker_product(c0, k, 64)
    assert res.is_zero()


# the counterexample


def test_counterexample_instances():
    assert verify_counterexample(3, F(2))["status"] == "pass"
    assert verify_counterexample(4, F(3))["status"] == "pass"
    with pytest.raises(ConstraintViolated):
        verify_counterexample(3, F(1))
