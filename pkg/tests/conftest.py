from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from mahlerlab.field import Cyclotomic
from mahlerlab.poly import Poly, RatFun

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
)
settings.load_profile("default")

small_ints = st.integers(-6, 6)
rationals = st.builds(Fraction, st.integers(-9, 9), st.integers(1, 4))
nonzero_rationals = rationals.filter(lambda q: q != 0)


def polys(max_deg=4, coeffs=rationals):
    return st.lists(coeffs, min_size=1, max_size=max_deg + 1).map(Poly)


nonzero_polys = polys().filter(lambda p: not p.is_zero())


@st.composite
def ratfuns(draw, max_deg=3):
    num = draw(polys(max_deg))
    den = draw(polys(max_deg).filter(lambda p: not p.is_zero()))
    return RatFun(num, den)


nonzero_ratfuns = ratfuns().filter(lambda c: not c.is_zero())


@st.composite
def cyclo_elems(draw, N=5):
    K = Cyclotomic(N)
    n = len(K.coords(K.one))
    return K.from_coords(draw(st.lists(rationals, min_size=n, max_size=n)))


def lin(root):
    """z - root."""
    return Poly.linear(root)


@pytest.fixture
def z():
    return Poly([0, 1])


@pytest.fixture
def example_eq():
    """The order-two example with k=3 and alpha=2."""
    from mahlerlab.series import counterexample_coefficients
    from mahlerlab.operators import MahlerEquation

    return MahlerEquation(3, list(counterexample_coefficients(3, Fraction(2))))


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
