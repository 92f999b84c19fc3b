"""Exact algorithms for linear Mahler equations over cyclotomic fields."""
from .calmness import (
    act,
    is_calm,
    is_precalm,
    min_clm,
    polynomialize,
    precalm_witness,
    prepolynomialize,
)
from .field import Cyclotomic, CycloElem
from .operators import (
    MahlerEquation,
    MahlerOperator,
    kernel_orbit,
    op_mul,
    regularity_search,
    special_coefficients,
)
from .parser import parse_equation
from .points import PointClass, orbit_horizon
from .poly import Poly, RatFun
from .series import (
    Truncation,
    becker_product,
    guess_relation,
    kernel_rank_probe,
    solve_series,
    verify_counterexample,
)

__version__ = "0.1.0"
