"""Normal ordering of degenerate powers of the boson number operator.

Exact degenerate Stirling numbers and Bell polynomials, a normal-ordering
engine for ``[a, a^dagger] = 1``, and a truncated Fock-space oracle.
"""

from .boson import NormalForm, nf_apply_number_state, nf_degenerate_power, nf_mul, verify_normal_ordering_theorem
from .combinatorics import (
    BellPoly,
    StirlingTable,
    bell_poly,
    bell_recurrence_step,
    degenerate_exp,
    euler_operator_degenerate,
    falling_factorial,
    generating_function_check,
    stirling_column_series,
    stirling_degenerate,
    verify_defining_identity,
)
from .exact import LAMBDA, X, MultiPoly, Series, poly_eval, series_derivative, series_exp, series_mul
from .parser import ParseError, eval_to_normal_form, normal_order, parse, render

__version__ = "0.1.0"
