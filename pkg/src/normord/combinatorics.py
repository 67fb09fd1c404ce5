"""Degenerate falling factorials, Stirling numbers of the second kind and Bell polynomials.

Everything is exact and symbolic in lambda (and x where relevant).  The
triangular recurrence

    S(n+1, k) = S(n, k-1) + (k - n*lambda) * S(n, k)

is the only constructor of the Stirling table.  The falling-factorial
expansion and the column generating functions are used purely as checks.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import List, Mapping, Optional, Sequence, Tuple

from .exact import LAMBDA, ONE, X, ZERO, MultiPoly, Series, series_derivative, series_exp, series_mul


def falling_factorial(n: int, base, step) -> MultiPoly:
    """``base (base - step) ... (base - (n-1) step)``; 1 when ``n == 0``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    base = MultiPoly.coerce(base)
    step = MultiPoly.coerce(step)
    out = ONE
    for i in range(n):
        out = out * (base - step * i)
    return out


def degenerate_falling(n: int, base) -> MultiPoly:
    """``(base)_{n, lambda}`` with symbolic lambda."""
    return falling_factorial(n, base, LAMBDA)


class StirlingTable:
    """Triangular table of degenerate Stirling numbers ``S[n][k]``, ``0 <= k <= n <= max_n``.

    Entries are polynomials in lambda.  Lookups outside the triangle return 0.
    """

    __slots__ = ("_rows",)

    def __init__(self, rows: Sequence[Sequence[MultiPoly]]):
        rows = tuple(tuple(MultiPoly.coerce(c) for c in row) for row in rows)
        for n, row in enumerate(rows):
            if len(row) != n + 1:
                raise ValueError(f"row {n} has {len(row)} entries, expected {n + 1}")
        self._rows = rows

    @property
    def max_n(self) -> int:
        return len(self._rows) - 1

    def __getitem__(self, index: Tuple[int, int]) -> MultiPoly:
        n, k = index
        if n < 0 or n > self.max_n:
            raise IndexError(f"row {n} is outside the table (max_n={self.max_n})")
        if k < 0 or k > n:
            return ZERO
        return self._rows[n][k]

    def row(self, n: int) -> Tuple[MultiPoly, ...]:
        return self._rows[n]

    @property
    def rows(self) -> Tuple[Tuple[MultiPoly, ...], ...]:
        return self._rows

    def replace(self, n: int, k: int, value) -> "StirlingTable":
        """Copy of the table with one entry overwritten."""
        rows = [list(r) for r in self._rows]
        rows[n][k] = MultiPoly.coerce(value)
        return StirlingTable(rows)

    def specialize(self, lam) -> List[List[Fraction]]:
        return [[c.evaluate({"lambda": lam}) for c in row] for row in self._rows]

    def __eq__(self, other) -> bool:
        if not isinstance(other, StirlingTable):
            return NotImplemented
        return self._rows == other._rows

    def __hash__(self) -> int:
        return hash(self._rows)

    def to_csv(self, lam=None) -> str:
        """CSV dump: one row per n, columns ``k = 0..max_n``, empty above the diagonal."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["n"] + [f"k={k}" for k in range(self.max_n + 1)])
        for n, row in enumerate(self._rows):
            cells = [render_cell(c, lam) for c in row]
            writer.writerow([n] + cells + [""] * (self.max_n - n))
        return buf.getvalue()


def render_cell(c: MultiPoly, lam=None) -> str:
    if lam is None:
        return c.render()
    return str(c.evaluate({"lambda": lam}))


def stirling_degenerate(max_n: int) -> StirlingTable:
    if max_n < 0:
        raise ValueError("max_n must be nonnegative")
    rows = [[ONE]]
    for n in range(max_n):
        prev = rows[-1]
        row = []
        for k in range(n + 2):
            left = prev[k - 1] if k >= 1 else ZERO
            right = prev[k] * (k - n * LAMBDA) if k <= n else ZERO
            row.append(left + right)
        rows.append(row)
    return StirlingTable(rows)


def verify_defining_identity(table: StirlingTable, n: int) -> bool:
    """Check ``(x)_{n,lambda} == sum_k S(n,k) (x)_k`` as a polynomial identity in lambda and x."""
    if n > table.max_n:
        raise IndexError(f"n={n} exceeds table max_n={table.max_n}")
    rhs = ZERO
    for k in range(n + 1):
        s = table[n, k]
        if s:
            rhs = rhs + s * falling_factorial(k, X, 1)
    return rhs == degenerate_falling(n, X)


def degenerate_exp(base, order: int) -> Series:
    """The EGF ``e_lambda^{base}(t)`` whose k-th coefficient is ``(base)_{k,lambda}``."""
    base = MultiPoly.coerce(base)
    coeffs = [ONE]
    for k in range(order):
        coeffs.append(coeffs[-1] * (base - LAMBDA * k))
    return Series(coeffs)


def stirling_column_series(k: int, order: int) -> Series:
    """``(e_lambda(t) - 1)^k / k!`` truncated at ``order``."""
    if order < k:
        raise ValueError("order must be at least k")
    shifted = degenerate_exp(1, order) - 1
    result = Series.constant(1, order)
    for j in range(1, k + 1):
        result = series_mul(result, shifted) * Fraction(1, j)
    return result


@dataclass(frozen=True)
class BellPoly:
    n: int
    poly: MultiPoly

    @property
    def number(self) -> "Fraction | MultiPoly":
        """The degenerate Bell number: the polynomial at x = 1."""
        return self.poly.evaluate({"x": 1})

    def __call__(self, **assignments):
        return self.poly.evaluate(assignments)


def bell_poly(n: int, table: Optional[StirlingTable] = None) -> BellPoly:
    if n < 0:
        raise ValueError("n must be nonnegative")
    if table is None or table.max_n < n:
        table = stirling_degenerate(n)
    poly = ZERO
    for k in range(n + 1):
        s = table[n, k]
        if s:
            poly = poly + s * X ** k
    return BellPoly(n, poly)


def bell_recurrence_step(bells: Sequence[MultiPoly]) -> MultiPoly:
    """Next Bell polynomial from the previous ones.

    With ``k = len(bells) - 1`` this returns
    ``x * sum_l C(k, l) (1 - lambda)_{k-l, lambda} bells[l]``.
    """
    if not bells:
        raise ValueError("need at least the zeroth Bell polynomial")
    k = len(bells) - 1
    acc = ZERO
    for l, phi in enumerate(bells):
        acc = acc + degenerate_falling(k - l, 1 - LAMBDA) * phi * comb(k, l)
    return X * acc


def _require_x_only(p: MultiPoly) -> None:
    if p.degree("lambda") > 0:
        raise ValueError("the Euler operator acts on polynomials in x alone")


def euler_operator_eigen(p, n: int) -> MultiPoly:
    """Apply ``(x d/dx)_{n,lambda}`` using ``x^m -> (m)_{n,lambda} x^m``."""
    p = MultiPoly.coerce(p)
    _require_x_only(p)
    out = ZERO
    for (_, m), c in p.items():
        out = out + degenerate_falling(n, m) * X ** m * c
    return out


def euler_operator_stirling(p, n: int, table: Optional[StirlingTable] = None) -> MultiPoly:
    """Apply ``sum_k S(n,k) x^k (d/dx)^k``; for ``n == 0`` this is the identity."""
    p = MultiPoly.coerce(p)
    _require_x_only(p)
    if n == 0:
        return p
    if table is None or table.max_n < n:
        table = stirling_degenerate(n)
    out = ZERO
    deriv = p
    for k in range(1, n + 1):
        deriv = deriv.derivative_x()
        if not deriv:
            break
        out = out + table[n, k] * X ** k * deriv
    return out


def euler_operator_degenerate(p, n: int) -> MultiPoly:
    """Apply the degenerate Euler operator, evaluated two ways that must agree."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    left = euler_operator_eigen(p, n)
    right = euler_operator_stirling(p, n)
    if left != right:
        raise ArithmeticError(f"Euler operator paths disagree: {left} != {right}")
    return left


def generating_function_check(lam=None, order: int = 8) -> Tuple[bool, bool]:
    """Exact checks of the Bell generating function and its differential equation.

    ``f = exp(x (e_lambda(t) - 1))`` must have the Bell polynomials as EGF
    coefficients, and ``f' = x e_lambda^{1-lambda}(t) f``.  ``lam=None``
    keeps lambda symbolic.  Returns the two outcomes.
    """
    if order < 1:
        raise ValueError("order must be at least 1")

    def pin(s: Series) -> Series:
        return s if lam is None else s.evaluate({"lambda": lam})

    table = stirling_degenerate(order)
    bells = pin(Series([bell_poly(k, table).poly for k in range(order + 1)]))
    f = pin(series_exp((degenerate_exp(1, order) - 1) * X))
    exp_ok = bells == f

    lhs = series_derivative(f)
    rhs = series_mul(pin(degenerate_exp(1 - LAMBDA, order - 1)) * X, f.truncate(order - 1))
    return exp_ok, lhs == rhs


def stirling_classical(max_n: int) -> List[List[int]]:
    """Ordinary Stirling numbers of the second kind from ``S(n+1,k) = S(n,k-1) + k S(n,k)``."""
    rows = [[1]]
    for n in range(max_n):
        prev = rows[-1] + [0]
        rows.append([(prev[k - 1] if k else 0) + k * prev[k] for k in range(n + 2)])
    return rows


def bell_number_value(n: int, lam, x=1) -> Fraction:
    return bell_poly(n).poly.evaluate({"lambda": lam, "x": x})
