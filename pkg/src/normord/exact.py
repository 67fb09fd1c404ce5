"""Exact arithmetic: rationals, polynomials in (lambda, x), and truncated EGF series.

Rationals are plain :class:`fractions.Fraction` values.  A :class:`MultiPoly`
is a sparse map from exponent pairs ``(lambda_exp, x_exp)`` to nonzero
rational coefficients.  A :class:`Series` stores the coefficients ``c_k`` of
``sum_k c_k t^k / k!`` up to a truncation order.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from numbers import Rational
from typing import Dict, Iterable, Iterator, Mapping, Tuple, Union

Exponent = Tuple[int, int]
Scalar = Union[int, Fraction]

VARIABLES = ("lambda", "x")
_ALIASES = {"lambda": 0, "L": 0, "lam": 0, "x": 1}


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and rational strings like ``"3/2"``; reject floats."""
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if "." in text or "e" in text.lower():
            raise ValueError(f"decimal literal {value!r} is not an exact rational")
        return Fraction(text)
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


class MultiPoly:
    """Sparse polynomial with rational coefficients in the indeterminates lambda and x.

    Instances are immutable and hashable.  Arithmetic accepts ints and
    Fractions on either side.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Exponent, Scalar] | None = None):
        clean: Dict[Exponent, Fraction] = {}
        for (le, xe), c in (terms or {}).items():
            if le < 0 or xe < 0:
                raise ValueError("exponents must be nonnegative")
            c = as_rational(c)
            if c:
                clean[(int(le), int(xe))] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: Dict[Exponent, Fraction]) -> "MultiPoly":
        # trusted constructor: caller guarantees reduced Fractions and no zeros
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, c: Scalar) -> "MultiPoly":
        return cls({(0, 0): c})

    @classmethod
    def lam(cls) -> "MultiPoly":
        return cls._raw({(1, 0): Fraction(1)})

    @classmethod
    def x(cls) -> "MultiPoly":
        return cls._raw({(0, 1): Fraction(1)})

    @classmethod
    def coerce(cls, value) -> "MultiPoly":
        if isinstance(value, MultiPoly):
            return value
        return cls.const(as_rational(value))

    # -- inspection ---------------------------------------------------------

    @property
    def terms(self) -> Dict[Exponent, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[Tuple[Exponent, Fraction]]:
        return iter(sorted(self._terms.items()))

    def coeff(self, lam_exp: int = 0, x_exp: int = 0) -> Fraction:
        return self._terms.get((lam_exp, x_exp), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(e == (0, 0) for e in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.coeff(0, 0)

    def degree(self, var: str) -> int:
        """Degree in ``var``; the zero polynomial has degree -1."""
        idx = _ALIASES[var]
        return max((e[idx] for e in self._terms), default=-1)

    def __len__(self) -> int:
        return len(self._terms)

    # -- ring operations ----------------------------------------------------

    def __add__(self, other) -> "MultiPoly":
        try:
            other = MultiPoly.coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return MultiPoly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly._raw({e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> "MultiPoly":
        try:
            other = MultiPoly.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "MultiPoly":
        return MultiPoly.coerce(other) - self

    def __mul__(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            out: Dict[Exponent, Fraction] = {}
            for (a1, b1), c1 in self._terms.items():
                for (a2, b2), c2 in other._terms.items():
                    e = (a1 + a2, b1 + b2)
                    out[e] = out.get(e, 0) + c1 * c2
            return MultiPoly._raw({e: c for e, c in out.items() if c})
        try:
            c = as_rational(other)
        except TypeError:
            return NotImplemented
        if not c:
            return MultiPoly()
        return MultiPoly._raw({e: v * c for e, v in self._terms.items()})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "MultiPoly":
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers are supported")
        result = MultiPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, MultiPoly):
            return self._terms == other._terms
        try:
            return self._terms == MultiPoly.coerce(other)._terms
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._terms)

    # -- calculus and evaluation -------------------------------------------

    def derivative_x(self) -> "MultiPoly":
        return MultiPoly._raw(
            {(le, xe - 1): c * xe for (le, xe), c in self._terms.items() if xe}
        )

    def evaluate(self, assignments: Mapping[str, Scalar]) -> "Fraction | MultiPoly":
        """Substitute exact values for some or all indeterminates.

        Returns a Fraction when every indeterminate that occurs is assigned,
        otherwise a MultiPoly in the remaining ones.
        """
        values: Dict[int, Fraction] = {}
        for name, v in assignments.items():
            if name not in _ALIASES:
                raise KeyError(f"unknown indeterminate {name!r}")
            values[_ALIASES[name]] = as_rational(v)
        out: Dict[Exponent, Fraction] = {}
        for (le, xe), c in self._terms.items():
            exps = [le, xe]
            for idx, v in values.items():
                c = c * v ** exps[idx]
                exps[idx] = 0
            e = (exps[0], exps[1])
            out[e] = out.get(e, 0) + c
        result = MultiPoly._raw({e: c for e, c in out.items() if c})
        if result.is_constant():
            return result.coeff(0, 0)
        return result

    # -- rendering ----------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "terms": [
                {"coeff": f"{c.numerator}/{c.denominator}", "lambda": le, "x": xe}
                for (le, xe), c in self.items()
            ]
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "MultiPoly":
        return cls({(t["lambda"], t["x"]): Fraction(t["coeff"]) for t in data["terms"]})

    def render(self, lam: str = "L", x: str = "x") -> str:
        """Ascending-power text such as ``1 - 3*L + 2*L^2``."""
        if not self._terms:
            return "0"
        pieces = []
        for (le, xe), c in self.items():
            mono = []
            for sym, e in ((lam, le), (x, xe)):
                if e == 1:
                    mono.append(sym)
                elif e > 1:
                    mono.append(f"{sym}^{e}")
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = "*".join(mono)
            else:
                body = "*".join([str(mag)] + mono)
            pieces.append((c < 0, body))
        neg, body = pieces[0]
        text = ("-" if neg else "") + body
        for neg, body in pieces[1:]:
            text += (" - " if neg else " + ") + body
        return text

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"MultiPoly({self.render()!r})"


LAMBDA = MultiPoly.lam()
X = MultiPoly.x()
ONE = MultiPoly.const(1)
ZERO = MultiPoly()


def poly_eval(p: MultiPoly, assignments: Mapping[str, Scalar]) -> "Fraction | MultiPoly":
    return p.evaluate(assignments)


class Series:
    """Truncated exponential generating function ``sum_{k<=order} c_k t^k/k!``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable):
        coeffs = tuple(MultiPoly.coerce(c) for c in coeffs)
        if not coeffs:
            raise ValueError("a series needs at least the constant coefficient")
        self.coeffs: Tuple[MultiPoly, ...] = coeffs

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def constant(cls, c, order: int) -> "Series":
        return cls([c] + [ZERO] * order)

    @classmethod
    def monomial(cls, k: int, order: int, c=1) -> "Series":
        """The series ``c * t^k`` (EGF coefficient ``c * k!`` at index k)."""
        coeffs = [ZERO] * (order + 1)
        if k <= order:
            coeffs[k] = MultiPoly.coerce(c) * _factorial(k)
        return cls(coeffs)

    def truncate(self, order: int) -> "Series":
        if order > self.order:
            raise ValueError("cannot extend a truncated series")
        return Series(self.coeffs[: order + 1])

    def __getitem__(self, k: int) -> MultiPoly:
        return self.coeffs[k]

    def __len__(self) -> int:
        return len(self.coeffs)

    def __add__(self, other) -> "Series":
        if not isinstance(other, Series):
            other = Series.constant(other, self.order)
        n = min(self.order, other.order)
        return Series(a + b for a, b in zip(self.coeffs[: n + 1], other.coeffs))

    __radd__ = __add__

    def __neg__(self) -> "Series":
        return Series(-c for c in self.coeffs)

    def __sub__(self, other) -> "Series":
        if not isinstance(other, Series):
            other = Series.constant(other, self.order)
        return self + (-other)

    def __rsub__(self, other) -> "Series":
        return Series.constant(other, self.order) - self

    def __mul__(self, other) -> "Series":
        if isinstance(other, Series):
            return series_mul(self, other)
        return Series(c * other for c in self.coeffs)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Series":
        result = Series.constant(1, self.order)
        for _ in range(n):
            result = series_mul(result, self)
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, Series):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def map(self, fn) -> "Series":
        return Series(fn(c) for c in self.coeffs)

    def evaluate(self, assignments: Mapping[str, Scalar]) -> "Series":
        return self.map(lambda c: MultiPoly.coerce(c.evaluate(assignments)))

    def __repr__(self) -> str:
        return "Series([" + ", ".join(c.render() for c in self.coeffs) + "])"


def _factorial(n: int) -> int:
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


def series_mul(f: Series, g: Series) -> Series:
    """EGF product: ``h_n = sum_k C(n, k) f_k g_{n-k}``, truncated to the smaller order."""
    order = min(f.order, g.order)
    out = []
    for n in range(order + 1):
        acc = ZERO
        for k in range(n + 1):
            fk, gk = f.coeffs[k], g.coeffs[n - k]
            if fk and gk:
                acc = acc + fk * gk * comb(n, k)
        out.append(acc)
    return Series(out)


def series_derivative(f: Series) -> Series:
    if f.order < 1:
        raise ValueError("derivative of an order-0 series carries no information")
    return Series(f.coeffs[1:])


def series_exp(f: Series) -> Series:
    """exp of a series with zero constant term, via ``g' = f' g`` and ``g_0 = 1``."""
    if f.coeffs[0]:
        raise ValueError("series_exp needs a zero constant term")
    g = [ONE]
    for n in range(f.order):
        # g_{n+1} = sum_k C(n, k) f_{k+1} g_{n-k}
        acc = ZERO
        for k in range(n + 1):
            fk = f.coeffs[k + 1]
            if fk:
                acc = acc + fk * g[n - k] * comb(n, k)
        g.append(acc)
    return Series(g)
