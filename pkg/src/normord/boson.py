"""Normal-ordered single-mode boson operators.

A :class:`NormalForm` is a finite sum ``sum c_ij (a^dagger)^i a^j`` with
coefficients in the exact polynomial ring of :mod:`normord.exact`.  Products
are reduced with the closed-form swap

    a^j (a^dagger)^m = sum_s s! C(j, s) C(m, s) (a^dagger)^(m-s) a^(j-s)

which follows from ``[a, a^dagger] = 1``.
"""

from __future__ import annotations

from math import comb, factorial
from typing import Dict, Iterator, Mapping, Tuple

from .combinatorics import StirlingTable
from .exact import LAMBDA, ONE, ZERO, MultiPoly

Word = Tuple[int, int]


class NormalForm:
    """Canonical normal-ordered operator; keys are ``(i, j)`` for ``(a^dagger)^i a^j``."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Word, object] | None = None):
        clean: Dict[Word, MultiPoly] = {}
        for (i, j), c in (terms or {}).items():
            if i < 0 or j < 0:
                raise ValueError("word exponents must be nonnegative")
            c = MultiPoly.coerce(c)
            if c:
                clean[(int(i), int(j))] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: Dict[Word, MultiPoly]) -> "NormalForm":
        nf = cls.__new__(cls)
        nf._terms = terms
        nf._hash = None
        return nf

    @classmethod
    def identity(cls) -> "NormalForm":
        return cls._raw({(0, 0): ONE})

    @classmethod
    def scalar(cls, c) -> "NormalForm":
        return cls({(0, 0): c})

    @classmethod
    def annihilator(cls) -> "NormalForm":
        return cls._raw({(0, 1): ONE})

    @classmethod
    def creator(cls) -> "NormalForm":
        return cls._raw({(1, 0): ONE})

    @classmethod
    def number(cls) -> "NormalForm":
        return cls._raw({(1, 1): ONE})

    @classmethod
    def coerce(cls, value) -> "NormalForm":
        if isinstance(value, NormalForm):
            return value
        return cls.scalar(value)

    @property
    def terms(self) -> Dict[Word, MultiPoly]:
        return dict(self._terms)

    def items(self) -> Iterator[Tuple[Word, MultiPoly]]:
        return iter(sorted(self._terms.items()))

    def coeff(self, i: int, j: int) -> MultiPoly:
        return self._terms.get((i, j), ZERO)

    def is_diagonal(self) -> bool:
        return all(i == j for i, j in self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, NormalForm):
            return self._terms == other._terms
        try:
            return self._terms == NormalForm.coerce(other)._terms
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __add__(self, other) -> "NormalForm":
        try:
            other = NormalForm.coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for w, c in other._terms.items():
            s = out.get(w, ZERO) + c
            if s:
                out[w] = s
            else:
                out.pop(w, None)
        return NormalForm._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "NormalForm":
        return NormalForm._raw({w: -c for w, c in self._terms.items()})

    def __sub__(self, other) -> "NormalForm":
        try:
            other = NormalForm.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "NormalForm":
        return NormalForm.coerce(other) - self

    def __mul__(self, other) -> "NormalForm":
        if isinstance(other, NormalForm):
            return nf_mul(self, other)
        try:
            c = MultiPoly.coerce(other)
        except TypeError:
            return NotImplemented
        return NormalForm({w: v * c for w, v in self._terms.items()})

    def __rmul__(self, other) -> "NormalForm":
        # scalars commute with every word
        return self.__mul__(other)

    def __pow__(self, n: int) -> "NormalForm":
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers are supported")
        result = NormalForm.identity()
        base = self
        while n:
            if n & 1:
                result = nf_mul(result, base)
            n >>= 1
            if n:
                base = nf_mul(base, base)
        return result

    def map_coeffs(self, fn) -> "NormalForm":
        return NormalForm({w: fn(c) for w, c in self._terms.items()})

    def specialize(self, assignments: Mapping[str, object]) -> "NormalForm":
        return self.map_coeffs(lambda c: MultiPoly.coerce(c.evaluate(assignments)))

    # -- rendering ----------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "terms": [
                {"i": i, "j": j, "coeff": c.to_json()} for (i, j), c in self.items()
            ]
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "NormalForm":
        return cls({(t["i"], t["j"]): MultiPoly.from_json(t["coeff"]) for t in data["terms"]})

    def render(self) -> str:
        """Plain text with the highest words first, e.g. ``ad^2 a^2 + (1 - L) ad a``."""
        return _render_terms(
            sorted(self._terms.items(), reverse=True),
            word_fn=lambda i, j: " ".join(_word_parts(i, j)),
            poly_fn=lambda c: c.render(),
            joiner=" ",
        )

    def to_expr(self) -> str:
        """Render in the input grammar so that the text parses back to this operator."""
        for c in self._terms.values():
            if c.degree("x") > 0:
                raise ValueError("the expression grammar has no indeterminate x")
        return _render_terms(
            sorted(self._terms.items(), reverse=True),
            word_fn=lambda i, j: "*".join(_word_parts(i, j)),
            poly_fn=lambda c: c.render(lam="lambda"),
            joiner="*",
        )

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"NormalForm({self.render()!r})"


def _word_parts(i: int, j: int):
    parts = []
    for sym, e in (("ad", i), ("a", j)):
        if e == 1:
            parts.append(sym)
        elif e > 1:
            parts.append(f"{sym}^{e}")
    return parts


def _render_terms(items, word_fn, poly_fn, joiner) -> str:
    if not items:
        return "0"
    pieces = []
    for (i, j), c in items:
        word = word_fn(i, j)
        negative = False
        if len(c) == 1:
            (_, lead), = c.items()
            if lead < 0:
                negative = True
                c = -c
            coeff = poly_fn(c)
        else:
            coeff = poly_fn(c)
            if word or len(items) > 1:
                coeff = f"({coeff})"
        if not word:
            body = coeff
        elif c == 1:
            body = word
        else:
            body = f"{coeff}{joiner}{word}"
        pieces.append((negative, body))
    neg, body = pieces[0]
    text = ("-" if neg else "") + body
    for neg, body in pieces[1:]:
        text += (" - " if neg else " + ") + body
    return text


def nf_mul(f: NormalForm, g: NormalForm) -> NormalForm:
    """Normal form of the operator product ``f g``."""
    out: Dict[Word, MultiPoly] = {}
    for (i, j), c1 in f._terms.items():
        for (m, n), c2 in g._terms.items():
            c = c1 * c2
            for s in range(min(j, m) + 1):
                w = (i + m - s, j + n - s)
                weight = factorial(s) * comb(j, s) * comb(m, s)
                out[w] = out.get(w, ZERO) + c * weight
    return NormalForm._raw({w: c for w, c in out.items() if c})


def nf_degenerate_power(f: NormalForm, k: int, step=LAMBDA) -> NormalForm:
    """Normal form of ``f (f - step) ... (f - (k-1) step)``."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    step = MultiPoly.coerce(step)
    result = NormalForm.identity()
    for i in range(k):
        result = nf_mul(result, f - NormalForm.scalar(step * i))
    return result


def verify_normal_ordering_theorem(k: int, table: StirlingTable) -> bool:
    """Compare the rewritten ``(a^dagger a)_{k,lambda}`` against row k of the table."""
    if k > table.max_n:
        raise IndexError(f"k={k} exceeds table max_n={table.max_n}")
    nf = nf_degenerate_power(NormalForm.number(), k, LAMBDA)
    expected = NormalForm({(l, l): table[k, l] for l in range(k + 1)})
    return nf == expected


def nf_apply_number_state(f: NormalForm, m: int) -> MultiPoly:
    """Eigenvalue of a diagonal normal form on the number state ``|m>``.

    Uses ``(a^dagger)^l a^l |m> = m (m-1) ... (m-l+1) |m>``.
    """
    if m < 0:
        raise ValueError("occupation number must be nonnegative")
    if not f.is_diagonal():
        raise ValueError("number states are eigenvectors only of diagonal normal forms")
    out = ZERO
    for (l, _), c in f._terms.items():
        falling = 1
        for r in range(l):
            falling *= m - r
        if falling:
            out = out + c * falling
    return out


A = NormalForm.annihilator()
AD = NormalForm.creator()
N = NormalForm.number()
IDENTITY = NormalForm.identity()

__all__ = [
    "A",
    "AD",
    "IDENTITY",
    "N",
    "NormalForm",
    "nf_apply_number_state",
    "nf_degenerate_power",
    "nf_mul",
    "verify_normal_ordering_theorem",
]
