"""Recursive-descent parser for single-mode boson expressions.

Grammar (whitespace is ignored between tokens)::

    expr     := [ "-" ] term { ("+" | "-") term }
    term     := factor { "*" factor }
    factor   := primary [ "^" nat | "_{" nat "," "lambda" "}" | "_" nat ]
    primary  := "a" | "ad" | "N" | "lambda" | rational | "(" expr ")"
    rational := int [ "/" nat ]

``N`` is shorthand for ``ad*a``.  ``(X)_{k,lambda}`` is the degenerate
falling power ``X (X - lambda) ... (X - (k-1) lambda)`` and ``(X)_k`` the
ordinary one.  Implicit multiplication is not accepted.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple, Union

from .boson import NormalForm, nf_degenerate_power, nf_mul
from .exact import LAMBDA, ONE

MAX_EXPONENT = 2 ** 16
MAX_DEPTH = 100


# -- AST ---------------------------------------------------------------------


@dataclass(frozen=True)
class Generator:
    name: str  # "a" or "ad"


@dataclass(frozen=True)
class Scalar:
    value: Fraction


@dataclass(frozen=True)
class Lambda:
    pass


@dataclass(frozen=True)
class Add:
    terms: Tuple["Expr", ...]


@dataclass(frozen=True)
class Mul:
    factors: Tuple["Expr", ...]


@dataclass(frozen=True)
class Neg:
    child: "Expr"


@dataclass(frozen=True)
class Pow:
    child: "Expr"
    exponent: int


@dataclass(frozen=True)
class DegFallingPow:
    child: "Expr"
    k: int


@dataclass(frozen=True)
class IntFallingPow:
    child: "Expr"
    k: int


Expr = Union[Generator, Scalar, Lambda, Add, Mul, Neg, Pow, DegFallingPow, IntFallingPow]


def number_operator() -> Mul:
    return Mul((Generator("ad"), Generator("a")))


# -- errors ------------------------------------------------------------------


class ParseError(ValueError):
    """Syntax error at a byte offset of the input."""

    def __init__(self, offset: int, expected, found: str, message: str = ""):
        self.offset = offset
        self.expected = sorted(set(expected))
        self.found = found
        detail = message or f"expected one of {', '.join(self.expected)}"
        super().__init__(f"offset {offset}: {detail}; found {found}")

    def to_dict(self) -> dict:
        return {"offset": self.offset, "expected": self.expected, "found": self.found}


class ExponentOverflowError(ParseError):
    pass


# -- lexer -------------------------------------------------------------------

_PUNCT = set("+-*/^_{},()")
_WORDS = {"a", "ad", "N", "lambda"}


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "eof", a word, or a punctuation character
    text: str
    offset: int


def tokenize(text: str) -> List[Token]:
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        ch = text[pos]
        if ch in " \t\r\n":
            pos += 1
        elif ch in _PUNCT:
            tokens.append(Token(ch, ch, pos))
            pos += 1
        elif "0" <= ch <= "9":
            end = pos
            while end < n and "0" <= text[end] <= "9":
                end += 1
            tokens.append(Token("int", text[pos:end], pos))
            pos = end
        elif ch.isascii() and ch.isalpha():
            end = pos
            while end < n and text[end].isascii() and text[end].isalpha():
                end += 1
            word = text[pos:end]
            if word not in _WORDS:
                raise ParseError(_byte_offset(text, pos), _WORDS, repr(word), "unknown identifier")
            tokens.append(Token(word, word, pos))
            pos = end
        else:
            raise ParseError(
                _byte_offset(text, pos), ["token"], repr(ch), "unexpected character"
            )
    tokens.append(Token("eof", "", n))
    return tokens


def _byte_offset(text: str, pos: int) -> int:
    return len(text[:pos].encode("utf-8", "surrogatepass"))


# -- parser ------------------------------------------------------------------

_PRIMARY_START = ["a", "ad", "N", "lambda", "int", "("]


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.pos = 0
        self.depth = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def fail(self, expected, message: str = "") -> ParseError:
        tok = self.tok
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        return ParseError(_byte_offset(self.text, tok.offset), expected, found, message)

    def expect(self, kind: str) -> Token:
        if self.tok.kind != kind:
            raise self.fail([kind])
        tok = self.tok
        self.pos += 1
        return tok

    def accept(self, kind: str) -> Optional[Token]:
        if self.tok.kind == kind:
            tok = self.tok
            self.pos += 1
            return tok
        return None

    def parse(self) -> Expr:
        node = self.expr()
        if self.tok.kind != "eof":
            raise self.fail(["+", "-", "*", "eof"])
        return node

    def expr(self) -> Expr:
        self.depth += 1
        if self.depth > MAX_DEPTH:
            raise self.fail(_PRIMARY_START, "expression nested too deeply")
        leading = self.accept("-")
        first = self.term()
        terms = [Neg(first) if leading else first]
        while self.tok.kind in ("+", "-"):
            op = self.tok.kind
            self.pos += 1
            t = self.term()
            terms.append(Neg(t) if op == "-" else t)
        self.depth -= 1
        return terms[0] if len(terms) == 1 else Add(tuple(terms))

    def term(self) -> Expr:
        factors = [self.factor()]
        while self.accept("*"):
            factors.append(self.factor())
        return factors[0] if len(factors) == 1 else Mul(tuple(factors))

    def factor(self) -> Expr:
        base = self.primary()
        if self.accept("^"):
            return Pow(base, self.nat())
        if self.accept("_"):
            if self.accept("{"):
                k = self.nat()
                self.expect(",")
                self.expect("lambda")
                self.expect("}")
                return DegFallingPow(base, k)
            if self.tok.kind == "int":
                return IntFallingPow(base, self.nat())
            raise self.fail(["{", "int"])
        return base

    def nat(self) -> int:
        tok = self.tok
        if tok.kind != "int":
            raise self.fail(["int"])
        offset = _byte_offset(self.text, tok.offset)
        if len(tok.text.lstrip("0")) > 6 or int(tok.text) > MAX_EXPONENT:
            raise ExponentOverflowError(
                offset, ["int"], repr(tok.text), f"exponent exceeds {MAX_EXPONENT}"
            )
        self.pos += 1
        return int(tok.text)

    def integer(self) -> int:
        tok = self.expect("int")
        try:
            return int(tok.text)
        except ValueError:  # interpreter limit on digit count
            raise ParseError(
                _byte_offset(self.text, tok.offset), ["int"], "long literal", "integer literal too long"
            ) from None

    def primary(self) -> Expr:
        kind = self.tok.kind
        if kind in ("a", "ad"):
            self.pos += 1
            return Generator(kind)
        if kind == "N":
            self.pos += 1
            return number_operator()
        if kind == "lambda":
            self.pos += 1
            return Lambda()
        if kind == "int":
            num = self.integer()
            if self.accept("/"):
                if self.tok.kind != "int":
                    raise self.fail(["int"])
                den_tok = self.tok
                den = self.integer()
                if den == 0:
                    self.pos -= 1
                    raise ParseError(
                        _byte_offset(self.text, den_tok.offset), ["int"], "0", "zero denominator"
                    )
                return Scalar(Fraction(num, den))
            return Scalar(Fraction(num))
        if kind == "(":
            self.pos += 1
            node = self.expr()
            self.expect(")")
            return node
        raise self.fail(_PRIMARY_START)


def parse(source: Union[str, bytes]) -> Expr:
    """Parse text (or UTF-8 bytes) into an AST; raises :class:`ParseError`."""
    if isinstance(source, (bytes, bytearray)):
        try:
            source = bytes(source).decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(exc.start, ["token"], "invalid UTF-8", "input is not UTF-8") from None
    return _Parser(source).parse()


# -- rendering ---------------------------------------------------------------


def render(node: Expr) -> str:
    """Text in the input grammar; parsing it gives back the same AST."""
    if isinstance(node, Add):
        first, *rest = node.terms
        out = "-" + _term(first.child) if isinstance(first, Neg) else _term(first)
        for t in rest:
            if isinstance(t, Neg):
                out += " - " + _term(t.child)
            else:
                out += " + " + _term(t)
        return out
    if isinstance(node, Neg):
        return "-" + _term(node.child)
    return _term(node)


def _term(node: Expr) -> str:
    if isinstance(node, (Add, Neg)):
        return f"({render(node)})"
    if isinstance(node, Mul):
        return "*".join(_factor(f) for f in node.factors)
    return _factor(node)


def _factor(node: Expr) -> str:
    if isinstance(node, Pow):
        return f"{_primary(node.child)}^{node.exponent}"
    if isinstance(node, DegFallingPow):
        return f"{_primary(node.child)}_{{{node.k},lambda}}"
    if isinstance(node, IntFallingPow):
        return f"{_primary(node.child)}_{node.k}"
    return _primary(node)


def _primary(node: Expr) -> str:
    if isinstance(node, Generator):
        return node.name
    if isinstance(node, Lambda):
        return "lambda"
    if isinstance(node, Scalar):
        v = node.value
        return str(v) if v >= 0 else f"({v})"
    return f"({render(node)})"


# -- evaluation --------------------------------------------------------------

_GENERATORS = {"a": NormalForm.annihilator, "ad": NormalForm.creator}


def eval_to_normal_form(node: Expr) -> NormalForm:
    """Map an AST to its canonical normal form."""
    if isinstance(node, Generator):
        return _GENERATORS[node.name]()
    if isinstance(node, Scalar):
        return NormalForm.scalar(node.value)
    if isinstance(node, Lambda):
        return NormalForm.scalar(LAMBDA)
    if isinstance(node, Add):
        out = NormalForm()
        for t in node.terms:
            out = out + eval_to_normal_form(t)
        return out
    if isinstance(node, Neg):
        return -eval_to_normal_form(node.child)
    if isinstance(node, Mul):
        out = NormalForm.identity()
        for f in node.factors:
            out = nf_mul(out, eval_to_normal_form(f))
        return out
    if isinstance(node, Pow):
        return eval_to_normal_form(node.child) ** node.exponent
    if isinstance(node, DegFallingPow):
        return nf_degenerate_power(eval_to_normal_form(node.child), node.k, LAMBDA)
    if isinstance(node, IntFallingPow):
        return nf_degenerate_power(eval_to_normal_form(node.child), node.k, ONE)
    raise TypeError(f"not an expression node: {node!r}")


def normal_order(text: str) -> NormalForm:
    return eval_to_normal_form(parse(text))
