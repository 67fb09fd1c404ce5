"""Truncated Fock-space oracle in double precision.

Matrices are plain complex numpy arrays of shape ``(D, D)`` with
``A[m-1, m] = sqrt(m)``.  Truncation corrupts products near the cutoff: a
product of ``L`` ladder matrices is exact only on indices ``< D - L``, and
every comparison here is restricted to that block.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple

import numpy as np

from .boson import NormalForm, nf_degenerate_power, nf_mul
from .exact import LAMBDA

DEFAULT_TOL = 1e-12


class TruncationError(ArithmeticError):
    """The cutoff is too small for the requested accuracy."""


class ConvergenceError(ArithmeticError):
    """A series did not reach its tail-bound target within the step cap."""


def build_operators(D: int) -> Tuple[np.ndarray, np.ndarray]:
    """Annihilation and creation matrices at cutoff ``D``."""
    if D < 1:
        raise ValueError("cutoff must be at least 1")
    a = np.diag(np.sqrt(np.arange(1, D, dtype=float)), k=1).astype(complex)
    return a, a.conj().T.copy()


def _exact_lambda(lam) -> Fraction:
    return lam if isinstance(lam, Fraction) else Fraction(lam)


def _ladder_element_squared(i: int, j: int, m: int) -> int:
    """Square of <m-j+i| (A^dagger)^i A^j |m>, an integer."""
    low = m - j
    return (math.factorial(m) // math.factorial(low)) * (math.factorial(low + i) // math.factorial(low))


def matrix_of_normal_form(f: NormalForm, lam, D: int) -> np.ndarray:
    """Dense matrix of ``sum c_ij(lam) (A^dagger)^i A^j`` at cutoff ``D``.

    Entries come from closed-form matrix elements.  Perfect-square elements
    (all of them on the diagonal) are summed exactly and rounded once, so
    large diagonal eigenvalues keep full double precision.
    """
    if D < 1:
        raise ValueError("cutoff must be positive")
    lam = _exact_lambda(lam)
    exact = {}
    inexact = {}
    for (i, j), c in f.items():
        if c.degree("x") > 0:
            raise ValueError("normal form coefficients must not contain x")
        value = c.evaluate({"lambda": lam})
        for m in range(j, min(D, D + j - i)):
            key = (m - j + i, m)
            sq = _ladder_element_squared(i, j, m)
            root = math.isqrt(sq)
            if root * root == sq:
                exact[key] = exact.get(key, 0) + value * root
            else:
                inexact.setdefault(key, []).append(float(value) * math.sqrt(sq))
    out = np.zeros((D, D), dtype=complex)
    for key in exact.keys() | inexact.keys():
        out[key] = math.fsum([float(exact.get(key, 0))] + inexact.get(key, []))
    return out


# -- word oracle ---------------------------------------------------------------

# "N-lambda" is the shifted number operator a^dagger a - lambda; it spans two ladder steps.
WORD_LETTERS = ("a", "ad", "N-lambda")


def word_length(word: Sequence[str]) -> int:
    return sum(2 if g == "N-lambda" else 1 for g in word)


def word_matrix(word: Sequence[str], lam, D: int) -> np.ndarray:
    """Raw product of truncated generator matrices, left to right."""
    a, ad = build_operators(D)
    lam = float(lam)
    mats = {"a": a, "ad": ad, "N-lambda": ad @ a - lam * np.eye(D)}
    out = np.eye(D, dtype=complex)
    for g in word:
        out = out @ mats[g]
    return out


def word_normal_form(word: Sequence[str]) -> NormalForm:
    """Symbolic normal form of the same product (lambda left symbolic)."""
    nfs = {
        "a": NormalForm.annihilator(),
        "ad": NormalForm.creator(),
        "N-lambda": NormalForm.number() - NormalForm.scalar(LAMBDA),
    }
    out = NormalForm.identity()
    for g in word:
        if g not in nfs:
            raise ValueError(f"unknown generator {g!r}")
        out = nf_mul(out, nfs[g])
    return out


def oracle_error(word: Sequence[str], D: int, lam=0) -> float:
    """Largest absolute entry difference on the leakage-free block."""
    L = word_length(word)
    if D <= L:
        raise ValueError(f"cutoff {D} leaves no leakage-free block for a product of length {L}")
    raw = word_matrix(word, lam, D)
    nf = matrix_of_normal_form(word_normal_form(word), lam, D)
    block = D - L
    return float(np.max(np.abs(raw[:block, :block] - nf[:block, :block])))


def oracle_check(word: Sequence[str], D: int, lam=0, atol: float = 1e-10) -> bool:
    return oracle_error(word, D, lam) <= atol


# -- coherent states -----------------------------------------------------------


def _poisson_tail(x: float, D: int) -> float:
    """``exp(-x) * sum_{n >= D} x^n / n!`` summed directly (no cancellation)."""
    if x == 0.0:
        return 0.0 if D >= 1 else 1.0
    total = 0.0
    n = D
    log_x = math.log(x)
    while True:
        term = math.exp(-x + n * log_x - math.lgamma(n + 1))
        total += term
        if n > x and term < 1e-30:
            return total
        n += 1


def coherent_cutoff(z: complex, tol: float = DEFAULT_TOL) -> int:
    """Smallest cutoff whose norm deficit is below ``tol``."""
    x = abs(z) ** 2
    D = 1
    while _poisson_tail(x, D) >= tol:
        D += 1
    return D


def norm_deficit(z: complex, D: int) -> float:
    return _poisson_tail(abs(z) ** 2, D)


def coherent_state(z: complex, D: int | None = None, tol: float = DEFAULT_TOL, strict: bool = True) -> np.ndarray:
    """Amplitudes ``exp(-|z|^2/2) z^n / sqrt(n!)`` for ``n < D`` (phase fixed to 1).

    With ``D=None`` the smallest cutoff meeting ``tol`` is used.  An explicit
    cutoff that misses ``tol`` raises :class:`TruncationError`, or only warns
    when ``strict`` is false.
    """
    z = complex(z)
    if D is None:
        D = coherent_cutoff(z, tol)
    if D < 1:
        raise ValueError("cutoff must be at least 1")
    deficit = norm_deficit(z, D)
    if deficit >= tol:
        msg = f"norm deficit {deficit:.3g} at cutoff {D} exceeds {tol:.3g}"
        if strict:
            raise TruncationError(msg)
        warnings.warn(msg, RuntimeWarning, stacklevel=2)
    amps = np.empty(D, dtype=complex)
    amps[0] = math.exp(-abs(z) ** 2 / 2)
    for n in range(1, D):
        amps[n] = amps[n - 1] * z / math.sqrt(n)
    return amps


def number_state(m: int, D: int) -> np.ndarray:
    if not 0 <= m < D:
        raise ValueError(f"|{m}> does not fit below cutoff {D}")
    v = np.zeros(D, dtype=complex)
    v[m] = 1.0
    return v


def coherent_overlap(x: complex, y: complex) -> complex:
    """Closed form ``<x|y> = exp(-(|x|^2 + |y|^2)/2 + conj(x) y)``."""
    x, y = complex(x), complex(y)
    return complex(np.exp(-0.5 * (abs(x) ** 2 + abs(y) ** 2) + x.conjugate() * y))


def coherent_overlap_truncated(x: complex, y: complex, D: int | None = None) -> complex:
    if D is None:
        D = max(coherent_cutoff(x), coherent_cutoff(y))
    return complex(np.vdot(coherent_state(x, D), coherent_state(y, D)))


# -- degenerate moments and the Dobinski series --------------------------------


def _power_over_factorial(x: float, n: int) -> float:
    if x == 0.0:
        return 1.0 if n == 0 else 0.0
    return math.exp(n * math.log(x) - math.lgamma(n + 1))


def falling_value(n: float, k: int, step: float) -> float:
    out = 1.0
    for i in range(k):
        out *= n - i * step
    return out


def _ratio_bound(n: int, k: int, lam: float, x: float) -> float | None:
    """Bound on ``|T_{j+1} / T_j|`` valid for every ``j >= n``, or None if not yet available.

    ``T_j = x^j (j)_{k,lam} / j!``.  Once every factor ``j - i*lam`` is
    positive, ``T_{j+1}/T_j = x/(j+1) * prod_i (1 + 1/(j - i*lam))`` and each
    factor is at most ``1 + 1/m`` with ``m = j - (k-1) max(lam, 0)``.
    """
    m = n - (k - 1) * max(lam, 0.0)
    if n < 1 or m <= 0:
        return None
    return x / (n + 1) * (1.0 + 1.0 / m) ** k


@dataclass(frozen=True)
class DobinskiResult:
    value: float  # exp(-x) sum_{n>=0} x^n (n)_{k,lam} / n!
    shifted_value: float  # exp(-x) sum_{n>=1} x^n (n-lam)_{k-1,lam} / (n-1)!
    terms: int  # number of indices n summed (0..terms-1)
    tail_bound: float


def dobinski_eval(k: int, lam: float, x: float, tol: float = 1e-10, max_terms: int = 100_000) -> DobinskiResult:
    """Sum the Dobinski-type series for the degenerate Bell polynomial at ``x``.

    Summation stops at the first index ``n`` where the term ratio bound
    ``rho`` is at most 1/2 and ``2 * rho * |T_n| * exp(-x) < tol``; that
    product bounds the remaining tail.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if x < 0:
        raise ValueError("x must be nonnegative")
    lam = float(lam)
    x = float(x)
    scale = math.exp(-x)
    plain, shifted = [], []
    for n in range(max_terms):
        power_over_fact = _power_over_factorial(x, n)
        term = power_over_fact * falling_value(n, k, lam)
        plain.append(term)
        if n >= 1:
            # x^n / (n-1)! = n * x^n / n!
            shifted.append(power_over_fact * n * falling_value(n - lam, k - 1, lam))
        rho = _ratio_bound(n, k, lam, x)
        if rho is not None and rho <= 0.5:
            tail = 2.0 * rho * abs(term) * scale
            if tail < tol:
                return DobinskiResult(
                    value=scale * math.fsum(plain),
                    shifted_value=scale * math.fsum(shifted),
                    terms=n + 1,
                    tail_bound=tail,
                )
    raise ConvergenceError(f"no tail bound below {tol} within {max_terms} terms")


@dataclass(frozen=True)
class ExpectationResult:
    matrix_value: float  # <z| M |z> with M the matrix of the normal form
    series_value: float  # exp(-|z|^2) sum_{n<D} |z|^(2n) (n)_{k,lam} / n!
    cutoff: int


def expectation_degenerate_power(z: complex, k: int, lam, D: int | None = None, tol: float = DEFAULT_TOL) -> ExpectationResult:
    """``<z|(a^dagger a)_{k,lam}|z>`` computed from the matrix and from the number-state sum."""
    z = complex(z)
    x = abs(z) ** 2
    lam_f = float(lam)
    needed = coherent_cutoff(z, tol)
    if k >= 1:
        needed = max(needed, dobinski_eval(k, lam_f, x, tol).terms)
    if D is None:
        D = needed
    elif D < needed:
        raise TruncationError(f"cutoff {D} is below the {needed} required for tolerance {tol}")
    nf = nf_degenerate_power(NormalForm.number(), k, LAMBDA)
    M = matrix_of_normal_form(nf, lam, D)
    v = coherent_state(z, D, tol)
    matrix_value = float(np.vdot(v, M @ v).real)
    terms = [_power_over_factorial(x, n) * falling_value(n, k, lam_f) for n in range(D)]
    return ExpectationResult(matrix_value, math.exp(-x) * math.fsum(terms), D)
