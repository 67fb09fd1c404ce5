"""Named verification suites; each yields one report dict per check.

Report schema: ``{"check": str, "params": dict, "pass": bool, "max_error": float | None}``.
Exact symbolic checks report ``max_error = None``.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Callable, Dict, Iterator, List

from .boson import NormalForm, nf_degenerate_power, verify_normal_ordering_theorem
from .combinatorics import (
    bell_poly,
    bell_recurrence_step,
    euler_operator_eigen,
    euler_operator_stirling,
    generating_function_check,
    stirling_classical,
    stirling_column_series,
    stirling_degenerate,
    verify_defining_identity,
)
from .exact import LAMBDA, MultiPoly
from .fock import WORD_LETTERS, dobinski_eval, oracle_error, word_length

Report = Dict[str, object]

DOBINSKI_LAMBDAS = (Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(1), Fraction(-1, 2))
DOBINSKI_XS = (Fraction(1, 2), Fraction(1), Fraction(2))


def report(check: str, params: dict, passed: bool, max_error=None) -> Report:
    return {"check": check, "params": params, "pass": bool(passed), "max_error": max_error}


def defining_identity(max_n: int = 12, **_) -> Iterator[Report]:
    table = stirling_degenerate(max_n)
    for n in range(max_n + 1):
        yield report("defining-identity", {"n": n}, verify_defining_identity(table, n))


def column_series(max_k: int = 8, order: int = 15, **_) -> Iterator[Report]:
    table = stirling_degenerate(order)
    for k in range(max_k + 1):
        series = stirling_column_series(k, order)
        ok = all(series[n] == table[n, k] for n in range(order + 1))
        yield report("column-series", {"k": k, "order": order}, ok)


def normal_ordering(max_k: int = 12, **_) -> Iterator[Report]:
    table = stirling_degenerate(max_k)
    classical = stirling_classical(max_k)
    for k in range(max_k + 1):
        ok = verify_normal_ordering_theorem(k, table)
        at_zero = nf_degenerate_power(NormalForm.number(), k, LAMBDA).specialize({"lambda": 0})
        ok = ok and at_zero == NormalForm({(l, l): classical[k][l] for l in range(k + 1)})
        yield report("normal-ordering", {"k": k}, ok)


def random_word(rng: random.Random, max_len: int = 6) -> List[str]:
    """Random word whose ladder length (``N-lambda`` counts twice) is between 1 and ``max_len``."""
    target = rng.randint(1, max_len)
    word: List[str] = []
    while word_length(word) < target:
        letter = rng.choice(WORD_LETTERS)
        if word_length(word + [letter]) > target:
            letter = rng.choice(("a", "ad"))
        word.append(letter)
    return word


def fock_oracle(words: int = 200, seed: int = 7, cutoff: int = 40, atol: float = 1e-10, **_) -> Iterator[Report]:
    rng = random.Random(seed)
    for index in range(words):
        word = random_word(rng)
        for lam in (Fraction(0), Fraction(1, 2)):
            err = oracle_error(word, cutoff, lam)
            params = {"index": index, "word": "*".join(word), "lambda": str(lam), "cutoff": cutoff}
            yield report("fock-oracle", params, err <= atol, err)


def generating_function(order: int = 8, lam=None, **_) -> Iterator[Report]:
    exp_ok, ode_ok = generating_function_check(lam, order)
    label = "symbolic" if lam is None else str(lam)
    yield report("generating-function", {"part": "exp", "order": order, "lambda": label}, exp_ok)
    yield report("generating-function", {"part": "ode", "order": order, "lambda": label}, ode_ok)


def bell_recurrence(max_k: int = 10, **_) -> Iterator[Report]:
    table = stirling_degenerate(max_k + 1)
    bells = [bell_poly(n, table).poly for n in range(max_k + 2)]
    for k in range(max_k + 1):
        ok = bell_recurrence_step(bells[: k + 1]) == bells[k + 1]
        yield report("bell-recurrence", {"k": k}, ok)


def dobinski_grid(max_k: int = 8, tol: float = 1e-10, **_) -> Iterator[Report]:
    for k in range(1, max_k + 1):
        bell = bell_poly(k).poly
        for lam in DOBINSKI_LAMBDAS:
            for x in DOBINSKI_XS:
                exact = float(bell.evaluate({"lambda": lam, "x": x}))
                res = dobinski_eval(k, float(lam), float(x), tol)
                err = max(abs(res.value - exact), abs(res.shifted_value - exact))
                ok = err < 5 * tol and abs(res.value - res.shifted_value) <= 2 * tol
                params = {"k": k, "lambda": str(lam), "x": str(x), "tol": tol, "terms": res.terms}
                yield report("dobinski-grid", params, ok, err)


def random_x_poly(rng: random.Random, max_degree: int = 6) -> MultiPoly:
    degree = rng.randint(0, max_degree)
    return MultiPoly({(0, d): Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for d in range(degree + 1)})


def euler_operator(max_n: int = 8, seed: int = 7, **_) -> Iterator[Report]:
    rng = random.Random(seed)
    table = stirling_degenerate(max_n)
    for n in range(1, max_n + 1):
        p = random_x_poly(rng)
        ok = euler_operator_eigen(p, n) == euler_operator_stirling(p, n, table)
        yield report("euler-operator", {"n": n, "p": p.render()}, ok)


SUITES: Dict[str, Callable[..., Iterator[Report]]] = {
    "defining-identity": defining_identity,
    "column-series": column_series,
    "normal-ordering": normal_ordering,
    "fock-oracle": fock_oracle,
    "generating-function": generating_function,
    "bell-recurrence": bell_recurrence,
    "dobinski-grid": dobinski_grid,
    "euler-operator": euler_operator,
}


def run_suite(name: str, **params) -> List[Report]:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}")
    return list(SUITES[name](**{k: v for k, v in params.items() if v is not None}))


__all__ = ["SUITES", "run_suite", "report"]
