import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from normord.boson import (
    A,
    AD,
    IDENTITY,
    N,
    NormalForm,
    nf_apply_number_state,
    nf_degenerate_power,
    nf_mul,
    verify_normal_ordering_theorem,
)
from normord.combinatorics import falling_factorial, stirling_classical, stirling_degenerate
from normord.exact import LAMBDA, MultiPoly


@st.composite
def normal_forms(draw):
    words = draw(
        st.dictionaries(
            st.tuples(st.integers(0, 3), st.integers(0, 3)),
            st.fractions(min_value=-4, max_value=4, max_denominator=3),
            max_size=4,
        )
    )
    return NormalForm(words)


def naive_product(word):
    """Normal-order a word of 'a'/'ad' letters by single commutator swaps."""
    # a sum of words; each word a tuple of letters with integer coefficients
    pending = {tuple(word): 1}
    done = {}
    while pending:
        w, c = pending.popitem()
        for pos in range(len(w) - 1):
            if w[pos] == "a" and w[pos + 1] == "ad":
                swapped = w[:pos] + ("ad", "a") + w[pos + 2:]
                dropped = w[:pos] + w[pos + 2:]
                for nw in (swapped, dropped):
                    pending[nw] = pending.get(nw, 0) + c
                break
        else:
            key = (w.count("ad"), w.count("a"))
            done[key] = done.get(key, 0) + c
    return NormalForm(done)


class TestMul:
    def test_commutator_example(self):
        assert nf_mul(A, AD) == NormalForm({(0, 0): 1, (1, 1): 1})

    def test_already_normal(self):
        assert nf_mul(AD, A) == NormalForm({(1, 1): 1})

    def test_number_squared(self):
        assert nf_mul(N, N) == NormalForm({(1, 1): 1, (2, 2): 1})

    def test_commutator_identity(self):
        assert nf_mul(A, AD) - nf_mul(AD, A) == IDENTITY

    @pytest.mark.parametrize(
        "word",
        [
            ["a", "a", "ad"],
            ["a", "ad", "a"],
            ["a", "ad", "ad"],
            ["a", "a", "ad", "ad"],
            ["a", "a", "a", "ad", "ad", "ad"],
            ["ad", "a", "a", "ad", "a", "ad"],
        ],
    )
    def test_closed_form_matches_single_swaps(self, word):
        letters = {"a": A, "ad": AD}
        out = IDENTITY
        for g in word:
            out = nf_mul(out, letters[g])
        assert out == naive_product(word)

    def test_small_table(self):
        # same targets as a hand-normal-ordered table of three-letter words
        assert A * A * AD == NormalForm({(1, 2): 1, (0, 1): 2})
        assert A * AD * A == NormalForm({(1, 2): 1, (0, 1): 1})
        assert A * AD * AD == NormalForm({(2, 1): 1, (1, 0): 2})
        assert AD * A * AD == NormalForm({(2, 1): 1, (1, 0): 1})

    @settings(max_examples=60, deadline=None)
    @given(normal_forms(), normal_forms(), normal_forms())
    def test_associative_and_distributive(self, f, g, h):
        assert nf_mul(nf_mul(f, g), h) == nf_mul(f, nf_mul(g, h))
        assert nf_mul(f, g + h) == nf_mul(f, g) + nf_mul(f, h)
        assert nf_mul(f + g, h) == nf_mul(f, h) + nf_mul(g, h)

    def test_scalars_commute(self):
        assert LAMBDA * A == A * LAMBDA
        assert (LAMBDA * A) * AD == LAMBDA * (A * AD)


class TestDegeneratePower:
    def test_k2(self):
        assert nf_degenerate_power(N, 2) == NormalForm({(1, 1): 1 - LAMBDA, (2, 2): 1})

    def test_k1(self):
        assert nf_degenerate_power(N, 1) == NormalForm({(1, 1): 1})

    def test_k0(self):
        assert nf_degenerate_power(N, 0) == IDENTITY

    def test_k3_classical(self):
        at_zero = nf_degenerate_power(N, 3).specialize({"lambda": 0})
        assert at_zero == NormalForm({(1, 1): 1, (2, 2): 3, (3, 3): 1})

    def test_step_one(self):
        # (N)_k with unit step is (ad)^k a^k
        for k in range(6):
            assert nf_degenerate_power(N, k, 1) == NormalForm({(k, k): 1})


@pytest.fixture(scope="module")
def table():
    return stirling_degenerate(12)


class TestTheorem:
    @pytest.mark.parametrize("k", range(13))
    def test_matches_table(self, table, k):
        assert verify_normal_ordering_theorem(k, table)

    def test_classical_row(self):
        rows = stirling_classical(12)
        for k in range(13):
            nf = nf_degenerate_power(N, k).specialize({"lambda": 0})
            assert nf == NormalForm({(l, l): rows[k][l] for l in range(k + 1)})

    def test_corrupted_table_fails(self, table):
        assert not verify_normal_ordering_theorem(3, table.replace(3, 2, 3))


class TestNumberStates:
    def test_eigenvalue_example(self):
        assert nf_apply_number_state(nf_degenerate_power(N, 2), 3) == 9 - 3 * LAMBDA

    def test_identity(self):
        for m in range(5):
            assert nf_apply_number_state(IDENTITY, m) == 1

    def test_vacuum(self):
        for k in range(1, 6):
            assert nf_apply_number_state(nf_degenerate_power(N, k), 0) == 0

    def test_off_diagonal_rejected(self):
        with pytest.raises(ValueError):
            nf_apply_number_state(A * AD * A, 2)

    def test_consistency_with_falling_factorial(self):
        for k in range(11):
            nf = nf_degenerate_power(N, k)
            for m in range(11):
                assert nf_apply_number_state(nf, m) == falling_factorial(k, m, LAMBDA)


class TestDerivativeIdentity:
    """Order-by-order form of N e^{N-lambda}(t) = a^dagger e^{N+1-lambda}(t) a."""

    @pytest.mark.parametrize("k", range(7))
    def test_coefficient(self, k):
        shifted = nf_degenerate_power(N - LAMBDA, k)
        lhs = nf_mul(N, shifted)
        assert lhs == nf_mul(shifted, N)
        assert lhs == nf_degenerate_power(N, k + 1)
        via_aad = nf_mul(AD, nf_mul(nf_degenerate_power(nf_mul(A, AD) - LAMBDA, k), A))
        assert lhs == via_aad
        via_shift = nf_mul(AD, nf_mul(nf_degenerate_power(N + 1 - LAMBDA, k), A))
        assert lhs == via_shift


class TestRendering:
    def test_plain(self):
        assert nf_degenerate_power(N, 2).render() == "ad^2 a^2 + (1 - L) ad a"
        assert (A * AD).render() == "ad a + 1"
        assert nf_degenerate_power(N, 2).specialize({"lambda": Fraction(1, 2)}).render() == "ad^2 a^2 + 1/2 ad a"
        assert NormalForm().render() == "0"
        assert (-A).render() == "-a"
        assert (AD - 2 * LAMBDA * A).render() == "ad - 2*L a"

    def test_json(self):
        nf = nf_degenerate_power(N, 2)
        data = nf.to_json()
        assert [(t["i"], t["j"]) for t in data["terms"]] == [(1, 1), (2, 2)]
        assert NormalForm.from_json(json.loads(json.dumps(data))) == nf

    def test_expr_rejects_x(self):
        with pytest.raises(ValueError):
            NormalForm({(1, 1): MultiPoly.x()}).to_expr()
