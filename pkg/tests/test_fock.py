import math
import random
from fractions import Fraction

import numpy as np
import pytest

from normord.boson import A, AD, IDENTITY, N, NormalForm, nf_degenerate_power
from normord.combinatorics import bell_poly
from normord.exact import LAMBDA, X
from normord.fock import (
    ConvergenceError,
    TruncationError,
    build_operators,
    coherent_cutoff,
    coherent_overlap,
    coherent_overlap_truncated,
    coherent_state,
    dobinski_eval,
    expectation_degenerate_power,
    falling_value,
    matrix_of_normal_form,
    norm_deficit,
    number_state,
    oracle_check,
    oracle_error,
    word_matrix,
)

from oracles import bell_brute


class TestOperators:
    def test_d2(self):
        a, ad = build_operators(2)
        np.testing.assert_array_equal(a, [[0, 1], [0, 0]])
        np.testing.assert_array_equal(ad, [[0, 0], [1, 0]])

    def test_number_spectrum(self):
        a, ad = build_operators(3)
        np.testing.assert_allclose(ad @ a, np.diag([0, 1, 2]))

    def test_commutator_truncation_artifact(self):
        a, ad = build_operators(3)
        np.testing.assert_allclose(a @ ad - ad @ a, np.diag([1, 1, -2]), atol=1e-15)

    def test_ladder_action(self):
        a, ad = build_operators(6)
        for m in range(1, 5):
            np.testing.assert_allclose(a @ number_state(m, 6), math.sqrt(m) * number_state(m - 1, 6))
            np.testing.assert_allclose(ad @ number_state(m, 6), math.sqrt(m + 1) * number_state(m + 1, 6))

    def test_zero_cutoff(self):
        with pytest.raises(ValueError):
            build_operators(0)


class TestMatrixOfNormalForm:
    def test_number(self):
        np.testing.assert_allclose(matrix_of_normal_form(N, 0, 3), np.diag([0, 1, 2]))

    def test_degenerate_square(self):
        M = matrix_of_normal_form(nf_degenerate_power(N, 2), Fraction(1, 2), 4)
        np.testing.assert_allclose(M, np.diag([0, 0.5, 3, 7.5]), atol=1e-14)

    def test_identity(self):
        np.testing.assert_array_equal(matrix_of_normal_form(IDENTITY, 0, 5), np.eye(5))

    def test_rejects_x(self):
        with pytest.raises(ValueError):
            matrix_of_normal_form(NormalForm({(1, 1): X}), 0, 3)

    @pytest.mark.parametrize("lam", [0.0, 0.25, 0.5, 1.0, -0.5])
    def test_diagonal_eigenvalues(self, lam):
        D = 12
        for k in range(8):
            M = matrix_of_normal_form(nf_degenerate_power(N, k), lam, D)
            expected = [falling_value(m, k, lam) for m in range(D)]
            np.testing.assert_allclose(M, np.diag(expected), rtol=1e-12, atol=1e-12)


class TestOracle:
    def test_commutator_word(self):
        assert oracle_check(["a", "ad"], 10)

    def test_number_squared_word(self):
        assert oracle_check(["ad", "a", "ad", "a"], 10)

    def test_single_generator(self):
        assert oracle_check(["a"], 4)

    def test_shifted_number(self):
        assert oracle_check(["N-lambda", "a", "N-lambda"], 12, Fraction(1, 2))

    def test_no_block(self):
        with pytest.raises(ValueError):
            oracle_check(["a", "ad", "a"], 3)

    def test_wrong_normal_form_is_caught(self):
        # a a^dagger without its identity term differs on the block
        wrong = matrix_of_normal_form(NormalForm({(1, 1): 1}), 0, 10)
        raw = word_matrix(["a", "ad"], 0, 10)
        assert np.max(np.abs(raw[:8, :8] - wrong[:8, :8])) == pytest.approx(1.0)

    def test_leakage_free_block_independent_of_cutoff(self):
        rng = random.Random(3)
        for _ in range(30):
            word = [rng.choice(["a", "ad"]) for _ in range(rng.randint(1, 6))]
            L = len(word)
            small = word_matrix(word, 0, 15)
            big = word_matrix(word, 0, 20)
            block = 15 - L
            np.testing.assert_allclose(small[:block, :block], big[:block, :block], atol=1e-12)

    def test_leak_outside_block(self):
        small = word_matrix(["a", "ad"], 0, 6)
        big = word_matrix(["a", "ad"], 0, 11)
        assert abs(small[5, 5] - big[5, 5]) > 1


class TestCoherentState:
    def test_vacuum(self):
        v = coherent_state(0, 5)
        np.testing.assert_array_equal(v, [1, 0, 0, 0, 0])

    def test_norm(self):
        v = coherent_state(1.0)
        assert abs(np.vdot(v, v).real - 1) < 1e-12

    @pytest.mark.parametrize("z", [0.3, 1j, 1 + 1j, 2.0, -1.2 + 1.6j])
    def test_norm_adaptive(self, z):
        v = coherent_state(z)
        assert abs(np.vdot(v, v).real - 1) < 1e-12

    def test_cutoff_is_minimal(self):
        z = 1.5
        D = coherent_cutoff(z)
        assert norm_deficit(z, D) < 1e-12 <= norm_deficit(z, D - 1)
        with pytest.warns(RuntimeWarning):
            v = coherent_state(z, D - 1, strict=False)
        assert 1 - np.vdot(v, v).real >= 1e-12

    def test_eigenvector_of_a(self):
        z = 0.7 + 0.2j
        v = coherent_state(z, 40)
        a, _ = build_operators(40)
        block = 39
        assert np.linalg.norm((a @ v - z * v)[:block]) < 1e-8

    def test_insufficient_cutoff(self):
        with pytest.raises(TruncationError):
            coherent_state(2.0, 5)
        with pytest.warns(RuntimeWarning):
            coherent_state(2.0, 5, strict=False)


class TestOverlap:
    def test_self(self):
        assert coherent_overlap(0.4 - 0.3j, 0.4 - 0.3j) == pytest.approx(1)

    def test_vacuum(self):
        assert coherent_overlap(1, 0) == pytest.approx(math.exp(-0.5))

    def test_modulus(self):
        assert abs(coherent_overlap(1, 2j)) ** 2 == pytest.approx(math.exp(-5))

    def test_truncated_matches_closed_form(self):
        rng = random.Random(11)
        for _ in range(10):
            x = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
            y = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
            assert abs(coherent_overlap_truncated(x, y) - coherent_overlap(x, y)) < 1e-10


class TestExpectation:
    def test_k1(self):
        z = 0.8 - 0.9j
        res = expectation_degenerate_power(z, 1, 0.3)
        assert res.matrix_value == pytest.approx(abs(z) ** 2, rel=1e-9)
        assert res.series_value == pytest.approx(abs(z) ** 2, rel=1e-9)

    def test_k2(self):
        z = complex(math.cos(0.4), math.sin(0.4))
        res = expectation_degenerate_power(z, 2, 0.5)
        assert res.matrix_value == pytest.approx(1.5, rel=1e-9)
        assert res.series_value == pytest.approx(1.5, rel=1e-9)

    def test_classical_bell(self):
        res = expectation_degenerate_power(1.0, 3, 0)
        assert res.matrix_value == pytest.approx(5, rel=1e-9)
        assert res.series_value == pytest.approx(5, rel=1e-9)

    @pytest.mark.parametrize("lam", [Fraction(0), Fraction(1, 4), Fraction(-1, 2), Fraction(1)])
    @pytest.mark.parametrize("z", [0.5, 1.2j, 1 + 0.5j])
    def test_against_bell_polynomial(self, lam, z):
        for k in range(1, 7):
            exact = float(bell_poly(k).poly.evaluate({"lambda": lam, "x": Fraction(abs(z) ** 2)}))
            res = expectation_degenerate_power(z, k, lam)
            assert res.matrix_value == pytest.approx(exact, rel=1e-9, abs=1e-12)
            assert res.series_value == pytest.approx(exact, rel=1e-9, abs=1e-12)

    def test_cutoff_too_small(self):
        with pytest.raises(TruncationError):
            expectation_degenerate_power(1.0, 3, 0, D=5)


class TestDobinski:
    def test_classical_b2(self):
        res = dobinski_eval(2, 0, 1, 1e-10)
        assert abs(res.value - bell_brute(2)) < 5e-10
        assert abs(res.shifted_value - 2) < 5e-10

    def test_classical_b3(self):
        res = dobinski_eval(3, 0, 1, 1e-10)
        assert abs(res.value - bell_brute(3)) < 5e-10

    def test_degenerate_b2(self):
        res = dobinski_eval(2, 0.5, 1, 1e-10)
        assert abs(res.value - 1.5) < 5e-10
        assert abs(res.shifted_value - 1.5) < 5e-10

    def test_x_zero(self):
        for k in range(1, 5):
            res = dobinski_eval(k, 0.25, 0, 1e-10)
            assert res.value == 0 and res.shifted_value == 0

    @pytest.mark.parametrize("k", [1, 3, 6, 8])
    @pytest.mark.parametrize("lam", [0.0, 0.25, 1.0, -0.5, 2.5])
    @pytest.mark.parametrize("x", [0.5, 2.0, 5.0])
    def test_tail_bound_dominates_true_tail(self, k, lam, x):
        tol = 1e-6
        res = dobinski_eval(k, lam, x, tol)
        assert res.tail_bound < tol
        # sum the remaining terms far past the stopping index
        tail = math.fsum(
            abs(math.exp(n * math.log(x) - math.lgamma(n + 1)) * falling_value(n, k, lam))
            for n in range(res.terms, res.terms + 400)
        ) * math.exp(-x)
        assert tail <= res.tail_bound

    def test_agrees_with_exact_on_grid(self):
        tol = 1e-10
        for k in range(1, 9):
            bell = bell_poly(k).poly
            for lam in (Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(1), Fraction(-1, 2)):
                for x in (Fraction(1, 2), Fraction(1), Fraction(2)):
                    exact = float(bell.evaluate({"lambda": lam, "x": x}))
                    res = dobinski_eval(k, float(lam), float(x), tol)
                    assert abs(res.value - exact) < 5 * tol
                    assert abs(res.shifted_value - exact) < 5 * tol
                    assert abs(res.value - res.shifted_value) <= 2 * tol

    def test_step_cap(self):
        with pytest.raises(ConvergenceError):
            dobinski_eval(3, 0, 50.0, 1e-10, max_terms=10)

    def test_bad_arguments(self):
        with pytest.raises(ValueError):
            dobinski_eval(0, 0, 1)
        with pytest.raises(ValueError):
            dobinski_eval(2, 0, 1, tol=0)


def test_matrix_of_normal_form_matches_generators():
    a, ad = build_operators(8)
    nf = AD * A * A + LAMBDA * AD
    M = matrix_of_normal_form(nf, 0.5, 8)
    np.testing.assert_allclose(M, ad @ a @ a + 0.5 * ad, atol=1e-14)


def test_random_expressions_against_oracle():
    rng = random.Random(5)
    for _ in range(50):
        word = [rng.choice(["a", "ad"]) for _ in range(rng.randint(1, 6))]
        assert oracle_error(word, 20, 0) < 1e-10
