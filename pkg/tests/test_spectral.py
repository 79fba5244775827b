import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from diagsynth.golden import load_fixture, table1_alpha
from diagsynth.spectral import (
    CoeffVector,
    PhaseVector,
    SpectralInputError,
    UndefinedUtilityError,
    error,
    forward_wht,
    inverse_wht,
    utility,
)


def brute_forward(lam):
    """Direct O(4^k) sum, independent of the butterfly."""
    n = len(lam)
    return np.array(
        [sum(lam[x] * (-1) ** bin(s & x).count("1") for x in range(n)) / n for s in range(n)]
    )


def brute_inverse(alpha):
    n = len(alpha)
    return np.array(
        [sum(alpha[s] * (-1) ** bin(s & x).count("1") for s in range(n)) for x in range(n)]
    )


def phase_vectors(min_k=1, max_k=7):
    return st.integers(min_k, max_k).flatmap(
        lambda k: arrays(np.float64, 1 << k, elements=st.floats(-10, 10, allow_nan=False))
    )


class TestTypes:
    def test_k_and_length(self):
        lam = PhaseVector(np.zeros(8))
        assert lam.k == 3 and len(lam) == 8

    def test_values_read_only(self):
        lam = PhaseVector([0.0, 1.0])
        with pytest.raises(ValueError):
            lam.values[0] = 2.0

    @pytest.mark.parametrize("n", [0, 1, 3, 6, 12])
    def test_rejects_non_power_of_two(self, n):
        with pytest.raises(SpectralInputError):
            PhaseVector(np.zeros(n))

    def test_rejects_non_finite(self):
        with pytest.raises(SpectralInputError):
            CoeffVector([0.0, math.inf])


class TestForward:
    def test_zero(self):
        np.testing.assert_array_equal(forward_wht(PhaseVector(np.zeros(4))).values, np.zeros(4))

    def test_two_term(self):
        np.testing.assert_allclose(forward_wht(PhaseVector([0.0, math.pi])).values, [math.pi / 2, -math.pi / 2])

    def test_accepts_plain_arrays(self):
        np.testing.assert_allclose(forward_wht([0.0, math.pi]).values, [math.pi / 2, -math.pi / 2])

    def test_recovers_table1(self):
        alpha = table1_alpha()
        again = forward_wht(inverse_wht(alpha))
        np.testing.assert_allclose(again.values, alpha.values, atol=1e-12, rtol=0)

    @given(phase_vectors(max_k=5))
    def test_matches_direct_sum(self, lam):
        np.testing.assert_allclose(forward_wht(PhaseVector(lam)).values, brute_forward(lam), atol=1e-12)

    @settings(max_examples=50)
    @given(phase_vectors(), st.floats(-3, 3), st.floats(-3, 3), st.data())
    def test_linear(self, lam1, a, b, data):
        lam2 = data.draw(arrays(np.float64, lam1.size, elements=st.floats(-10, 10)))
        lhs = forward_wht(PhaseVector(a * lam1 + b * lam2)).values
        rhs = a * forward_wht(PhaseVector(lam1)).values + b * forward_wht(PhaseVector(lam2)).values
        np.testing.assert_allclose(lhs, rhs, atol=1e-12)


class TestInverse:
    def test_constant(self):
        np.testing.assert_allclose(inverse_wht(CoeffVector([0.7, 0, 0, 0, 0, 0, 0, 0])).values, np.full(8, 0.7))

    def test_single_parity(self):
        np.testing.assert_allclose(inverse_wht(CoeffVector([0.0, 0.3])).values, [0.3, -0.3])

    @given(phase_vectors(max_k=5))
    def test_matches_direct_sum(self, alpha):
        np.testing.assert_allclose(inverse_wht(CoeffVector(alpha)).values, brute_inverse(alpha), atol=1e-11)

    @given(phase_vectors())
    def test_round_trip(self, lam):
        back = inverse_wht(forward_wht(PhaseVector(lam))).values
        np.testing.assert_allclose(back, lam, atol=1e-12 * max(1.0, np.abs(lam).max()))

    @given(phase_vectors())
    def test_parseval(self, alpha):
        lam = inverse_wht(CoeffVector(alpha)).values
        assert abs(np.mean(lam**2) - np.sum(alpha**2)) <= 1e-10 * max(1.0, np.sum(alpha**2))


class TestError:
    def test_identical(self):
        lam = PhaseVector(np.linspace(0, 3, 16))
        assert error(lam, lam) == 0.0

    def test_multiples_of_two_pi(self):
        lam = np.linspace(0, 3, 8)
        assert error(lam, lam + 2 * np.pi * np.arange(8)) < 1e-12

    def test_length_mismatch(self):
        with pytest.raises(SpectralInputError):
            error(np.zeros(4), np.zeros(8))

    def test_table1_smallest_row(self):
        alpha = table1_alpha().values
        kept = alpha.copy()
        kept[21] = 0.0
        assert error(inverse_wht(alpha), inverse_wht(kept)) == pytest.approx(0.0087, abs=5e-5)

    def test_table2_first_row(self):
        alpha = table1_alpha().values
        kept = alpha.copy()
        kept[[8, 17, 21, 25]] = 0.0
        assert error(inverse_wht(alpha), inverse_wht(kept)) == pytest.approx(0.0358, abs=5e-5)

    @pytest.mark.parametrize("s", range(32))
    def test_single_discard_law(self, s):
        alpha = table1_alpha().values
        kept = alpha.copy()
        kept[s] = 0.0
        assert error(inverse_wht(alpha), inverse_wht(kept)) == pytest.approx(abs(math.sin(alpha[s] / 2)), abs=1e-12)

    def test_single_discard_matches_table1(self):
        fix = load_fixture("table1.json")
        for a, e in zip(fix["alpha"], fix["error"]):
            assert abs(math.sin(a / 2)) == pytest.approx(e, abs=5e-4)

    @given(phase_vectors(), st.floats(-20, 20))
    def test_global_phase_invariance(self, lam, c):
        other = lam[::-1].copy()
        assert error(lam + c, other + c) == pytest.approx(error(lam, other), abs=1e-12)

    @given(phase_vectors())
    def test_bounded(self, lam):
        assert 0.0 <= error(lam, np.zeros_like(lam)) <= 1.0

    @settings(max_examples=200)
    @given(st.integers(2, 7), st.data())
    def test_small_angle_superposition(self, k, data):
        # Coefficients capped at 0.3: a lone 0.5 coefficient already misses by 2.6e-3.
        n = 1 << k
        alpha = data.draw(arrays(np.float64, n, elements=st.floats(-0.3, 0.3)))
        drop = sorted(data.draw(st.sets(st.integers(1, n - 1), min_size=1, max_size=6)))
        assume(np.abs(alpha[drop]).sum() <= 0.5)
        kept = alpha.copy()
        kept[drop] = 0.0
        d = error(inverse_wht(alpha), inverse_wht(kept))
        assert abs(d - 0.5 * np.sqrt(np.sum(alpha[drop] ** 2))) <= 0.002

    def test_small_angle_superposition_table2(self):
        alpha = table1_alpha().values
        for row in load_fixture("table2.json")["rows"]:
            drop = row["discarded"]
            kept = alpha.copy()
            kept[drop] = 0.0
            d = error(inverse_wht(alpha), inverse_wht(kept))
            assert abs(d - 0.5 * np.sqrt(np.sum(alpha[drop] ** 2))) <= 0.002


class TestUtility:
    def test_reference_row(self):
        assert utility(0.30, 0.1167) == pytest.approx(2.57, abs=5e-3)

    def test_five_percent_row(self):
        assert utility(0.05, 0.0154) == pytest.approx(3.25, abs=5e-3)

    def test_zero_saving(self):
        assert utility(0.0, 0.2) == 0.0

    def test_zero_error(self):
        with pytest.raises(UndefinedUtilityError):
            utility(0.3, 0.0)
