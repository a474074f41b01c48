import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import hitrun.single_card as sc
from hitrun.lumping import k_card_kernel
from hitrun.measures import hnr_top_to_random
from hitrun.spectral import symmetric_eigenvalues


class TestKernel:
    def test_n3_row2_values(self):
        K = sc.build_K_exact(3)
        assert K[1] == [Fraction(5, 18), Fraction(11, 18), Fraction(2, 18)]

    def test_rows_sum_to_one_exactly(self):
        for n in range(2, 12):
            for row in sc.build_K_exact(n):
                assert sum(row) == 1

    def test_equals_one_card_lumping(self):
        for n in (4, 5):
            lumped = k_card_kernel(n, 1, hnr_top_to_random(n))
            assert np.abs(lumped.matrix - sc.build_K(n)).max() < 1e-13


class TestEigenpairs:
    def test_exact_eigenvector_identity(self):
        for n in range(4, 9):
            K = sc.build_K_exact(n)
            for beta, psi in sc.K_eigenpairs(n):
                for r in range(n):
                    assert sum(K[r][c] * psi[c] for c in range(n)) == beta * psi[r]

    def test_psi_norms(self):
        for n in (4, 7, 12):
            assert sc.psi_norm_sq(n, 1) == Fraction(1, n - 1)
            for i in range(1, n):
                _, psi = sc.K_eigenpairs(n)[i]
                direct = sum(x * x for x in psi) / n
                assert direct == sc.psi_norm_sq(n, i) == Fraction(n - i + 1, n * (n - i))

    def test_numeric_spectrum_matches_closed_form(self):
        n = 25
        report = symmetric_eigenvalues(sc.build_K(n))
        expected = np.sort([1 - i / n for i in range(n)])[::-1]
        assert np.abs(report.eigenvalues - expected).max() < 1e-10


class TestD2:
    def test_bottom_start_closed_form(self):
        assert sc.d2_squared_closed(5, 3, 5) == pytest.approx((4 / 5) ** 6 * 4, abs=1e-15)
        assert sc.d2_squared_closed(5, 3, 5) == pytest.approx(1.048576, abs=1e-12)

    def test_three_routes_agree(self):
        n = 6
        for i in range(1, n + 1):
            for t in range(0, 51):
                closed = sc.d2_squared_closed(n, t, i)
                spectral = sc.d2_squared_spectral(n, t, i)
                matrix = sc.d2_squared_matrix(n, t, i)
                assert closed == pytest.approx(spectral, abs=1e-12)
                assert closed == pytest.approx(matrix, abs=1e-10)

    def test_i1_printed_variant_matches_spectral_sum(self):
        # the i=1 case's distinct final term agrees with the eigen-expansion
        for n in (4, 6, 8):
            for t in range(0, 30):
                assert sc.d2_squared_closed(n, t, 1) == pytest.approx(
                    sc.d2_squared_spectral(n, t, 1), abs=1e-12
                )

    def test_monotone_in_t(self):
        for n in (5, 8):
            for i in range(1, n + 1):
                vals = [sc.d2_single_card(n, t, i) for t in range(40)]
                assert all(a >= b - 1e-12 for a, b in zip(vals, vals[1:]))

    def test_invalid_arguments(self):
        with pytest.raises(ValueError):
            sc.d2_squared_closed(5, 1, 0)
        with pytest.raises(ValueError):
            sc.d2_squared_closed(5, -1, 2)


class TestBQuantity:
    def test_case1_max_form_bracket_holds(self):
        for t in range(1, 201):
            check = sc.B_bounds_check(10, t, 3)
            assert check["case"] == 1
            assert check["holds"], f"t={t}"

    def test_case1_additive_lower_bound_eventually_fails(self):
        # the two summands of the additive lower bound are valid separately;
        # their sum overshoots once t is large relative to n
        assert sc.B_bounds_check(10, 2, 3)["additive_holds"]
        assert not sc.B_bounds_check(10, 200, 3)["additive_holds"]

    def test_case3_bracket(self):
        check = sc.B_bounds_check(10, 5, 8)
        assert check["case"] == 3
        assert 1 / 9 <= check["value"] <= 2 / 9
        assert check["holds"]

    def test_sandwich_between_half_upper_and_upper(self):
        n = 8
        for i in range(2, n - 1):
            for t in range(1, 21):
                middle = math.fsum(
                    (1 - k / n) ** (2 * t) * n / ((n - k) * (n - k + 1))
                    for k in range(1, n - i + 1)
                )
                upper = math.fsum(
                    (1 - k / n) ** (2 * t - 2) for k in range(1, n - i + 1)
                ) / n
                assert 0.5 * upper <= middle + 1e-15 <= upper + 1e-15

    def test_invalid_cases_rejected(self):
        with pytest.raises(ValueError):
            sc.B_quantity(3, 1, 2)
        with pytest.raises(ValueError):
            sc.B_bounds_check(10, 5, 9)  # i = n-1 fits no bracketed case


class TestKtEntry:
    def test_bottom_row_example(self):
        assert sc.Kt_entry(4, 2, 4, 1) == pytest.approx(7 / 64, abs=1e-15)
        assert sc.Kt_entry_exact(4, 2, 4, 1) == Fraction(7, 64)

    def test_matches_matrix_powers(self):
        n = 6
        K = sc.build_K(n)
        for t in range(1, 31):
            power = np.linalg.matrix_power(K, t)
            for i in range(1, n + 1):
                for j in range(1, n + 1):
                    assert abs(sc.Kt_entry(n, t, i, j) - power[i - 1][j - 1]) < 1e-11

    def test_row_sums_exactly_one(self):
        for n in (4, 7):
            for t in (1, 5, 12):
                for i in range(1, n + 1):
                    assert sum(sc.Kt_entry_exact(n, t, i, j) for j in range(1, n + 1)) == 1

    def test_t_zero_rejected(self):
        with pytest.raises(ValueError):
            sc.Kt_entry(5, 0, 1, 1)


class TestTV:
    def test_bottom_start_identity(self):
        assert sc.tv_single_card(5, 3, 5) == pytest.approx((4 / 5) ** 4, abs=1e-15)
        assert sc.tv_single_card_exact(5, 3, 5) == Fraction(4**4, 5**4)

    def test_late_time_identity_for_inner_start(self):
        # t past the validity threshold: exact TV equals (1/n)(1-1/n)^t
        n, i, t = 6, 2, 11
        assert t >= sc.tv_threshold(n)
        assert sc.tv_single_card(n, t, i) == pytest.approx(
            (1 / n) * (1 - 1 / n) ** t, abs=1e-14
        )

    def test_closed_forms_match_exact_in_validity_regions(self):
        for n in (5, 6, 7):
            lo = math.ceil(sc.tv_threshold(n))
            for i in range(1, n + 1):
                for t in list(range(1, 5)) + list(range(lo, lo + 5)):
                    try:
                        closed = sc.tv_closed_forms(n, t, i)
                    except sc.ClosedFormUnavailable:
                        assert i < n and t < sc.tv_threshold(n)
                        continue
                    assert closed == pytest.approx(sc.tv_single_card(n, t, i), abs=1e-13)

    def test_lower_bound_for_inner_starts(self):
        n = 8
        for i_prime in (1, 2):
            start = n - i_prime
            for t in range(1, 101):
                tv = sc.tv_single_card_exact(n, t, start)
                bound = Fraction(1, n) * Fraction(n - 1, n) ** t + (
                    1 - Fraction(i_prime + 1, n)
                ) ** (t + 1)
                assert 2 * tv >= bound

    def test_t0_value(self):
        assert sc.tv_single_card_exact(9, 0, 4) == Fraction(8, 9)

    def test_no_closed_form_signal(self):
        with pytest.raises(sc.ClosedFormUnavailable):
            sc.tv_closed_forms(6, 2, 3)
        with pytest.raises(sc.ClosedFormUnavailable):
            sc.tv_closed_forms(6, 0, 6)


class TestCutoff:
    def test_bottom_regime_sharp_drop(self):
        n = 200
        t_lo = int(n / 2 * (math.log(n) - 2))
        t_hi = int(n / 2 * (math.log(n) + 2))
        lo = sc.d2_single_card(n, t_lo, n - 1)
        hi = sc.d2_single_card(n, t_hi, n - 1)
        assert lo > math.e**2 * hi

    def test_middle_regime_crossing_near_prediction(self):
        n = 200
        rep = sc.cutoff_experiment(n, "middle", 0.5)
        predicted = math.log(n) / (2 * math.log(2))
        t_cross = rep.crossings[1.0]["t"]
        assert t_cross is not None
        assert abs(t_cross - predicted) <= 3

    def test_top_regime_upper_constant(self):
        n = 200
        for eps in (0.1, 0.05):
            t = int(10 / eps**2)
            assert sc.d2_single_card(n, t, 1) <= eps

    def test_crossing_c_values_reported(self):
        rep = sc.cutoff_experiment(50, "bottom", 1)
        for level in sc.CUTOFF_LEVELS:
            entry = rep.crossings[level]
            if entry["t"] is not None:
                assert entry["c"] == pytest.approx(
                    2 * entry["t"] / 50 - math.log(50), abs=1e-12
                )

    def test_invalid_regime_rejected(self):
        with pytest.raises(ValueError):
            sc.cutoff_experiment(10, "sideways", 1)
        with pytest.raises(ValueError):
            sc.cutoff_experiment(10, "middle", 1.5)


@given(st.integers(4, 10), st.integers(0, 25), st.data())
@settings(max_examples=60, deadline=None)
def test_d2_closed_equals_spectral_property(n, t, data):
    i = data.draw(st.integers(1, n))
    assert sc.d2_squared_closed(n, t, i) == pytest.approx(
        sc.d2_squared_spectral(n, t, i), abs=1e-10
    )
