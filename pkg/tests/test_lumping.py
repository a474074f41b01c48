import itertools
from fractions import Fraction

import numpy as np
import pytest

from hitrun.groups import FiniteGroup, top_to_random_tuple
from hitrun.lumping import (
    NonLumpableProjection,
    Projection,
    card_projection,
    eigenvalue_histogram,
    k_card_kernel,
    lifted_eigencheck,
    lump,
    tv_projection_bound_check,
)
from hitrun.markov import Kernel, StateGuardExceeded, kernel_curve, kernel_from_measure, distance_curve
from hitrun.measures import (
    borel_measure,
    crude_overhand_measure,
    hnr_top_to_random,
    random_to_random_measure,
)
from hitrun.single_card import build_K
from hitrun.spectral import (
    sign_representation_eigenvalue,
    symmetric_eigenvalues,
)


class TestLump:
    def test_one_card_projection_gives_single_card_kernel(self):
        n = 4
        G = FiniteGroup.symmetric(n)
        full = kernel_from_measure(G, hnr_top_to_random(n))
        lumped = lump(full, card_projection(G, (1,)))
        assert np.abs(lumped.kernel.matrix - build_K(n)).max() < 1e-13
        assert lumped.residual <= 1e-12

    def test_identity_projection_returns_same_kernel(self):
        G = FiniteGroup.symmetric(3)
        full = kernel_from_measure(G, hnr_top_to_random(3))
        proj = Projection(list(G.elements), list(G.elements), np.arange(G.size))
        lumped = lump(full, proj)
        assert np.array_equal(lumped.kernel.matrix, full.matrix)

    def test_sign_projection_eigenvalues(self):
        n = 3
        G = FiniteGroup.symmetric(n)
        q = hnr_top_to_random(n)
        full = kernel_from_measure(G, q)
        mapping = np.array([0 if g.sign() == 1 else 1 for g in G.elements])
        lumped = lump(full, Projection(list(G.elements), [1, -1], mapping))
        vals = np.sort(np.linalg.eigvals(lumped.kernel.matrix).real)
        expected = float(sign_representation_eigenvalue(q))
        assert vals[-1] == pytest.approx(1.0, abs=1e-12)
        assert vals[0] == pytest.approx(expected, abs=1e-12)

    def test_non_lumpable_projection_rejected(self):
        # an arbitrary split of S_3 is not respected by the walk
        G = FiniteGroup.symmetric(3)
        full = kernel_from_measure(G, hnr_top_to_random(3))
        mapping = np.array([0, 0, 0, 1, 1, 1])
        with pytest.raises(NonLumpableProjection):
            lump(full, Projection(list(G.elements), ["a", "b"], mapping))

    def test_non_surjective_projection_rejected(self):
        with pytest.raises(ValueError):
            Projection(["x", "y"], ["a", "b"], np.array([0, 0]))


class TestKCardKernel:
    def test_k1_matches_closed_form_across_sizes(self):
        for n in (4, 10, 40, 100):
            kernel = k_card_kernel(n, 1, hnr_top_to_random(n))
            assert np.abs(kernel.matrix - build_K(n)).max() < 1e-13

    def test_direct_build_equals_full_chain_lumping(self):
        n = 4
        G = FiniteGroup.symmetric(n)
        for measure in (
            hnr_top_to_random(n),
            random_to_random_measure(n),
            crude_overhand_measure(n),
            borel_measure(n),
        ):
            full = kernel_from_measure(G, measure)
            for k in (1, 2):
                proj = card_projection(G, tuple(range(1, k + 1)))
                lumped = lump(full, proj)
                assert lumped.residual <= 1e-12
                direct = k_card_kernel(n, k, measure)
                assert np.abs(lumped.kernel.matrix - direct.matrix).max() < 1e-13

    def test_row_sums_k3(self):
        kernel = k_card_kernel(10, 3, hnr_top_to_random(10))
        assert kernel.size == 720
        assert np.abs(kernel.matrix.sum(axis=1) - 1).max() < 1e-12

    def test_stationary_measure_uniform(self):
        n = 5
        G = FiniteGroup.symmetric(n)
        full = kernel_from_measure(G, hnr_top_to_random(n))
        lumped = lump(full, card_projection(G, (1, 2)))
        assert np.allclose(lumped.stationary, 1 / 20)

    def test_guard(self):
        with pytest.raises(StateGuardExceeded):
            k_card_kernel(30, 3, hnr_top_to_random(30))
        with pytest.raises(ValueError):
            k_card_kernel(5, 4, hnr_top_to_random(5))


class TestEigenStructure:
    def test_lifted_eigencheck_single_card(self):
        n = 4
        G = FiniteGroup.symmetric(n)
        full = kernel_from_measure(G, hnr_top_to_random(n))
        proj = card_projection(G, (1,))
        lumped = lump(full, proj)
        assert lifted_eigencheck(lumped.kernel, proj, full)

    def test_two_card_spectrum_contained_in_full(self):
        n = 4
        G = FiniteGroup.symmetric(n)
        full_vals = symmetric_eigenvalues(
            kernel_from_measure(G, hnr_top_to_random(n))
        ).eigenvalues
        lumped_vals = symmetric_eigenvalues(
            k_card_kernel(n, 2, hnr_top_to_random(n))
        ).eigenvalues
        for v in lumped_vals:
            assert np.min(np.abs(full_vals - v)) < 1e-8


class TestTVProjectionBound:
    def test_full_vs_single_card(self):
        n = 4
        full_curve = distance_curve(hnr_top_to_random(n), 60)
        lumped = k_card_kernel(n, 1, hnr_top_to_random(n))
        lumped_curve = kernel_curve(lumped, 0, 60)  # position 1 is state index 0
        assert tv_projection_bound_check(full_curve, lumped_curve)
        # t=0: 1 - 1/n! >= 1 - 1/n
        assert full_curve.rows[0][1] >= lumped_curve.rows[0][1]

    def test_two_card_dominates_one_card(self):
        n = 5
        q = hnr_top_to_random(n)
        two = kernel_curve(k_card_kernel(n, 2, q), 0, 40)  # start (1,2)
        one = kernel_curve(k_card_kernel(n, 1, q), 0, 40)  # start 1
        assert tv_projection_bound_check(two, one)

    def test_disjoint_grids_rejected(self):
        n = 4
        a = distance_curve(hnr_top_to_random(n), 3)
        b = kernel_curve(k_card_kernel(n, 1, hnr_top_to_random(n)), 0, 3)
        b.rows = [(t + 100, tv, d2, dinf) for t, tv, d2, dinf in b.rows]
        with pytest.raises(ValueError):
            tv_projection_bound_check(a, b)


class TestHistogram:
    def test_bins_and_counts(self):
        hist = eigenvalue_histogram([0.005, 0.005, 0.995, 0.5])
        total = sum(c for _, c in hist)
        assert total == 4
        lefts = [left for left, _ in hist]
        assert lefts[0] == pytest.approx(0.0)
        assert all(
            b - a == pytest.approx(0.01, abs=1e-9) for a, b in zip(lefts, lefts[1:])
        )
        as_dict = {round(left, 2): c for left, c in hist}
        assert as_dict[0.0] == 2

    def test_negative_eigenvalues_extend_range(self):
        hist = eigenvalue_histogram([-0.034, 0.2])
        assert hist[0][0] == pytest.approx(-0.04)
        assert sum(c for _, c in hist) == 2
