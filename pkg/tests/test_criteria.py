"""Tests for the direct PPT spectrum, separability cells and squeezing."""

import math

import numpy as np
import pytest

from cvwerner.criteria import (
    SQUEEZING_CONSISTENCY_TOL,
    SeparabilityCells,
    bisect_direct_threshold,
    direct_entanglement_criterion,
    direct_entanglement_threshold,
    enumerate_ppt_spectrum,
    enumerated_entanglement_threshold,
    largest_separable_p,
    mapped_vs_direct_gap,
    nonlocality_criterion,
    ppt_spectrum_analytic,
    ppt_spectrum_bruteforce,
    published_squeezing_threshold,
    published_squeezing_threshold_lambda_form,
    q_tilde_one_bound,
    reconstruct_from_cells,
    separability_sufficient,
    squeezing_criterion,
    squeezing_threshold,
    squeezing_variance_analytic,
    squeezing_variance_dense,
    squeezing_variance_direct,
)
from cvwerner.fock_core import FockCutoff, partial_transpose_A
from cvwerner.states import WernerParams, werner_state

CUTOFF = FockCutoff(n_max=10, tail_bound=0.999)


class TestPptSpectrum:
    def test_block_values(self):
        params = WernerParams(p=0.5, r=1.0, s=0.7)
        spec = ppt_spectrum_analytic(params)
        p, l1, l2 = 0.5, math.tanh(1.0), math.tanh(0.7)
        expected_diag = p * (1 - l1 ** 2) * l1 ** 4 + (1 - p) * (1 - l2 ** 2) ** 2 * l2 ** 8
        assert spec.x_diag(2) == pytest.approx(expected_diag, rel=1e-14)
        base = (1 - p) * (1 - l2 ** 2) ** 2 * l2 ** 6
        off = p * (1 - l1 ** 2) * l1 ** 3
        assert spec.x_pair_plus(1, 2) == pytest.approx(base + off, rel=1e-14)
        assert spec.x_pair_minus(1, 2) == pytest.approx(base - off, rel=1e-14)

    def test_enumeration_matches_bruteforce(self):
        params = WernerParams(p=0.5, r=1.0, s=1.0)
        brute = ppt_spectrum_bruteforce(params, CUTOFF)
        analytic = enumerate_ppt_spectrum(params, CUTOFF.n_max)
        assert brute.size == analytic.size == CUTOFF.dim
        assert np.abs(brute - analytic).max() < 1e-12

    def test_matches_numpy_oracle(self):
        params = WernerParams(p=0.7, r=0.8, s=1.2)
        rho = werner_state(params, CUTOFF)
        oracle = np.linalg.eigvalsh(partial_transpose_A(rho))
        analytic = enumerate_ppt_spectrum(params, CUTOFF.n_max)
        assert np.abs(oracle - analytic).max() < 1e-12

    def test_negative_eigenvalue_detects_entanglement(self):
        entangled = ppt_spectrum_analytic(WernerParams(p=0.9, r=1.0, s=0.5))
        separable = ppt_spectrum_analytic(WernerParams(p=0.0, r=1.0, s=0.5))
        assert entangled.min_eigenvalue_estimate < 0.0
        assert separable.min_eigenvalue_estimate >= 0.0


class TestDirectThreshold:
    def test_equal_parameters_entangle_for_all_p(self):
        # q = tanh r / tanh^2 s > 1 whenever r = s > 0.
        result = direct_entanglement_threshold(1.0, 1.0)
        assert result.regime == "q>1"
        assert result.threshold == 0.0

    def test_weak_squeezing_regime(self):
        # q < 1: the infimum is attained at m + n = 1.
        result = direct_entanglement_threshold(0.5, 1.0)
        assert result.regime == "q<1"
        l1, l2 = math.tanh(0.5), math.tanh(1.0)
        therm = (1 - l2 ** 2) ** 2 * l2 ** 2
        nopa = (1 - l1 ** 2) * l1
        assert result.threshold == pytest.approx(therm / (therm + nopa), rel=1e-12)
        assert result.threshold == pytest.approx(0.21966, abs=1e-5)

    def test_marginal_regime(self):
        # lambda1 = lambda2^2 gives threshold (1 - lambda1) / 2.
        l1 = math.tanh(1.0) ** 2
        r = math.atanh(l1)
        result = direct_entanglement_threshold(r, 1.0)
        # Floating-point round-trip may land infinitesimally on either side
        # of q = 1; the threshold value is continuous across the boundary.
        assert result.regime in ("q=1", "q<1")
        assert result.threshold == pytest.approx((1 - l1) / 2.0, rel=1e-9)

    def test_degenerate_limits(self):
        assert direct_entanglement_threshold(0.0, 1.0).threshold == 1.0
        assert direct_entanglement_threshold(1.0, 0.0).threshold == 0.0

    def test_bisection_matches_enumeration(self):
        for r, s in [(0.5, 1.0), (1.0, 1.0), (2.0, 0.5)]:
            enumerated = enumerated_entanglement_threshold(r, s)
            assert bisect_direct_threshold(r, s) == pytest.approx(enumerated, abs=1e-6)

    def test_verdict(self):
        verdict = direct_entanglement_criterion(WernerParams(p=0.5, r=0.5, s=1.0))
        assert verdict.decision
        assert verdict.margin == pytest.approx(0.5 - verdict.threshold_p)
        assert not direct_entanglement_criterion(WernerParams(p=0.1, r=0.5, s=1.0)).decision


class TestGapInterval:
    def test_strong_gap_exactly_when_tanh_r_exceeds_tanh_sq_s(self):
        for r in (0.2, 0.7, 1.5):
            for s in (0.2, 0.7, 1.5):
                gap = mapped_vs_direct_gap(r, s)
                assert gap.extends_to_zero == (math.tanh(r) > math.tanh(s) ** 2)

    def test_interval_orientation(self):
        gap = mapped_vs_direct_gap(1.0, 1.0)
        assert gap.nonempty
        assert gap.lower == 0.0
        assert gap.as_tuple() == (gap.lower, gap.upper)


class TestSeparabilityCells:
    def test_reconstruction_is_exact(self):
        params = WernerParams(p=0.5, r=1.0, s=1.0)
        rho = werner_state(params, CUTOFF)
        rebuilt = reconstruct_from_cells(params, CUTOFF)
        assert np.abs(rebuilt - rho.data).max() < 1e-10

    def test_cell_weights_sum_to_one(self):
        params = WernerParams(p=0.4, r=0.9, s=1.1)
        cells = SeparabilityCells(params)
        horizon = 400
        total = sum(cells.P(m) for m in range(horizon))
        total += sum(
            cells.alpha(m, n) + cells.gamma(m, n)
            for m in range(horizon) for n in range(horizon) if m != n
        )
        assert total == pytest.approx(1.0, abs=1e-10)

    def test_separable_bound_below_entanglement_threshold(self):
        for r, s in [(0.3, 1.0), (0.2, 1.5), (0.5, 1.2)]:
            sep = largest_separable_p(r, s)
            ent = direct_entanglement_threshold(r, s).threshold
            assert sep <= ent + 1e-12

    def test_equal_parameters_have_no_certified_region(self):
        # q > 1 whenever r = s > 0, so the certificate degenerates to p = 0.
        assert largest_separable_p(1.0, 1.0) == 0.0

    def test_q_tilde_one_bound(self):
        l2 = math.tanh(1.2)
        expected = (1 - l2 ** 2) ** 2 / (2.0 * (1 - l2 ** 2 + l2 ** 4))
        assert q_tilde_one_bound(1.2) == pytest.approx(expected, rel=1e-14)

    def test_verdict(self):
        verdict = separability_sufficient(WernerParams(p=0.02, r=0.3, s=1.5))
        assert verdict.decision
        assert not separability_sufficient(WernerParams(p=0.9, r=0.3, s=1.5)).decision


class TestNonlocalityVerdict:
    def test_verdict(self):
        assert nonlocality_criterion(WernerParams(p=0.9, r=2.0, s=2.0)).decision
        assert not nonlocality_criterion(WernerParams(p=0.5, r=2.0, s=2.0)).decision


class TestSqueezing:
    def test_analytic_variance(self):
        params = WernerParams(p=0.5, r=1.0, s=0.0)
        expected = 0.5 * math.exp(-2.0) + 0.5
        assert squeezing_variance_analytic(params) == pytest.approx(expected, rel=1e-14)

    @pytest.mark.parametrize(
        "params",
        [
            WernerParams(p=0.5, r=1.0, s=0.0),
            WernerParams(p=0.5, r=0.5, s=0.5),
            WernerParams(p=0.9, r=2.0, s=2.0),
            WernerParams(p=0.0, r=0.0, s=1.0),
        ],
    )
    def test_direct_matches_analytic(self, params):
        analytic = squeezing_variance_analytic(params)
        direct = squeezing_variance_direct(params)
        assert abs(analytic - direct) < SQUEEZING_CONSISTENCY_TOL

    def test_dense_route_matches_analytic(self):
        params = WernerParams(p=0.5, r=0.4, s=0.3)
        rho = werner_state(params, FockCutoff(n_max=30, tail_bound=0.999))
        dense = squeezing_variance_dense(rho)
        assert dense == pytest.approx(squeezing_variance_analytic(params), abs=1e-8)

    def test_threshold_reduces_to_tanh_on_diagonal(self):
        for r in (0.5, 1.0, 2.0):
            assert squeezing_threshold(r, r) == pytest.approx(math.tanh(r), rel=1e-12)

    def test_threshold_boundary(self):
        # The variance crosses 1 exactly at the threshold probability.
        r, s = 1.0, 0.7
        thr = squeezing_threshold(r, s)
        assert squeezing_variance_analytic(WernerParams(p=thr, r=r, s=s)) == pytest.approx(1.0)

    def test_degenerate_limits(self):
        assert squeezing_threshold(0.0, 1.0) == 1.0
        assert squeezing_threshold(1.0, 0.0) == 0.0

    def test_published_threshold_disagrees_below_saturation(self):
        # The reference closed form replaces cosh(2s) - 1 = 4 sinh^2(s) ... / 2
        # by 4 n_bar + 1 terms; it coincides with the variance-derived
        # threshold only asymptotically, not at moderate parameters.
        r = s = 0.5
        published = published_squeezing_threshold(r, math.sinh(s) ** 2)
        derived = squeezing_threshold(r, s)
        assert abs(published - derived) > 0.1

    def test_published_lambda_form_matches_published(self):
        r = s = 0.8
        lam = math.tanh(r)
        a = published_squeezing_threshold(r, math.sinh(s) ** 2)
        b = published_squeezing_threshold_lambda_form(lam)
        assert a == pytest.approx(b, rel=1e-12)

    def test_verdict(self):
        squeezed = squeezing_criterion(WernerParams(p=0.9, r=1.0, s=0.3))
        assert squeezed.decision
        assert squeezed.method == "both"
        noisy = squeezing_criterion(WernerParams(p=0.2, r=1.0, s=1.0))
        assert not noisy.decision
