import math

import numpy as np
import pytest

from fracbound.bounds import SLACK_TOL, bound_classical, make_report, reduction_alpha1_bound
from fracbound.errors import DomainError
from fracbound.fracint import FracParams
from fracbound.funcs import builtin_h, certify_f, certify_h
from fracbound.verify import (
    ParamsGrid,
    compare_classical,
    identity_sweep,
    sweep,
    tightness_search,
)

SMALL_GRID = ParamsGrid(alphas=(0.5, 1.0, 2.0), x_count=21)


class TestSweep:
    def test_square_identity_family1_passes(self, f_square, h_identity):
        result = sweep(f_square, h_identity, 1, "first", SMALL_GRID)
        assert result.status == "pass"
        assert result.violations == 0
        assert result.min_slack >= -SLACK_TOL
        assert len(result.reports) == 3 * 21

    def test_constant_min_slack_equals_min_bound(self, f_const, h_identity):
        # lhs vanishes identically, so slack is the bound itself
        result = sweep(f_const, h_identity, 1, "first",
                       ParamsGrid(alphas=(1.0,), x_count=21))
        assert result.status == "pass"
        bounds = [r.bound_first for r in result.reports]
        assert result.min_slack == pytest.approx(min(bounds), abs=1e-12)
        for report in result.reports:
            assert report.lhs == pytest.approx(0.0, abs=1e-10)

    def test_godunova_is_divergent(self, f_square, h_godunova):
        result = sweep(f_square, h_godunova, 1, "first",
                       ParamsGrid(alphas=(1.0,), x_count=5))
        assert result.status == "divergent"
        assert result.reports == [] and result.min_slack is None

    def test_uncertified_variant(self, f_square, h_power_half):
        result = sweep(f_square, h_power_half, 2, "second",
                       ParamsGrid(alphas=(1.0,), x_count=5, ps=(2.0,)))
        assert result.status == "uncertified"
        assert "superadditive" in result.error
        assert result.reports == []

    def test_both_variants_and_ordering(self, f_exp, h_power_half):
        result = sweep(f_exp, h_power_half, 3, "both",
                       ParamsGrid(alphas=(0.5, 1.0), x_count=11, qs=(1.0, 2.0)))
        assert result.status == "pass"
        for report in result.reports:
            assert report.bound_first <= report.bound_second + 1e-10

    def test_reports_sorted_by_x_then_alpha(self, f_square, h_identity):
        result = sweep(f_square, h_identity, 1, "first",
                       ParamsGrid(alphas=(2.0, 0.5), x_count=5))
        keys = [(r.x, r.params.alpha) for r in result.reports]
        assert keys == sorted(keys)

    def test_rerun_is_bit_identical(self, f_square, h_identity):
        first = sweep(f_square, h_identity, 1, "first",
                      ParamsGrid(alphas=(0.5,), x_count=7))
        second = sweep(f_square, h_identity, 1, "first",
                       ParamsGrid(alphas=(0.5,), x_count=7))
        assert [(r.x, r.lhs, r.bound_first) for r in first.reports] == \
               [(r.x, r.lhs, r.bound_first) for r in second.reports]
        assert first.min_slack == second.min_slack

    def test_bad_variant_rejected(self, f_square, h_identity):
        with pytest.raises(DomainError):
            sweep(f_square, h_identity, 1, "third", SMALL_GRID)

    def test_family2_grid_uses_ps(self, f_square, h_identity):
        result = sweep(f_square, h_identity, 2, "first",
                       ParamsGrid(alphas=(1.0,), x_count=5, ps=(1.5, 2.0, 4.0)))
        assert result.status == "pass"
        assert len(result.reports) == 15
        assert {r.params.p for r in result.reports} == {1.5, 2.0, 4.0}


class TestTightness:
    def test_linear_family1_matches_brute_grid(self, f_linear, h_identity):
        params = FracParams(alpha=1.0)
        result = tightness_search(f_linear, h_identity, 1, "first", params)
        # brute-force oracle on a 10001-point grid
        xs = np.linspace(0.0, 1.0, 10001)
        slacks = []
        for x in xs:
            r = make_report(f_linear, h_identity, 1, float(x), params)
            slacks.append(r.slack_first)
        brute_min = min(slacks)
        assert result.min_slack <= result.coarse_min_slack + 1e-12
        assert abs(result.min_slack - brute_min) <= 1e-6
        # slack vanishes at the endpoints for this configuration (bound and
        # lhs both equal 1/2 there); the midpoint has the larger slack 1/4
        assert result.min_slack == pytest.approx(0.0, abs=1e-9)
        x_brute = float(xs[int(np.argmin(slacks))])
        assert min(abs(result.x_star - x_brute), abs(result.x_star - (1.0 - x_brute))) <= 1e-2

    def test_const_min_slack_is_min_bound(self, f_const, h_identity):
        # lhs vanishes identically and M = 0 makes every bound 0 as well, so
        # the minimum slack is the minimum bound (zero, up to quadrature
        # noise) and every x ties as minimizer
        params = FracParams(alpha=0.5)
        result = tightness_search(f_const, h_identity, 1, "first", params)
        assert abs(result.min_slack) <= 1e-9

    def test_flat_function_with_loose_bound_minimizes_near_midpoint(self, h_identity):
        # a constant with a loose (still valid) derivative bound keeps lhs at
        # zero while the bound scales with the prefactor, whose strict
        # convexity puts the minimizer at the midpoint
        from fracbound.funcs import TestFunction

        flat = TestFunction(
            name="flat_loose", a=0.0, b=2.0,
            f=lambda t: np.full_like(np.asarray(t, dtype=float), 7.0),
            fprime=lambda t: np.zeros_like(np.asarray(t, dtype=float)),
            M=0.5,
        )
        certify_f(flat)
        params = FracParams(alpha=0.5)
        result = tightness_search(flat, h_identity, 1, "first", params)
        mid = 0.5 * (flat.a + flat.b)
        assert abs(result.x_star - mid) <= 1e-4
        expected = make_report(flat, h_identity, 1, mid, params).bound_first
        assert result.min_slack == pytest.approx(expected, rel=1e-6)

    def test_square_refinement_consistency(self, f_square, h_identity):
        params = FracParams(alpha=1.0)
        result = tightness_search(f_square, h_identity, 1, "first", params)
        assert result.min_slack >= -SLACK_TOL
        assert result.min_slack <= result.coarse_min_slack + 1e-12
        xs = np.linspace(0.0, 1.0, 10001)
        brute = min(make_report(f_square, h_identity, 1, float(x), params).slack_first
                    for x in xs)
        assert abs(result.min_slack - brute) <= 1e-6


class TestCompareClassical:
    def test_identity_factor_exactly_half(self, h_identity):
        record = compare_classical(h_identity, p=2.0)
        assert record.thm1_factor == pytest.approx(0.5, abs=1e-10)
        assert record.thm1_better is False  # equality is not strictly better
        assert record.thm2_lhs_factor == pytest.approx(1.0, abs=1e-10)
        assert record.thm2_threshold == pytest.approx(math.sqrt(3.0) / 2.0, rel=1e-12)
        assert record.thm2_better is False

    def test_p_weight_factor_two(self, h_one):
        record = compare_classical(h_one)
        assert record.thm1_factor == pytest.approx(2.0, abs=1e-12)
        assert record.thm1_better is False
        assert record.thm2_lhs_factor is None

    def test_rejects_bad_p(self, h_identity):
        with pytest.raises(DomainError):
            compare_classical(h_identity, p=1.0)

    def test_flags_agree_with_direct_bound_comparison(self):
        # comparing the alpha = 1 reductions against the classical bound at
        # the midpoint must reproduce the flags (ties resolve to not-better)
        for name, params in (("identity", {}), ("power", {"s": 0.5}),
                             ("power", {"s": 0.75}), ("one", {})):
            h = builtin_h(name, params)
            certify_h(h)
            record = compare_classical(h, p=2.0)
            reduced = reduction_alpha1_bound(h, 1.0, 0.0, 1.0, 0.5)
            classical = bound_classical(1.0, 0.0, 1.0, 0.5)
            direct_better = reduced < classical - 1e-12
            assert record.thm1_better == direct_better, h.label
            reduced2 = reduction_alpha1_bound(h, 1.0, 0.0, 1.0, 0.5, p=2.0)
            direct_better2 = reduced2 < classical - 1e-12
            assert record.thm2_better == direct_better2, h.label


class TestIdentitySweep:
    def test_square_passes(self, f_square):
        result = identity_sweep(f_square, alphas=(0.5, 1.0, 2.0), x_count=21)
        assert result.max_residual <= 1e-8
        assert len(result.rows) == 3 * 21
        # interior points only
        assert all(0.0 < x < 1.0 for _, x, _ in result.rows)

    def test_rows_track_max(self, f_exp):
        result = identity_sweep(f_exp, alphas=(1.0,), x_count=5)
        assert result.max_residual == pytest.approx(max(r for _, _, r in result.rows))
