"""Assembled inequality checks: trivial cases, closed forms, determinism."""

import json

import numpy as np
import pytest

from gausym import (
    DomainError,
    IntervalError,
    NonSmoothFieldError,
    builtin_field,
    check_interval_bound,
    check_mazya_talenti,
    check_norm_inequality,
    check_orlicz_equality,
    check_polya_szego,
    check_reformulated,
    convergence_study,
    equal_measure_grid,
    parse_field,
    parse_norm,
)

GRID_1K = equal_measure_grid(1, 1024)
COORD = builtin_field("coordinate")
CONST = parse_field("2.0", 1)


class TestTrivialCases:
    def test_constant_field_all_checks(self):
        reports = [
            check_reformulated(CONST, GRID_1K, M=512),
            check_polya_szego(CONST, GRID_1K, M=512),
            check_mazya_talenti(CONST, GRID_1K, M=512),
            check_interval_bound(CONST, GRID_1K, [(0.2, 0.4)], M=512),
            check_orlicz_equality(CONST, GRID_1K, M=512),
        ]
        for rep in reports:
            assert rep.passed
            assert abs(rep.max_violation) <= 1e-12
            assert np.allclose(rep.lhs_curve, 0.0) or rep.check_name == "mt"

    def test_coordinate_rhs_curve_is_t(self):
        # |grad f| is identically 1, so the cumulative rearrangement is t
        rep = check_reformulated(COORD, GRID_1K, M=512)
        assert np.allclose(rep.rhs_curve, rep.s_grid, atol=1e-12)
        assert np.all(rep.lhs_curve <= rep.s_grid + rep.tolerance)


class TestEqualityCases:
    @pytest.mark.parametrize("name", ["monotone1d", "halfspace_indicator_smooth"])
    def test_two_sided_for_fixed_points(self, name):
        field = builtin_field(name)
        grid = equal_measure_grid(1, 2048)
        for check in (check_reformulated, check_polya_szego):
            rep = check(field, grid, M=2048, equality=True)
            assert rep.passed, (name, rep.check_name, rep.max_violation, rep.tolerance)

    def test_equality_flag_two_sided(self):
        field = builtin_field("monotone1d")
        one = check_reformulated(field, GRID_1K, M=1024)
        two = check_reformulated(field, GRID_1K, M=1024, equality=True)
        assert two.max_violation >= one.max_violation


class TestMazyaTalenti:
    def test_coordinate(self):
        rep = check_mazya_talenti(COORD, equal_measure_grid(1, 4096), M=4096)
        assert rep.passed
        assert rep.extra["pointwise_eligible_bins"] > 0
        assert rep.extra["pointwise_violation"] <= rep.tolerance

    def test_bump_cumulative(self):
        rep = check_mazya_talenti(builtin_field("gaussian_bump"), equal_measure_grid(1, 4096))
        assert rep.passed
        assert rep.max_violation <= 1e-6


class TestIntervalBound:
    def test_prefix_reduces_to_cumulative(self):
        grid = equal_measure_grid(1, 2048)
        t_star = 0.375
        unit = check_interval_bound(COORD, grid, [(0.0, t_star)], M=2048)
        uno = check_reformulated(COORD, grid, M=2048)
        i = int(np.argmin(np.abs(uno.s_grid - t_star)))
        # shared quadrature path for the gradient side
        assert abs(unit.rhs_curve[-1] - uno.rhs_curve[i]) <= 1e-12
        # unrearranged surrogate mass is dominated by its rearrangement
        assert unit.lhs_curve[-1] <= uno.lhs_curve[i] + 1e-12

    def test_full_interval_total_comparison(self):
        grid = equal_measure_grid(1, 2048)
        rep = check_interval_bound(COORD, grid, [(0.0, 1.0)], M=2048)
        uno = check_reformulated(COORD, grid, M=2048)
        # rearrangement preserves the total integral
        assert rep.lhs_curve[-1] == pytest.approx(uno.lhs_curve[-1], abs=1e-12)
        assert rep.passed

    def test_two_intervals(self):
        rep = check_interval_bound(COORD, GRID_1K, [(0.1, 0.2), (0.6, 0.7)], M=1024)
        assert rep.passed
        assert rep.extra["total_length"] == pytest.approx(0.2)

    def test_overlap_rejected(self):
        with pytest.raises(IntervalError):
            check_interval_bound(COORD, GRID_1K, [(0.1, 0.5), (0.4, 0.7)])
        with pytest.raises(IntervalError):
            check_interval_bound(COORD, GRID_1K, [(0.5, 0.2)])
        with pytest.raises(IntervalError):
            check_interval_bound(COORD, GRID_1K, [(-0.1, 0.5)])


class TestOrliczEquality:
    def test_hinge_beyond_sup_vanishes(self):
        grid = equal_measure_grid(1, 1024)
        field = builtin_field("gaussian_bump")
        rep = check_orlicz_equality(field, grid, c_grid=np.array([50.0, 80.0]), M=1024)
        assert np.allclose(rep.lhs_curve, 0.0)
        assert np.allclose(rep.rhs_curve, 0.0)

    def test_rejects_non_smooth(self):
        with pytest.raises(NonSmoothFieldError):
            check_orlicz_equality(parse_field("abs(x1)", 1), GRID_1K)


class TestNormInequality:
    def test_corpus_passes(self):
        grid = equal_measure_grid(1, 2048)
        for name in ("coordinate", "gaussian_bump", "mixture",
                     "poly_tanh", "monotone1d", "halfspace_indicator_smooth"):
            reports = check_norm_inequality(builtin_field(name), grid, M=2048)
            assert all(r.passed for r in reports), name

    def test_custom_family(self):
        norms = [parse_norm("lp:2"), parse_norm("lorentz:2")]
        reports = check_norm_inequality(COORD, GRID_1K, norms, M=512)
        assert [r.check_name for r in reports] == ["norm:lp:2", "norm:lorentz:2"]

    def test_sup_norm_coordinate(self):
        # the surrogate's sup stays below sup |grad f| = 1 plus tolerance
        reports = check_norm_inequality(COORD, equal_measure_grid(1, 8192), M=4096)
        sup_report = next(r for r in reports if r.check_name == "norm:lp:inf")
        assert sup_report.rhs_curve[0] == pytest.approx(1.0, abs=1e-12)
        assert sup_report.lhs_curve[0] <= 1.0 + sup_report.tolerance


class TestReportContract:
    def test_invariants(self):
        rep = check_reformulated(COORD, GRID_1K, M=777)
        assert rep.passed == (rep.max_violation <= rep.tolerance)
        assert len(rep.lhs_curve) == len(rep.rhs_curve) == rep.M == 777
        assert rep.runtime_ms >= 0

    def test_entry_schema_and_json(self):
        rep = check_polya_szego(COORD, GRID_1K, M=512)
        entry = rep.entry()
        assert set(entry) == {
            "name", "field", "dim", "N", "M",
            "tolerance", "max_violation", "pass", "runtime_ms",
        }
        assert json.loads(json.dumps(entry)) == entry

    def test_deterministic(self):
        a = check_reformulated(builtin_field("mixture"), GRID_1K, M=640)
        b = check_reformulated(builtin_field("mixture"), GRID_1K, M=640)
        assert a.max_violation == b.max_violation
        assert np.array_equal(a.lhs_curve, b.lhs_curve)
        assert np.array_equal(a.rhs_curve, b.rhs_curve)

    def test_tolerance_doubles_for_non_smooth(self):
        # |x1| has the same rearrangement and gradient magnitudes as x1,
        # so the only difference is the non-smooth doubling
        smooth = check_reformulated(COORD, GRID_1K, M=512)
        kinked = check_reformulated(parse_field("abs(x1)", 1), GRID_1K, M=512)
        assert kinked.tolerance == pytest.approx(2.0 * smooth.tolerance, rel=1e-6)

    def test_smoothness_required(self):
        with pytest.raises(NonSmoothFieldError):
            check_polya_szego(parse_field("abs(x1)", 1), GRID_1K)


class TestCorpusIntegration:
    @pytest.mark.parametrize("dim,N,M", [(1, 1024, 1024), (2, 32, 512)])
    def test_all_checks_pass_on_corpus(self, dim, N, M):
        grid = equal_measure_grid(dim, N)
        names = ("coordinate", "halfspace_indicator_smooth", "gaussian_bump",
                 "mixture", "poly_tanh", "monotone1d")
        for name in names:
            field = builtin_field(name, dim=dim)
            reports = [
                check_reformulated(field, grid, M=M),
                check_polya_szego(field, grid, M=M),
                check_mazya_talenti(field, grid, M=M),
                check_interval_bound(field, grid, [(0.1, 0.3), (0.5, 0.8)], M=M),
                check_orlicz_equality(field, grid, M=M),
                *check_norm_inequality(field, grid, M=M),
            ]
            for rep in reports:
                assert rep.passed, (
                    name, dim, rep.check_name, rep.max_violation, rep.tolerance
                )


class TestConvergenceStudy:
    def test_constant_field(self):
        studies = convergence_study(CONST, ["uno"], [64, 256, 1024], M=512)
        assert studies[0].violations == (0.0, 0.0, 0.0)
        assert studies[0].nonincreasing
        assert studies[0].empirical_order == np.inf

    def test_coordinate_nonincreasing(self):
        studies = convergence_study(COORD, ["uno"], [256, 1024, 4096], M=4096)
        st = studies[0]
        positive = [max(v, 0.0) for v in st.violations]
        assert st.nonincreasing
        assert all(b <= max(1.5 * a, 1e-12) for a, b in zip(positive, positive[1:]))

    def test_validation(self):
        with pytest.raises(DomainError):
            convergence_study(COORD, ["uno"], [512, 512], M=256)
        with pytest.raises(DomainError):
            convergence_study(COORD, ["norm"], [64, 128], M=256)
