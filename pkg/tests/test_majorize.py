"""Young functions, Orlicz integrals, majorization, and r.i. norms."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gausym import (
    DEFAULT_NORM_FAMILY,
    InvalidParameterError,
    Profile,
    RINorm,
    YoungFunction,
    calderon_check,
    hlp_equivalence_check,
    majorizes,
    orlicz_integral,
    parse_norm,
    ri_norm,
)

from conftest import averaged_profile, majorized_pair, random_profile

THREE_ONE = Profile(np.array([0.0, 0.5, 1.0]), np.array([3.0, 1.0]))
TWO_TWO = Profile(np.array([0.0, 0.5, 1.0]), np.array([2.0, 2.0]))


class TestYoungFunction:
    def test_zero_at_zero(self):
        for A in (
            YoungFunction.power(1),
            YoungFunction.power(2.5),
            YoungFunction.hinge(0.3),
            YoungFunction.exp_sq_truncated(),
        ):
            assert A(0.0) == 0.0

    def test_convex_nondecreasing(self):
        # sample grid stays below the exp-square cap, where the default
        # truncation never bites
        t = np.linspace(0.0, 6.0, 241)
        for A in (
            YoungFunction.power(1.3),
            YoungFunction.hinge(0.7),
            YoungFunction.exp_sq_truncated(),
        ):
            vals = A(t)
            assert np.all(np.diff(vals) >= -1e-12)
            assert np.all(np.diff(vals, 2) >= -1e-9)

    def test_truncation_keeps_finite(self):
        A = YoungFunction.exp_sq_truncated(20.0)
        assert np.isfinite(A(1e6))

    def test_invalid_parameters(self):
        with pytest.raises(InvalidParameterError):
            YoungFunction.power(0.5)
        with pytest.raises(InvalidParameterError):
            YoungFunction.hinge(-0.1)
        with pytest.raises(InvalidParameterError):
            YoungFunction.exp_sq_truncated(0.0)


class TestOrliczIntegral:
    def test_constant_identity(self):
        assert orlicz_integral(Profile.constant(2.5), YoungFunction.power(1)) == 2.5

    def test_hand_hinge(self):
        # (3 - 1) * 1/2 + 0 * 1/2
        assert orlicz_integral(THREE_ONE, YoungFunction.hinge(1.0)) == 1.0

    def test_hinge_above_sup(self):
        assert orlicz_integral(THREE_ONE, YoungFunction.hinge(3.0)) == 0.0
        assert orlicz_integral(THREE_ONE, YoungFunction.hinge(17.0)) == 0.0


class TestMajorizes:
    def test_reflexive(self):
        v = majorizes(THREE_ONE, THREE_ONE)
        assert v.holds and v.min_margin == 0.0

    def test_hand_pair(self):
        v = majorizes(THREE_ONE, TWO_TWO)
        assert v.holds
        i_half = np.argmin(np.abs(v.t_grid - 0.5))
        i_one = np.argmin(np.abs(v.t_grid - 1.0))
        assert v.margins[i_half] == pytest.approx(0.5)
        assert v.margins[i_one] == pytest.approx(0.0, abs=1e-15)

    def test_reversed_fails(self):
        v = majorizes(TWO_TWO, THREE_ONE)
        assert not v.holds
        assert v.argmin_t == pytest.approx(0.5, abs=1e-3)

    def test_zero_profile(self):
        zero = Profile.constant(0.0)
        assert majorizes(THREE_ONE, zero).holds

    @given(st.integers(min_value=0, max_value=2**31))
    @settings(max_examples=40, deadline=None)
    def test_averaging_is_majorized(self, seed):
        rng = np.random.default_rng(seed)
        h = random_profile(rng)
        g = averaged_profile(rng, h)
        assert majorizes(h, g, tol=1e-10).holds

    @given(st.integers(min_value=0, max_value=2**31))
    @settings(max_examples=25, deadline=None)
    def test_transitive(self, seed):
        rng = np.random.default_rng(seed)
        h = random_profile(rng)
        g = averaged_profile(rng, h)
        f = averaged_profile(rng, g).scaled(0.9)
        assert majorizes(h, g, tol=1e-10).holds
        assert majorizes(g, f, tol=1e-10).holds
        assert majorizes(h, f, tol=1e-10).holds


class TestHlpEquivalence:
    def test_equal_profiles(self):
        rep = hlp_equivalence_check(THREE_ONE, THREE_ONE)
        assert rep.orlicz_dominated and rep.majorization_holds and rep.agree

    def test_hand_pair_both_directions(self):
        forward = hlp_equivalence_check(TWO_TWO, THREE_ONE)
        assert forward.orlicz_dominated and forward.majorization_holds
        backward = hlp_equivalence_check(THREE_ONE, TWO_TWO)
        assert not backward.orlicz_dominated and not backward.majorization_holds
        assert backward.witness_c is not None and backward.witness_t is not None
        assert forward.agree and backward.agree

    def test_shifted_profile(self):
        # g = h + 1 dominates h in both senses, so domination of g by h
        # fails under both predicates
        h = THREE_ONE
        g = Profile(h.knots, h.values + 1.0)
        rep = hlp_equivalence_check(g, h)
        assert not rep.orlicz_dominated and not rep.majorization_holds and rep.agree
        rep2 = hlp_equivalence_check(h, g)
        assert rep2.orlicz_dominated and rep2.majorization_holds and rep2.agree

    @given(st.integers(min_value=0, max_value=2**31))
    @settings(max_examples=40, deadline=None)
    def test_agreement_on_random_pairs(self, seed):
        rng = np.random.default_rng(seed)
        g, h = majorized_pair(rng)
        assert hlp_equivalence_check(g, h).agree
        assert hlp_equivalence_check(h, g).agree


class TestRiNorm:
    def test_constant_lp(self):
        assert ri_norm(Profile.constant(2.0), RINorm("lp", 2.0)) == pytest.approx(2.0)

    def test_hand_values(self):
        assert ri_norm(THREE_ONE, RINorm("lp", 1.0)) == pytest.approx(2.0)
        assert ri_norm(THREE_ONE, RINorm("lp", math.inf)) == 3.0
        assert ri_norm(THREE_ONE, RINorm("lp", 2.0)) == pytest.approx(math.sqrt(5.0))
        # Lorentz lambda_2: 3*sqrt(1/2) + 1*(1 - sqrt(1/2)) = 1 + sqrt(2)
        assert ri_norm(THREE_ONE, RINorm("lorentz", 2.0)) == pytest.approx(1.0 + math.sqrt(2.0))
        # Marcinkiewicz_2: max(t^{-1/2} * P(t)) hit at t = 1/2
        assert ri_norm(THREE_ONE, RINorm("marcinkiewicz", 2.0)) == pytest.approx(
            1.5 * math.sqrt(2.0)
        )

    def test_orlicz_power2_equals_l2(self):
        X2 = RINorm("orlicz", young=YoungFunction.power(2))
        rng = np.random.default_rng(11)
        for _ in range(20):
            p = random_profile(rng)
            assert ri_norm(p, X2) == pytest.approx(
                ri_norm(p, RINorm("lp", 2.0)), rel=1e-8
            )

    def test_positive_homogeneity(self):
        rng = np.random.default_rng(5)
        p = random_profile(rng)
        q = p.scaled(2.5)
        for X in DEFAULT_NORM_FAMILY:
            rel = 1e-9 if X.kind == "orlicz" else 1e-12
            assert ri_norm(q, X) == pytest.approx(2.5 * ri_norm(p, X), rel=rel)

    def test_zero_profile(self):
        zero = Profile.constant(0.0)
        for X in DEFAULT_NORM_FAMILY:
            assert ri_norm(zero, X) == 0.0

    @given(st.integers(min_value=0, max_value=2**31))
    @settings(max_examples=30, deadline=None)
    def test_luxemburg_normalization(self, seed):
        # the Luxemburg functional sits at the unit-integral level
        rng = np.random.default_rng(seed)
        p = random_profile(rng)
        for A in (YoungFunction.exp_sq_truncated(), YoungFunction.power(3)):
            lam = ri_norm(p, RINorm("orlicz", young=A))
            assert lam > 0
            val = orlicz_integral(Profile(p.knots, p.values / lam), A)
            assert 1 - 1e-8 <= val <= 1 + 1e-8


class TestParseNorm:
    def test_valid_specs(self):
        assert parse_norm("lp:2").param == 2.0
        assert math.isinf(parse_norm("lp:inf").param)
        assert parse_norm("lorentz:2").kind == "lorentz"
        assert parse_norm("marcinkiewicz:2").kind == "marcinkiewicz"
        assert parse_norm("orlicz:expsq").young is not None

    def test_labels_round_trip(self):
        for spec in ("lp:2", "lp:inf", "lorentz:2", "marcinkiewicz:2", "orlicz:expsq"):
            assert parse_norm(spec).label == spec

    def test_invalid_specs(self):
        for bad in ("lp", "lp:0.5", "lorentz:0", "marcinkiewicz:1", "orlicz:power", "huh:3"):
            with pytest.raises(InvalidParameterError):
                parse_norm(bad)


class TestCalderon:
    def test_equal_profiles(self):
        rep = calderon_check(THREE_ONE, THREE_ONE)
        assert rep.precondition_holds and rep.all_ok
        assert all(v.margin == 0.0 for v in rep.verdicts)

    def test_hand_pair_margins(self):
        rep = calderon_check(TWO_TWO, THREE_ONE)
        assert rep.all_ok
        by_label = {v.label: v for v in rep.verdicts}
        assert by_label["lp:1"].margin == pytest.approx(0.0, abs=1e-15)
        assert by_label["lp:2"].margin == pytest.approx(math.sqrt(5.0) - 2.0)

    def test_margins_scale(self):
        base = calderon_check(TWO_TWO, THREE_ONE)
        scaled = calderon_check(TWO_TWO.scaled(2.5), THREE_ONE.scaled(2.5))
        for a, b in zip(base.verdicts, scaled.verdicts):
            assert b.margin == pytest.approx(2.5 * a.margin, abs=1e-8)

    def test_precondition_reported_not_skipped(self):
        rep = calderon_check(THREE_ONE, TWO_TWO)
        assert not rep.precondition_holds
        assert not rep.all_ok
        assert len(rep.verdicts) == len(DEFAULT_NORM_FAMILY)
