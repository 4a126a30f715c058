import cmath

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ellqa.context import BracketKind, EllipticContext, default_cutoff
from ellqa.qseries import (BRACKET_LAWS, Brackets, bracket, check_bracket_laws, check_cutoff_stability,
                           check_theta_reflection, curly, law_residual, log_series_poch, qint, qpoch_raw,
                           theta_p)
from ellqa.series import PowerSeries

import oracles

# frozen from tests/oracles.py at doubled cutoff
POCH_QUARTER = 0.6885375371203397
CURLY_Q2_AT_04_3 = 0.8388925632007319


class TestQPoch:
    def test_zero_argument(self):
        assert qpoch_raw(0.0, (0.3,), 50) == 1

    def test_empty_bases(self):
        assert qpoch_raw(0.5, (), 50) == 0.5

    def test_frozen_oracle(self):
        assert abs(qpoch_raw(0.25, (0.25,), 200) - POCH_QUARTER) < 1e-15

    def test_oracle_reproduces_frozen(self):
        assert abs(oracles.poch(0.25, (0.25,), 400) - POCH_QUARTER) < 1e-15

    def test_array_argument(self):
        zs = np.array([0.1, 0.2 + 0.1j, -0.4])
        got = qpoch_raw(zs, (0.3, 0.2), 60)
        for z, g in zip(zs, got):
            assert abs(g - oracles.poch(complex(z), (0.3, 0.2), 60)) < 1e-14

    def test_divergent_base_rejected(self):
        with pytest.raises(ValueError):
            qpoch_raw(0.1, (1.0,), 10)


class TestTheta:
    def test_zeros(self, ctx):
        assert theta_p(1.0, ctx.p, ctx) == 0
        assert abs(theta_p(ctx.p, ctx.p, ctx)) < 1e-15

    def test_shift_law(self):
        z, p = 0.3 + 0.1j, 0.1
        assert abs(theta_p(p * z, p) + theta_p(z, p) / z) < 1e-13

    def test_zero_rejected(self, ctx):
        with pytest.raises(ValueError):
            theta_p(0.0, ctx.p, ctx)

    def test_matches_oracle(self):
        z, p = 0.7 - 0.2j, 0.2
        assert abs(theta_p(z, p) - oracles.theta(z, p, 200)) < 1e-14

    @given(st.floats(0.2, 3.0), st.floats(-3.0, 3.0))
    @settings(max_examples=40, deadline=None)
    def test_reflection_invariance(self, rad, arg):
        p = 0.2
        z = rad * cmath.exp(1j * arg)
        t = theta_p(z, p)
        assert abs(theta_p(p / z, p) - t) <= 1e-12 * max(1.0, abs(t))


class TestBracket:
    def test_zero(self, ctx):
        assert bracket(0.0, BracketKind.PLAIN, ctx) == 0

    def test_period_r(self, ctx):
        u = 0.37
        b = Brackets(ctx)
        assert abs(b(u + ctx.r) + b(u)) < 1e-12

    def test_half_period_law(self, ctx):
        assert law_residual("half_rtau", 0.3 + 0.05j, ctx) < 1e-10

    def test_matches_oracle(self, ctx):
        for u in (0.37, -1.2 + 0.3j):
            for plus in (False, True):
                kind = BracketKind.PLUS if plus else BracketKind.PLAIN
                want = oracles.bracket(u, ctx.q, ctx.r, plus, 200)
                assert abs(bracket(u, kind, ctx) - want) < 1e-13 * max(1, abs(want))

    def test_starred_uses_r_star(self, ctx):
        want = oracles.bracket(0.4, ctx.q, ctx.r_star, False, 200)
        assert abs(bracket(0.4, BracketKind.STAR, ctx) - want) < 1e-13

    def test_starred_equals_plain_at_level_zero(self, ctx0):
        u = 0.21 + 0.1j
        assert bracket(u, BracketKind.STAR, ctx0) == bracket(u, BracketKind.PLAIN, ctx0)

    @given(st.floats(-4.0, 4.0), st.floats(-0.5, 0.5))
    @settings(max_examples=50, deadline=None)
    def test_parity(self, re, im):
        ctx = EllipticContext(0.5, 4.0)
        b = Brackets(ctx)
        u = complex(re, im)
        scale = max(1.0, abs(b(u)), abs(b.plus(u)))
        assert abs(b(-u) + b(u)) <= 1e-12 * scale
        assert abs(b.plus(-u) - b.plus(u)) <= 1e-12 * scale


class TestBracketLaws:
    def test_all_laws_but_plus_rtau_hold(self, ctx):
        rep = check_bracket_laws(ctx, 100, 0)
        for name, res in rep.notes["per_law"].items():
            if name != "plus_shift_rtau":
                assert res < 1e-10, name

    def test_plus_rtau_holds_with_opposite_sign(self, ctx):
        # the product definition gives [u + r tau]_+ = -e^{...}[u]_+
        rep = check_bracket_laws(ctx, 100, 0)
        assert rep.notes["plus_shift_rtau_negated"] < 1e-10
        assert abs(rep.notes["per_law"]["plus_shift_rtau"] - 2.0) < 1e-8
        assert not rep.passed

    def test_law_table(self):
        assert len(BRACKET_LAWS) == 7

    def test_subset(self, ctx):
        rep = check_bracket_laws(ctx, 20, 0, laws=["odd", "shift_r"])
        assert rep.passed


class TestCurly:
    def test_zero(self, ctx):
        assert curly(0.0, ctx) == 1

    def test_frozen_oracle(self):
        ctx = EllipticContext(q=0.4, r=3.0)
        assert abs(curly(0.4**2, ctx) - CURLY_Q2_AT_04_3) < 1e-15

    def test_degenerate_base(self):
        q = 0.5
        z = 0.3
        assert abs(qpoch_raw(z, (0.0, q**6), 60) - qpoch_raw(z, (q**6,), 60)) < 1e-15


class TestLogSeries:
    def test_empty(self):
        s = log_series_poch([], 5)
        assert np.all(s.coeffs == 0)

    def test_first_coefficient(self):
        a, p = 0.3, 0.2
        s = log_series_poch([(a, (p,))], 6)
        assert abs(s.coeffs[1] + a / (1 - p)) < 1e-15
        for k in range(1, 7):
            assert abs(s.coeffs[k] - oracles.log_poch_coeff(a, p, k)) < 1e-15

    def test_exp_matches_product(self):
        a, p, x = 0.4, 0.3, 0.2
        s = log_series_poch([(a, (p,)), (0.1, (p,), -2)], 40)
        want = oracles.poch(a * x, (p,), 200) / oracles.poch(0.1 * x, (p,), 200) ** 2
        assert abs(s.exp()(x) - want) < 1e-13

    def test_exp_log_roundtrip(self):
        s = PowerSeries([1.0, 0.3, -0.2, 0.05, 0.01])
        assert s.log().exp().allclose(s, 1e-14)

    def test_exp_matches_oracle(self):
        c = [0, 0.2, -0.1, 0.03]
        assert np.allclose(PowerSeries(c).exp().coeffs, oracles.series_exp(c), atol=1e-15)


class TestSuites:
    def test_theta_reflection(self, ctx):
        assert check_theta_reflection(ctx, 30, 0).passed

    def test_cutoff_stability(self, ctx):
        rep = check_cutoff_stability(ctx, 10, 0)
        assert rep.passed
        assert rep.tolerance == ctx.tol / 10

    def test_default_cutoff_rule(self):
        n = default_cutoff(0.5, 4.0, 1.0, 1e-12)
        t = max(0.5**8, 0.5**6, 0.5**6)
        assert t ** (n - 4) < 1e-14 <= t ** (n - 5)

    def test_qint(self):
        assert abs(qint(2, 0.5) - 2.5) < 1e-15
