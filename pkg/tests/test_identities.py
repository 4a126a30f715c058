import cmath

import numpy as np
import pytest

from ellqa.context import EllipticContext
from ellqa.identities import (ContourSpec, calibration_residue, check_appc_weak_zero, check_contour_normalization,
                              check_g_residues, check_half_current_identity, check_riemann_identity,
                              contour_integral, contour_normalization, normalization_oracle, riemann_sides,
                              symmetrized_terms)
from ellqa.qseries import qpoch_raw

# quadrature at q=0.5, r=4, c=1; 1/(p;p)^3 with p = q^8
NORMALIZATION = 1.0118574023771267


class TestContour:
    @pytest.mark.parametrize("k", [-3, -1, 1, 2, 5])
    def test_monomials_vanish(self, k):
        assert abs(contour_integral(lambda z: z**k, ContourSpec(0, 1.3))) < 1e-14

    def test_constant(self):
        assert abs(contour_integral(lambda z: 1.0, ContourSpec(0, 0.7)) - 1) < 1e-15

    def test_cauchy(self):
        a = 0.2 + 0.1j
        assert abs(contour_integral(lambda z: z / (z - a), ContourSpec(0, 1.0)) - 1) < 1e-14

    def test_doubling_estimate(self):
        val, err = contour_integral(lambda z: np.exp(z), ContourSpec(0, 1.0), with_error=True)
        assert abs(val - 1) < 1e-14 and err < 1e-14

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            ContourSpec(0, 1.0, 16)
        with pytest.raises(ValueError):
            ContourSpec(0, -1.0)

    def test_normalization_vs_finite_difference(self, ctx):
        assert abs(contour_normalization(ctx) - normalization_oracle(ctx)) < 1e-9

    def test_normalization_closed_form(self, ctx):
        val = contour_normalization(ctx)
        assert abs(val - NORMALIZATION) < 1e-13
        assert abs(NORMALIZATION - 1 / qpoch_raw(ctx.p, (ctx.p,), 200) ** 3) < 1e-15

    def test_normalization_check(self, ctx):
        rep = check_contour_normalization(ctx)
        assert rep.passed


class TestHalfCurrentIdentity:
    def test_default(self, ctx):
        assert check_half_current_identity(ctx, 100).passed

    def test_sign_flip_fails(self, ctx):
        assert not check_half_current_identity(ctx, 10, flip=True).passed

    def test_level_zero(self, ctx0):
        assert check_half_current_identity(ctx0, 50).passed


class TestRiemann:
    def test_random(self, ctx):
        assert check_riemann_identity(ctx, 100).passed

    def test_equal_arguments(self, ctx):
        lhs, rhs, _ = riemann_sides(0.3, 0.2 + 0.1j, 0.7, 0.7, ctx)
        assert lhs == 0 and abs(rhs) < 1e-15

    def test_plain_rhs_fails(self, ctx):
        assert not check_riemann_identity(ctx, 10, plain_rhs=True).passed


class TestWeakZero:
    def test_default(self, ctx):
        rep = check_appc_weak_zero(ctx, 100)
        assert rep.passed
        assert rep.notes["quasi_periodicity_residual"] < 1e-9

    def test_single_bracket_coefficient_fails(self, ctx):
        rep = check_appc_weak_zero(ctx, 20, one_power=1)
        assert not rep.passed and rep.max_residual > 1e-2

    def test_drop_fourth_term(self, ctx):
        assert not check_appc_weak_zero(ctx, 10, drop=(3,)).passed

    def test_structural_zero(self, ctx):
        u1, u2, upp, P = 0.3 + 0.1j, -0.4, 0.25 - 0.05j, 0.6 + 0.2j
        vals = []
        for eps in (1e-2, 5e-3, 2.5e-3):
            terms = symmetrized_terms(u1, u2, upp + eps, upp, P, ctx)
            vals.append(abs(sum(terms)) / max(map(abs, terms)))
        assert max(vals) < 1e-9

    def test_level_zero(self, ctx0):
        assert check_appc_weak_zero(ctx0, 20).passed


class TestGResidues:
    def test_all_vanish(self, ctx):
        rep = check_g_residues(ctx, 4)
        assert rep.passed
        assert set(rep.notes["per_pole"]) == {"u1+c/2", "u2+c/2", "u''+1/2", "u''-1"}

    def test_single_bracket_fails(self, ctx):
        assert not check_g_residues(ctx, 2, one_power=1).passed

    def test_calibration_pole_detected(self, ctx):
        assert abs(calibration_residue(ctx) - 1) < 1e-9
