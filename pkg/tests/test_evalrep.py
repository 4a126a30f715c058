import math

import numpy as np
import pytest

from ellqa.context import EllipticContext
from ellqa.evalrep import (E_0M, E_P0, REP_RELATIONS, check_k_modes, check_psi_factorization, check_psi_shift,
                           check_rep_exchange, k_from_modes, rep_current, rho_plus_products)
from ellqa.structfuncs import rho_plus

import oracles


@pytest.fixture
def ctx0():
    return EllipticContext(q=0.5, r=4.0, c=0.0)


def u_of(z, q=0.5):
    return math.log(z) / (2 * math.log(q))


class TestCurrents:
    def test_x_plus_supports(self, ctx0):
        cur = rep_current("x_plus", 0.1, ctx0)
        (s1, m1), (s2, m2) = cur.terms
        # z = w/q and z = w, with w = 1
        assert abs(ctx0.z_of(s1) - 1 / ctx0.q) < 1e-15 and s2 == 0.0
        assert np.array_equal(m1, E_P0) and np.array_equal(m2, E_0M)

    def test_u_plus_entry(self, ctx0):
        q, p, z = ctx0.q, ctx0.p, 0.3
        got = rep_current("u_plus", u_of(z), ctx0).diagonal[0]
        want = oracles.poch(p * q**3 * z, (p,), 200) / oracles.poch(p * q * z, (p,), 200)
        assert abs(got - want) < 1e-14

    def test_k_inverse(self, ctx0):
        k = np.diag(rep_current("k", 0.2 + 0.1j, ctx0).diagonal)
        assert np.allclose(k @ np.linalg.inv(k), np.eye(3), atol=1e-14)

    def test_level_one_rejected(self):
        with pytest.raises(ValueError):
            rep_current("k", 0.1, EllipticContext(0.5, 4.0, 1.0))

    def test_unknown_current(self, ctx0):
        with pytest.raises(KeyError):
            rep_current("nope", 0.1, ctx0)


class TestFactorization:
    def test_full_prefactor_fails(self, ctx0):
        rep = check_psi_factorization(ctx0, 20)
        assert not rep.passed
        assert 1.0 < rep.max_residual < 3.0

    def test_product_part_of_rho_plus_factorizes(self, ctx0):
        rep = check_psi_factorization(ctx0, 20)
        assert rep.notes["residual_without_rho_prefactor"] < 1e-10

    def test_rho_plus_replaced_by_one_fails(self, ctx0):
        assert not check_psi_factorization(ctx0, 10, rho_fn=lambda v: 1.0).passed

    def test_product_part(self, ctx0):
        u = 0.37 + 0.1j
        assert abs(rho_plus_products(u, ctx0) * -ctx0.q * ctx0.qpow(2 * u / ctx0.r) - rho_plus(u, ctx0)) < 1e-14

    def test_other_nome(self):
        ctx = EllipticContext(0.5, 5.0, 0.0)
        rep = check_psi_factorization(ctx, 10)
        assert rep.notes["residual_without_rho_prefactor"] < 1e-10 and not rep.passed

    def test_k_shape_from_modes(self, ctx0):
        rep = check_k_modes(ctx0, 10)
        assert rep.passed
        assert rep.notes["prefactor_residual"] > 0.1

    def test_k_modes_match_product_part(self, ctx0):
        u = 0.11 + 0.05j
        a = k_from_modes(u, ctx0)
        pref = rho_plus_products(u + (2 - ctx0.r) / 2, ctx0)
        assert abs(a[0] - pref) < 1e-12 * abs(pref)

    def test_psi_shift(self, ctx0):
        assert check_psi_shift(ctx0, 10).passed


class TestExchange:
    @pytest.mark.parametrize("rid", list(REP_RELATIONS) + ["K/K"])
    def test_relation(self, ctx0, rid):
        assert check_rep_exchange(rid, ctx0, 20).passed

    def test_k_x_plus_ratio(self, ctx0):
        from ellqa.bosonope.catalog import REGISTRY, claimed_factor

        u1 = 0.2 + 0.05j
        d = rep_current("k", u1, ctx0).diagonal
        s = rep_current("x_plus", 0.0, ctx0).terms[0][0]
        phi = claimed_factor(REGISTRY["series:k-x+"], u1, s, ctx0)
        assert abs(d[0] - phi * d[1]) < 1e-12 * abs(d[0])

    def test_unknown(self, ctx0):
        with pytest.raises(KeyError):
            check_rep_exchange("k/k", ctx0)
