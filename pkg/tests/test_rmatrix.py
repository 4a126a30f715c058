import numpy as np
import pytest

from ellqa.context import EllipticContext
from ellqa.rmatrix import (BASIS, ENTRIES, check_2x2_blocks, check_dybe, check_r_quasi_periodicity,
                           check_rbar_permutation, dybe_residual, index, permutation_matrix, r_plus, rbar,
                           structural_mask, trig_entries, trig_rbar_vv)
from ellqa.structfuncs import rho_plus

import oracles

R00_AT_023_071 = 0.6040727785412481
TRIG_J, TRIG_N, TRIG_F = -0.15724815724815724, 0.958230958230958, 1.1056511056511056


class TestStructure:
    def test_basis(self):
        assert len(BASIS) == 9 and index("+-") == 2

    def test_zero_pattern(self, ctx):
        M = rbar(0.3 + 0.1j, 0.71, ctx).entries
        mask = structural_mask()
        assert np.all(M[~mask] == 0)
        assert mask.sum() == 19

    def test_corners(self, ctx):
        R = rbar(0.41, 0.2, ctx)
        assert R["++", "++"] == 1 and R["--", "--"] == 1

    def test_permutation_at_zero(self, ctx):
        for s in (0.23, -0.61, 1.17):
            assert np.max(np.abs(rbar(0.0, s, ctx).entries - permutation_matrix())) < 1e-12

    def test_entry_table_covers_mask(self):
        mask = structural_mask()
        assert {(index(a), index(b)) for a, b in ENTRIES} == set(zip(*np.nonzero(mask)))


class TestEntries:
    def test_middle_entry_frozen(self, ctx):
        assert abs(rbar(0.23, 0.71, ctx)["00", "00"] - R00_AT_023_071) < 1e-14

    def test_middle_entry_oracle(self):
        assert abs(oracles.rbar_00_00(0.23, 0.71, 0.5, 4.0, 200) - R00_AT_023_071) < 1e-14

    def test_exchange_entry_periodic(self, ctx):
        u, s = 0.3 + 0.05j, 0.4
        a = rbar(u, s, ctx)["0+", "0+"]
        b = rbar(u + ctx.r, s, ctx)["0+", "0+"]
        assert abs(a - b) < 1e-12

    def test_r_plus_ratio(self, ctx):
        u, s = 0.3 + 0.05j, 0.4
        R, Rp = rbar(u, s, ctx).entries, r_plus(u, s, ctx).entries
        nz = R != 0
        assert np.allclose(Rp[nz] / R[nz], rho_plus(u, ctx), rtol=1e-14)

    def test_starred_level_zero(self, ctx0):
        u, s = 0.3, 0.4
        assert np.array_equal(rbar(u, s, ctx0, True).entries, rbar(u, s, ctx0).entries)

    def test_dump_format(self, ctx):
        lines = rbar(0.1, 0.2, ctx).dump().splitlines()
        assert len(lines) == 81 and lines[0].startswith("0 0 1 0")


class TestTrig:
    def test_at_one(self):
        e = trig_entries(1.0, 0.5)
        assert e["b"] == 0 and abs(e["c"] - 1) < 1e-15

    def test_jnf_frozen(self):
        e = trig_entries(0.3, 0.5)
        assert (e["j"], e["n"], e["f"]) == pytest.approx((TRIG_J, TRIG_N, TRIG_F), abs=1e-15)
        assert oracles.trig_jnf(0.3, 0.5) == pytest.approx((TRIG_J, TRIG_N, TRIG_F), abs=1e-15)

    def test_pattern_matches_elliptic(self):
        M = trig_rbar_vv(0.3, 0.5)
        assert np.all((M != 0) <= structural_mask())


class TestChecks:
    def test_permutation(self, ctx):
        rep = check_rbar_permutation(ctx, 20, 0)
        assert rep.passed and rep.notes["structural_zeros_exact"]

    def test_blocks(self, ctx):
        assert check_2x2_blocks(ctx, 30, 0).passed

    def test_blocks_without_gauge_fail(self, ctx):
        assert not check_2x2_blocks(ctx, 10, 0, gauge=False).passed

    def test_dybe_sweep_unique(self, ctx):
        rep = check_dybe(ctx, None, 10, 0)
        assert rep.notes["n_passing"] == 1
        assert rep.notes["sigma"] == 1.0
        assert rep.passed

    def test_dybe_wrong_sign(self, ctx):
        assert not check_dybe(ctx, -1.0, 5, 0).passed

    def test_dybe_scalar_independent(self, ctx):
        u1, u2, u3 = 0.21 + 0.1j, -0.33, 0.57 - 0.05j
        a = dybe_residual(ctx, 1.0, u1, u2, u3, 0.37, False)
        b = dybe_residual(ctx, 1.0, u1, u2, u3, 0.37, True)
        assert a < 1e-9 and b < 1e-9

    def test_quasi_periodicity(self, ctx):
        assert check_r_quasi_periodicity(ctx, 10, 0).passed

    def test_other_nome(self):
        assert check_2x2_blocks(EllipticContext(0.3, 5.7), 10, 1).passed
