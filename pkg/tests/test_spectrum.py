"""Link spectrum tests: shooting solver, eigenvalue search, indicial
roots, the finite-difference oracle, and the family scan."""

import math

import numpy as np
import pytest

from conelab.cone import ConeParams, Verdict, boundary_rhs, find_root, stability_margin, verdict
from conelab.errors import BracketExhausted
from conelab.spectrum import (
    Mode,
    ShootingConfig,
    family_scan,
    fd_oracle_lambda1,
    find_eigenvalue,
    indicial_roots,
    shoot,
)


class TestShoot:
    def test_constant_solution_at_zero(self):
        d, zeros = shoot(ConeParams(8, 3), 0.0)
        assert d == 0.0 and zeros == 0

    def test_profile_identity(self):
        # lambda = alpha (alpha + n - 2) at alpha = 4-n turns the shot into
        # the subsolution profile: mismatch equals the criterion margin
        p = ConeParams(9, 4)
        root = find_root(p)
        lam = (4.0 - 9.0) * (4.0 - 9.0 + 9.0 - 2.0)
        d, zeros = shoot(p, lam, root=root)
        _, rhs = boundary_rhs(p, root)
        margin = stability_margin(p, 4.0 - 9.0, root)
        assert zeros == 0
        assert math.isclose(d - rhs, margin, rel_tol=1e-7, abs_tol=1e-9)

    def test_oscillation_direction(self):
        # zero counts are monotone in lambda: disconjugate far below the
        # first eigenvalue, oscillatory above the second
        p = ConeParams(9, 4)
        _, zeros_low = shoot(p, -240.0)
        assert zeros_low == 0
        lam2 = find_eigenvalue(p, index=1).lam
        _, zeros_high = shoot(p, lam2 + 2.0)
        assert zeros_high >= 1

    def test_launch_insensitive(self):
        for (n, k) in [(7, 3), (12, 10)]:
            p = ConeParams(n, k)
            root = find_root(p)
            a = find_eigenvalue(p, cfg=ShootingConfig(t_launch=1e-6), root=root)
            b = find_eigenvalue(p, cfg=ShootingConfig(t_launch=5e-7), root=root)
            assert abs(a.lam - b.lam) <= 1e-11


class TestFindEigenvalue:
    def test_table_values(self):
        for (n, k, neg_lam) in [(7, 1, 5.698), (12, 10, 10.531), (10, 8, 8.536)]:
            res = find_eigenvalue(ConeParams(n, k))
            assert abs(-res.lam - neg_lam) < 5e-4
            assert res.zeros_interior == 0
            assert res.bc_residual <= 1e-9

    def test_boundary_residual_contract_across_family(self):
        for n in (5, 9, 14, 20):
            for k in (1, n // 2, n - 2):
                assert find_eigenvalue(ConeParams(n, k)).bc_residual <= 1e-9

    def test_gamma_from_table_seven_one(self):
        res = find_eigenvalue(ConeParams(7, 1))
        # gamma+ = -5/2 + sqrt(25/4 + lambda1)
        want = -2.5 + math.sqrt(6.25 + res.lam)
        assert math.isclose(res.gamma_plus, want, rel_tol=1e-12)
        assert abs(res.gamma_plus - (-1.757)) < 5e-4

    def test_higher_index_ordering(self):
        p = ConeParams(7, 2)
        l0 = find_eigenvalue(p, index=0)
        l1 = find_eigenvalue(p, index=1)
        l2 = find_eigenvalue(p, index=2)
        assert l0.lam < l1.lam < l2.lam
        assert (l0.zeros_interior, l1.zeros_interior, l2.zeros_interior) == (0, 1, 2)

    def test_bracket_widening_small_n(self):
        res = find_eigenvalue(ConeParams(3, 1))
        assert res.lam < -((3 - 2) / 2.0) ** 2  # unstable cone

    def test_mode_monotonicity(self):
        p = ConeParams(8, 4)
        base = find_eigenvalue(p, Mode(0, 0)).lam
        assert find_eigenvalue(p, Mode(1, 0)).lam >= base - 1e-10
        assert find_eigenvalue(p, Mode(0, 1)).lam >= base - 1e-10
        assert find_eigenvalue(p, Mode(0, 2)).lam >= find_eigenvalue(p, Mode(0, 1)).lam - 1e-10
        assert find_eigenvalue(p, Mode(2, 0)).lam >= find_eigenvalue(p, Mode(1, 0)).lam - 1e-10

    def test_first_eigenfunction_positive(self):
        for (n, k) in [(7, 1), (10, 5), (13, 11)]:
            res = find_eigenvalue(ConeParams(n, k))
            assert res.zeros_interior == 0

    def test_exhausted_bracket(self):
        # eigenvalues grow like index^2; two widenings from a tiny bracket
        # cannot reach the 50th one
        cfg = ShootingConfig(lambda_bracket=(-1.0, -0.5))
        with pytest.raises(BracketExhausted):
            find_eigenvalue(ConeParams(7, 1), cfg=cfg, index=50)


class TestIndicialRoots:
    def test_lambda_zero(self):
        gm, gp = indicial_roots(0.0, 9)
        assert gm == 2.0 - 9.0 and gp == 0.0

    def test_double_root(self):
        n = 8
        lam = -((n - 2) / 2.0) ** 2
        gm, gp = indicial_roots(lam, n)
        assert gm == gp == (2.0 - n) / 2.0

    def test_complex_flag(self):
        assert indicial_roots(-10.0, 8) is None

    def test_sum_identity(self):
        for (lam, n) in [(-5.698, 7), (-8.5, 10), (-0.3, 12)]:
            gm, gp = indicial_roots(lam, n)
            assert abs(gm + gp - (2.0 - n)) < 1e-10
            assert abs(gm * gp - (-lam)) < 1e-9  # product = -(lambda)


class TestFdOracle:
    def test_matches_shooting(self):
        for (n, k) in [(7, 1), (9, 4)]:
            p = ConeParams(n, k)
            lam_shoot = find_eigenvalue(p).lam
            l1 = fd_oracle_lambda1(p, grid_n=2000)
            l2 = fd_oracle_lambda1(p, grid_n=4000)
            rich = (4.0 * l2 - l1) / 3.0
            assert abs(rich - lam_shoot) <= 1e-4 * abs(lam_shoot)

    def test_negative_for_all(self):
        for (n, k) in [(3, 1), (6, 2), (7, 5), (12, 6)]:
            assert fd_oracle_lambda1(ConeParams(n, k), grid_n=800) < 0.0

    def test_second_order_convergence(self):
        p = ConeParams(8, 3)
        exact = find_eigenvalue(p).lam
        errs = [abs(fd_oracle_lambda1(p, grid_n=g) - exact)
                for g in (500, 1000, 2000)]
        orders = [math.log2(errs[i] / errs[i + 1]) for i in range(2)]
        for o in orders:
            assert 1.7 < o < 2.3

    def test_translation_modes_are_exact_zero_modes(self):
        # coordinate translations produce degree-0 Jacobi fields, so the
        # first eigenvalue of the (1,0) and (0,1) modes vanishes exactly
        p = ConeParams(8, 4)
        assert abs(find_eigenvalue(p, Mode(0, 1)).lam) < 1e-9
        assert abs(find_eigenvalue(p, Mode(1, 0)).lam) < 1e-9
        rich = (4.0 * fd_oracle_lambda1(p, Mode(0, 1), grid_n=4000)
                - fd_oracle_lambda1(p, Mode(0, 1), grid_n=2000)) / 3.0
        assert abs(rich) < 1e-6

    def test_q_mode_dirichlet_path(self):
        # a genuinely nonzero q-mode eigenvalue agrees with the oracle
        p = ConeParams(8, 4)
        lam_shoot = find_eigenvalue(p, Mode(0, 2)).lam
        l1 = fd_oracle_lambda1(p, Mode(0, 2), grid_n=2000)
        l2 = fd_oracle_lambda1(p, Mode(0, 2), grid_n=4000)
        rich = (4.0 * l2 - l1) / 3.0
        assert abs(rich - lam_shoot) <= 2e-4 * max(1.0, abs(lam_shoot))

    def test_grid_minimum(self):
        with pytest.raises(ValueError):
            fd_oracle_lambda1(ConeParams(7, 1), grid_n=100)


class TestVerdictDuality:
    def test_threshold_equivalence(self):
        for n in range(3, 16):
            for k in range(1, n - 1):
                p = ConeParams(n, k)
                lam = find_eigenvalue(p).lam
                stable = lam > -((n - 2) / 2.0) ** 2
                assert stable == (verdict(p).verdict is Verdict.STRICTLY_STABLE)


class TestFamilyScan:
    def test_flags_hold_to_twelve(self):
        rep = family_scan((7, 12))
        assert all(rep.flags.values()), rep.flags

    def test_row_ordering_and_gamma_consistency(self):
        rep = family_scan((6, 8))
        keys = [(r.n, r.k) for r in rep.rows]
        assert keys == sorted(keys)
        for r in rep.rows:
            if r.gamma_plus is not None:
                got = indicial_roots(r.lambda1, r.n)
                assert abs(got[1] - r.gamma_plus) < 1e-10

    def test_range_validation(self):
        with pytest.raises(ValueError):
            family_scan((2, 10))
        with pytest.raises(ValueError):
            family_scan((7, 41))

    def test_thread_determinism(self, monkeypatch):
        monkeypatch.setenv("CONELAB_THREADS", "4")
        a = family_scan((7, 9))
        monkeypatch.setenv("CONELAB_THREADS", "1")
        b = family_scan((7, 9))
        assert a.rows == b.rows
