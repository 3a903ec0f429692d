"""Asymptotic bound harness tests."""

import math

import numpy as np
import pytest

from conelab.cone import ConeParams, find_root
from conelab.errors import RangeUnsupported
from conelab.lemmas import (
    BoundCheck,
    estimate_z0,
    limit_profile_u,
    overshoot_check,
    overshoot_terminal_point,
    phi_c_eval,
    proof_constants_check,
    root_bound_check,
)


class TestBoundCheck:
    def test_relation_semantics(self):
        assert BoundCheck("a", {}, 1.0, 2.0, ">").passed
        assert not BoundCheck("a", {}, 1.0, 0.5, ">").passed
        assert BoundCheck("a", {}, 1.0, 0.5, "<").passed
        with pytest.raises(ValueError):
            BoundCheck("a", {}, 1.0, 0.5, ">=")


class TestRootBound:
    def test_half_ratio(self):
        chk = root_bound_check(ConeParams(60, 30))
        assert chk.passed
        assert chk.claimed == 0.5 + 3.0 / (5.0 * math.sqrt(60))

    def test_high_ratio_band(self):
        chk = root_bound_check(ConeParams(64, 57))
        assert chk.passed and chk.parameters["c"] == 2.0 / 5.0

    def test_top_band(self):
        chk = root_bound_check(ConeParams(96, 88))
        assert chk.passed and chk.parameters["c"] == 9.0 / 25.0

    def test_range_guard(self):
        with pytest.raises(RangeUnsupported):
            root_bound_check(ConeParams(50, 25))
        with pytest.raises(RangeUnsupported):
            root_bound_check(ConeParams(60, 10))


class TestLimitProfile:
    def test_value_at_zero(self):
        assert abs(limit_profile_u(0.0) - math.sqrt(2.0 / math.pi)) < 1e-12

    def test_riccati_identity_at_zero(self):
        # u' = -u^2 - xi u, so u'(0) = -u(0)^2 = -2/pi
        h = 1e-6
        up = (limit_profile_u(h) - limit_profile_u(-h)) / (2.0 * h)
        assert math.isclose(up, -2.0 / math.pi, rel_tol=1e-8)

    def test_left_asymptote(self):
        # u(xi) + xi = -1/xi + O(xi^-3): the deviation at xi = -8 is 0.121,
        # shrinking like 1/|xi| along the ladder
        for xi in (-8.0, -16.0, -64.0, -1024.0):
            dev = limit_profile_u(xi) + xi
            assert abs(dev) <= 1.05 / abs(xi)
            assert abs(dev + 1.0 / xi) <= 3.0 / abs(xi) ** 3

    def test_solves_limit_riccati(self):
        for xi in (-2.0, -0.5, 0.0, 0.7, 2.5):
            h = 1e-5
            up = (limit_profile_u(xi + h) - limit_profile_u(xi - h)) / (2 * h)
            u = limit_profile_u(xi)
            assert abs(up + u * u + xi * u) < 1e-8


class TestEstimateZ0:
    def test_window_at_half(self):
        z0 = estimate_z0(2000, 0.5)
        assert 0.74 <= z0 <= 0.80
        # the limit equation's universal first zero lies in [0.76, 0.78]
        assert 0.74 <= z0 <= 0.79

    def test_ratio_independence(self):
        za = estimate_z0(2000, 1.0 / 3.0)
        zb = estimate_z0(2000, 2.0 / 3.0)
        assert abs(za - zb) <= 0.02

    def test_ladder_convergence(self):
        vals = [estimate_z0(m, 0.5) for m in (500, 1000, 2000)]
        assert abs(vals[0] - vals[1]) <= 0.02
        assert abs(vals[1] - vals[2]) <= 0.02
        # drift shrinks with n
        assert abs(vals[1] - vals[2]) <= abs(vals[0] - vals[1]) + 1e-12

    def test_guards(self):
        with pytest.raises(RangeUnsupported):
            estimate_z0(400, 0.5)
        with pytest.raises(RangeUnsupported):
            estimate_z0(1000, 0.2)


class TestPhiC:
    def test_paper_thresholds(self):
        assert phi_c_eval(7.0 / 8.0, 3.0 / 5.0) > 91.0 / 1090.0
        assert phi_c_eval(9.0 / 10.0, 2.0 / 5.0) > 1.0 / 10.0
        assert phi_c_eval(15.0 / 16.0, 9.0 / 25.0) > 91.0 / 1000.0

    def test_positive(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            assert phi_c_eval(rng.uniform(0.02, 0.98), rng.uniform(-2, 2)) > 0.0

    def test_domain(self):
        with pytest.raises(ValueError):
            phi_c_eval(0.0, 0.5)


class TestOvershoot:
    def test_basic_band(self):
        assert overshoot_check(ConeParams(60, 40)).passed

    def test_full_bands(self):
        for n in (60, 80, 100):
            for k in range(int(math.ceil(n / 2)), n - 11):
                assert overshoot_check(ConeParams(n, k)).passed

    def test_refined_band(self):
        chk = overshoot_check(ConeParams(200, 192))
        assert chk.passed and chk.name == "overshoot_bound_refined"

    def test_form_equivalence(self):
        rng = np.random.default_rng(4)
        for _ in range(20):
            n = int(rng.integers(60, 140))
            k = int(rng.integers(n // 2 + 1, n - 11))
            pars = ConeParams(n, k)
            s = find_root(pars).s_nk
            quad_ok = s < k / n or (n * s - k) ** 2 <= 2.0 * n * (1.0 - s)
            star_ok = s < k / n or s < overshoot_terminal_point(pars)
            assert quad_ok == star_ok

    def test_range_guard(self):
        with pytest.raises(RangeUnsupported):
            overshoot_check(ConeParams(100, 30))
        with pytest.raises(RangeUnsupported):
            overshoot_check(ConeParams(100, 92))  # refined band needs n >= 16 d


class TestProofConstants:
    def test_battery_passes(self):
        battery = proof_constants_check()
        assert len(battery) >= 10
        for chk in battery:
            assert chk.passed, f"{chk.name}: {chk.computed} vs {chk.claimed}"

    def test_exp_bound_present(self):
        names = {c.name for c in proof_constants_check()}
        assert "exp_105_bound" in names
        assert "axisymmetric_edge_margin" in names
