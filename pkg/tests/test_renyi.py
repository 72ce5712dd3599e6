import math
from fractions import Fraction

import numpy as np
import pytest

from itermap import exact, renyi


class TestConnectedCount:
    def test_small(self):
        assert renyi.connected_count(1) == 1
        assert renyi.connected_count(2) == 3
        assert renyi.connected_count(3) == 17

    @pytest.mark.parametrize("d", [1, 2, 3, 4, 5, 6, 7])
    def test_matches_brute_force(self, d):
        assert renyi.connected_count(d) == exact.enumerate_summary(d).connected_count

    def test_count_factors_through_ramanujan_r(self):
        # |U_d| = d^(d-1) R_d exactly; R_d is the quantity behind kappa_d
        for d in (2, 3, 7, 20):
            r = renyi._ramanujan_r_exact(d)
            assert renyi.connected_count(d) == d ** (d - 1) * r

    def test_asymptotic(self):
        # |U_d| / (d^d sqrt(pi/2d)) = R_d / sqrt(pi d / 2)
        for d in (100, 1000, 10000):
            ratio = renyi._ramanujan_r_float(d) / math.sqrt(math.pi * d / 2)
            assert abs(ratio - 1) <= 5 / math.sqrt(d)


class TestKappa:
    def test_small(self):
        assert renyi.kappa_exact(1) == 1
        assert renyi.kappa_exact(2) == Fraction(4, 3)
        assert renyi.kappa_exact(3) == Fraction(27, 17)

    @pytest.mark.parametrize("d", [2, 3, 4, 5, 6, 7])
    def test_matches_brute_force_average(self, d):
        s = exact.enumerate_summary(d)
        assert renyi.kappa_exact(d) == Fraction(s.connected_cycle_total, s.connected_count)

    @pytest.mark.parametrize("d", [1, 2, 5, 17, 50, 200, 700, 2000])
    def test_float_matches_exact(self, d):
        ke = renyi.kappa_exact(d)
        kf = renyi.kappa_float(d)
        assert abs(kf - float(ke)) <= 1e-12 * float(ke)

    def test_asymptotic_band(self):
        for d in (100, 1000, 10000):
            ratio = renyi.kappa_float(d) / math.sqrt(2 * d / math.pi)
            assert abs(ratio - 1) <= 5 / math.sqrt(d)

    def test_dispatch(self):
        assert isinstance(renyi.kappa(10), Fraction)
        assert isinstance(renyi.kappa(10, exact_ceiling=5), float)


class TestQFactor:
    def test_d1(self):
        assert math.isclose(renyi.q_factor(1), math.exp(-1), rel_tol=1e-13)

    def test_d2(self):
        assert math.isclose(renyi.q_factor(2), 3 * math.exp(-2), rel_tol=1e-13)

    def test_limit_half(self):
        q = renyi.q_factor(10**4)
        assert abs(q - 0.5) <= 0.01

    def test_range(self):
        for d in (1, 2, 10, 100, 10**5):
            assert 0 < renyi.q_factor(d) < 1

    def test_high_precision_agrees(self):
        for d in (3, 50, 400):
            assert math.isclose(renyi.q_factor(d, prec=100), renyi.q_factor(d), rel_tol=1e-12)

    def test_exact_S(self):
        assert renyi.s_exact(2) == 3
        assert renyi.s_exact(3) == Fraction(17, 2)  # 1 + 3 + 9/2


class TestCCoeff:
    def test_c1_zero(self):
        c, g = renyi.c_coeff(1)
        assert c == 0.0 and g == 0

    def test_c2(self):
        c, g = renyi.c_coeff(2)
        assert math.isclose(c, math.exp(-2) / 2, rel_tol=1e-13)
        assert g == Fraction(1, 2)

    def test_large_d_envelope(self):
        d = 10**4
        c, _ = renyi.c_coeff(d, exact_ceiling=0)
        assert abs(c * math.sqrt(2 * math.pi * d) - 1) <= 0.02

    def test_table_agrees_with_scalar(self):
        ct = renyi.c_table(600)
        for d in (1, 2, 3, 10, 100, 600):
            c, _ = renyi.c_coeff(d, exact_ceiling=0)
            assert abs(ct[d - 1] - c) <= 1e-11 * max(c, 1e-3)

    def test_table_nonnegative(self):
        ct = renyi.c_table(5000)
        assert ct.min() >= 0.0
        assert ct[0] == 0.0


def test_renyi_table_build():
    tab = renyi.renyi_table(50, exact_upto=10)
    assert tab.N == 50 and tab.exact_upto == 10
    assert tab.U[2] == 17
    assert tab.kappa_exact[1] == Fraction(4, 3)
    assert tab.gamma[1] == Fraction(1, 2)
    assert len(tab.c) == 50
    row = tab.row(5)
    assert row["U"] == 1569
    assert 0 < tab.row(30)["kappa"] < 30
