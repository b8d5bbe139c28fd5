import cmath
import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from genbessel import besselk
from genbessel.besselk import (
    BesselParamsKZW, BesselParamsMuK, f_profile, k_classical, k_zw_integral, k_zw_mellin_barnes, kzw_at_zero,
    kzw_summand_array, mu_k, mu_k_mellin_barnes, muk_F_array, muk_f0,
)
from genbessel.complexfn import gamma
from genbessel.errors import DefinitionError, DomainError
from genbessel.hypergeom import f11

# mpmath references (besselk, and quadrature / hyp1f2 at 30 digits)
K_075_1 = 0.51577530069591862858
K_C = complex(0.12328199204280999205, 0.010681069127088612296)
K_12_30 = 2.1834261213393286842e-14
K_03_005 = 3.8119663367691106986
K_CPLX = complex(-0.02392182651975529528, 0.052155895098263191544)
KZW_075_05_1 = 0.41900577464534468421
KZW_03_C_2 = complex(0.087969609266216692996, -0.031155516326764117978)
KZW_12_05_08 = 0.82943131931806324692
KZW_CPLX = complex(0.069381055318215334083, -0.045475374856605207964)
MUK_04_06_03_1 = -0.25439966187752172656
MUK_04_06_03_20 = -2.7747452589380872809e-8
MUK_CPLX = complex(-0.075829392937748815217, -0.014877167532843637439)
MUK_Z0 = 0.20144501315322818124  # limit z -> 0 at (mu, lam, x) = (0.4, 0.3, 1)
MUK_Z1E5 = 0.20143928061755194916  # z = 1e-5
MUK_Z2 = 1.8938516625584157766  # limit z -> 2 at x = 1.5
MUK_Z1 = -0.7272708095522901143  # limit z -> 1 at x = 1

KZW_GRID = list(itertools.product((0.3, 0.75, 1.2), (0.0, 0.5, 0.5 + 0.25j), (0.8, 1.0, 2.0)))


def rel(a, b):
    return abs(a - b) / abs(b)


def muk(mu, z, lam, x, **kw):
    return mu_k(BesselParamsMuK(mu, z, lam, x), **kw)


class TestKClassical:
    def test_half_order_closed_form(self):
        assert abs(k_classical(0.5, 1.0) - math.sqrt(math.pi / 2) * math.exp(-1)) <= 1e-10

    def test_even_in_order(self):
        z = 0.7 + 0.3j
        assert abs(k_classical(z, 2.0) - k_classical(-z, 2.0)) <= 1e-15 * abs(k_classical(z, 2.0))

    def test_mellin_barnes_second_route(self):
        mb = k_zw_mellin_barnes(BesselParamsKZW(0.75, 0, 1.5))
        assert rel(k_classical(0.75, 1.5), mb) <= 1e-8

    def test_reference_values(self):
        assert rel(k_classical(0.75, 1.0), K_075_1) < 1e-14
        assert rel(k_classical(0.7 + 0.3j, 2.0), K_C) < 1e-14
        assert rel(k_classical(1.2, 30.0), K_12_30) < 1e-13
        assert rel(k_classical(0.3, 0.05), K_03_005) < 1e-14
        assert rel(k_classical(2.5 + 1j, 3 - 1j), K_CPLX) < 1e-13

    def test_domain(self):
        with pytest.raises(DomainError):
            k_classical(0.5, -1.0)
        with pytest.raises(DomainError):
            k_classical(0.5, 0.0)

    def test_underflow_region_is_zero(self):
        assert k_classical(0.5, 800.0) == 0

    def test_recurrence(self):
        # K_{z+1} = K_{z-1} + (2z/x) K_z
        z, x = 0.35 + 0.2j, 1.7
        lhs = k_classical(z + 1, x)
        assert rel(lhs, k_classical(z - 1, x) + 2 * z / x * k_classical(z, x)) <= 1e-13


class TestKZW:
    def test_w_zero_reduces(self):
        assert abs(k_zw_integral(BesselParamsKZW(0.6, 0, 1.2)) - k_classical(0.6, 1.2)) <= 1e-9

    def test_w_zero_integral_route(self):
        # the 4-denominator form of the u-integral reproduces K_z at w = 0
        z, x = 0.6, 1.2
        X = np.array([x], dtype=complex)
        assert rel(besselk._kzw_integral_array(z, 0, X)[0], k_classical(z, x)) <= 1e-12

    def test_even_in_w(self):
        a = k_zw_integral(BesselParamsKZW(0.5, 0.7, 1.0))
        b = k_zw_integral(BesselParamsKZW(0.5, -0.7, 1.0))
        assert abs(a - b) <= 1e-15

    def test_integral_vs_mellin_barnes(self):
        p = BesselParamsKZW(0.75, 0.5, 1.0)
        assert rel(k_zw_integral(p), k_zw_mellin_barnes(p)) <= 1e-7

    def test_reference_values(self):
        for (z, w, x), ref in (((0.75, 0.5, 1.0), KZW_075_05_1), ((0.3, 0.5 + 0.25j, 2.0), KZW_03_C_2),
                               ((1.2, 0.5, 0.8), KZW_12_05_08), ((0.6 + 0.2j, 0.9, 1.5 + 0.3j), KZW_CPLX)):
            p = BesselParamsKZW(z, w, x)
            assert rel(k_zw_integral(p), ref) < 1e-13
            assert rel(k_zw_mellin_barnes(p), ref) < 1e-13

    def test_contour_independence(self):
        p = BesselParamsKZW(0.3, 0.4, 1.1)
        a = k_zw_mellin_barnes(p, c=1.3)
        b = k_zw_mellin_barnes(p, c=2.3)
        assert abs(a - b) <= 1e-8

    def test_small_x_leading_behaviour(self):
        z, w, x = 0.6, 0.5, 1e-3
        v = k_zw_mellin_barnes(BesselParamsKZW(z, w, x))
        lead = 0.5 * gamma(z) * (x / 2) ** (-z) * f11(z, 0.5, -w * w / 4).value
        assert abs(v / lead - 1) <= 1e-2

    def test_two_method_grid(self):
        worst = 0.0
        for z, w, x in KZW_GRID:
            p = BesselParamsKZW(z, w, x)
            mb = k_zw_mellin_barnes(p)
            worst = max(worst, abs(k_zw_integral(p) - mb) / abs(mb))
        assert worst <= 1e-7

    def test_exponential_decay(self):
        z, w, x = 0.75, 0.5, 1.0
        vals = [abs(k_zw_integral(BesselParamsKZW(z, w, n * x))) for n in range(1, 21)]
        C = vals[0] / math.exp(-x / 2)
        for n, v in enumerate(vals, start=1):
            assert v <= C * math.exp(-n * x / 2)

    def test_domains(self):
        with pytest.raises(DomainError):
            k_zw_integral(BesselParamsKZW(0.5, 0.3, 1 + 1.2j))
        with pytest.raises(DomainError):
            k_zw_mellin_barnes(BesselParamsKZW(0.5, 0.3, -1.0))
        with pytest.raises(DomainError):
            k_zw_mellin_barnes(BesselParamsKZW(0.5, 0.3, 1.0), c=0.4)
        with pytest.raises(DomainError):
            BesselParamsKZW(0.5, float("nan"), 1.0)

    def test_summand_small_x_and_limit(self):
        z, w = 0.75, 0.3
        X = np.array([1e-8, 0.1, 0.25, 0.3, 1.0])
        vals = kzw_summand_array(z, w, X)
        for Xi, v in zip(X[1:], vals[1:]):
            ref = (Xi / 2) ** z * k_zw_mellin_barnes(BesselParamsKZW(z, w, Xi))
            assert rel(v, ref) <= 1e-12
        assert abs(vals[0] - kzw_at_zero(z, w)) <= 1e-5
        assert kzw_at_zero(z, w) == pytest.approx(0.5 * gamma(z) * f11(z, 0.5, -w * w / 4).value)


class TestMuK:
    def test_reduces_to_k(self):
        assert rel(muk(-0.4, 0.4, 0.0, 1.3), k_classical(0.4, 1.3)) <= 1e-9

    def test_reduces_to_power_times_k(self):
        assert rel(muk(-0.4, 0.4, 0.7, 1.3), 1.3 ** 0.7 * k_classical(0.4, 1.3)) <= 1e-9

    def test_reference_values(self):
        assert rel(muk(0.4, 0.6, 0.3, 1.0), MUK_04_06_03_1) < 1e-12
        assert rel(muk(0.4, 0.6, 0.3, 20.0), MUK_04_06_03_20) < 1e-9
        assert rel(muk(0.2 + 0.1j, 0.35, 0.5, 2.5), MUK_CPLX) < 1e-12

    def test_second_route(self):
        for args in ((0.4, 0.6, 0.3, 1.0), (0.4, 0.6, 0.3, 5.0), (0.2 + 0.1j, 0.35, 0.5, 2.5)):
            p = BesselParamsMuK(*args)
            assert rel(mu_k_mellin_barnes(p), mu_k(p)) <= 1e-9

    def test_z_zero_limit(self):
        # offset average centred at 0 plus the first-order shift, against the direct formula
        lim = muk(0.4, 1e-5, 0.3, 1.0, path="limit")
        assert abs(lim - muk(0.4, 1e-5, 0.3, 1.0, path="direct")) <= 1e-6
        assert rel(muk(0.4, 0.0, 0.3, 1.0), MUK_Z0) <= 1e-9
        # the limit itself sits 5.7e-6 away from the z = 1e-5 value (slope -0.573)
        assert abs(MUK_Z0 - MUK_Z1E5) > 1e-6
        assert rel(muk(0.4, 1e-5, 0.3, 1.0, path="direct"), MUK_Z1E5) <= 1e-9

    def test_integer_limits(self):
        assert rel(muk(0.4, 1.0, 0.3, 1.0), MUK_Z1) <= 1e-9
        assert rel(muk(0.4, 2.0, 0.3, 1.5), MUK_Z2) <= 1e-9

    def test_switchover_continuity(self):
        for z in (1 - 1e-3, 1 + 1e-3):
            lim = muk(0.4, z, 0.3, 1.0, path="limit")
            direct = muk(0.4, z, 0.3, 1.0, path="direct")
            assert abs(lim - direct) <= 1e-5

    def test_direct_path_rejects_integer(self):
        with pytest.raises(DomainError):
            muk(0.4, 1.0, 0.3, 1.0, path="direct")

    def test_definition_error(self):
        with pytest.raises(DefinitionError):
            BesselParamsMuK(0.2, 0.5, -0.7, 1.0)
        with pytest.raises(DefinitionError):
            muk_F_array(-1.0, 0.5, 0.5, np.array([1.0]))

    def test_array_paths_agree(self):
        X = np.array([1.5, 2.5, 30.0, 45.0])
        auto = muk_F_array(0.4, 0.35, 0.3, X)
        mb = muk_F_array(0.4, 0.35, 0.3, X, method="mellin_barnes")
        series = muk_F_array(0.4, 0.35, 0.3, X[:2], method="series")
        np.testing.assert_allclose(auto, mb, rtol=1e-9)
        np.testing.assert_allclose(series, mb[:2], rtol=1e-9)

    def test_exponentially_small_case(self):
        # mu + z = 1: every algebraic asymptotic coefficient vanishes
        _, c = besselk.muk_asymptotic_coefficients(0.4, 0.6, 0.3)
        assert np.all(c == 0)
        X = np.array([10.0, 20.0, 45.0, 100.0])  # mpmath references at 150 digits
        ref = np.array([-0.000555953581530482, -5.53634464879773e-8, -1.89984083870453e-18,
                        -5.97538491546705e-42])
        vals = muk_F_array(0.4, 0.6, 0.3, X)
        assert np.all(np.abs(vals[:2] - ref[:2]) <= 1e-10 * np.abs(ref[:2]))
        # beyond x ~ 40 only an absolute floor far below f(0) is resolved
        assert np.all(np.abs(vals[2:] - ref[2:]) <= 1e-17)


class TestProfile:
    p = BesselParamsMuK(0.4, 0.6, 0.3, 1.0)

    def test_value_at_zero(self):
        f0 = muk_f0(0.4, 0.6, 0.3)
        ref = 2 ** 0.3 * gamma(1.2) * gamma(0.6) / gamma(0.2)
        assert abs(f0 - ref) <= 1e-14
        assert abs(f_profile(self.p, 1e-9) - f0) <= 1e-5
        assert f_profile(self.p, 0.0) == f0

    def test_decay_bound(self):
        # f(t) = O(t^{-2 lam - 2 mu - 1}); at this point the decay is even exponential
        t = np.array([5.0, 10.0, 20.0, 40.0])
        scaled = np.abs(f_profile(self.p, t)) * t ** (2 * 0.3 + 2 * 0.4 + 1)
        assert np.all(np.diff(scaled) < 0)

    def test_decay_exponent(self):
        # sharp power law where the leading asymptotic coefficient is nonzero
        p = BesselParamsMuK(0.4, 0.35, 0.3, 1.0)
        t = 50.0
        slope = math.log(abs(f_profile(p, 2 * t) / f_profile(p, t))) / math.log(2)
        assert abs(slope + (2 * 0.3 + 2 * 0.4 + 1)) <= 0.05

    def test_definition_at_one(self):
        assert abs(f_profile(self.p, 1.0) - mu_k(self.p) * 0.5 ** (0.6 - 0.3)) <= 1e-14

    def test_negative_t(self):
        with pytest.raises(DomainError):
            f_profile(self.p, -1.0)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.05, 1.9), st.floats(0.3, 4.0))
def test_k_w_zero_property(z, x):
    p = BesselParamsKZW(z, 0, x)
    assert rel(k_classical(z, x), k_zw_mellin_barnes(p)) <= 1e-9


@settings(max_examples=20, deadline=None)
@given(st.floats(0.1, 1.4), st.floats(-0.8, 0.8), st.floats(0.5, 3.0))
def test_kzw_two_methods_property(z, w, x):
    p = BesselParamsKZW(z, w, x)
    mb = k_zw_mellin_barnes(p)
    assert abs(k_zw_integral(p) - mb) <= 1e-8 * max(abs(mb), 1e-3 * abs(k_classical(z, x)))


@settings(max_examples=20, deadline=None)
@given(st.floats(0.1, 0.9), st.floats(0.0, 1.0), st.floats(0.3, 6.0))
def test_muk_reduction_property(z, lam, x):
    if abs(lam + 0.5 - z - round(lam + 0.5 - z)) < 1e-6 and lam + 0.5 - z <= 0.5:
        return  # mu + lam + 1/2 = 0 is excluded by the definition
    v = muk(-z, z, lam, x)
    assert rel(v, cmath.exp(lam * math.log(x)) * k_classical(z, x)) <= 1e-9
