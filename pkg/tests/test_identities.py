import math

import pytest
from hypothesis import given, settings, strategies as st

from genbessel.errors import DomainGate, PoleGate
from genbessel.hypergeom import f11
from genbessel.identities import (
    REGISTRY, LemmaKind, Side, SummandFamily, TailMode, TheoremId, TheoremParams, TruncationPolicy,
    a_factor, constant_mismatch, dkm_rhs_after_kummer, dkm_rhs_before_kummer, eval_side, lemma_check,
    lemma_kzw_closed_form, muk_z_zero_constant_block, muk_z_zero_limit_block, poisson_cross_check, verify,
)
from genbessel.identities import theorems as T
from genbessel import besselk
from genbessel.complexfn import gamma

PI = math.pi
P = TheoremParams
POLICY = TruncationPolicy()
BETA = PI * PI / 2


def sides(theorem, params, policy=POLICY):
    return eval_side(theorem, Side.LHS, params, policy)[0], eval_side(theorem, Side.RHS, params, policy)[0]


class TestAFactor:
    def test_w_zero_is_two(self):
        for n, z, x in ((1, 0.75, 1.0), (7, 0.3 + 0.4j, 2 - 0.5j), (40, 2.5, 0.1)):
            assert a_factor(n, z, 0, x) == 2

    def test_swap_symmetry(self):
        n, d, z, w, alpha = 2, 3, 1.3, 0.5, 2.0
        beta = PI * PI / alpha
        lhs = a_factor(n, z / 2, 1j * w, 2 * d * alpha)
        rhs = a_factor(d, z / 2, w, 2 * n * beta)
        assert abs(lhs - rhs) <= 1e-14 * abs(rhs)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(1, 50), st.floats(0.1, 2.0), st.floats(-1, 1), st.floats(-1.5, 1.5),
           st.floats(0.1, 3.0))
    def test_even_in_x(self, n, z, wr, wi, x):
        w = complex(wr, wi)
        a, b = a_factor(n, z, w, x), a_factor(n, z, w, -x)
        assert abs(a - b) <= 1e-13 * max(1.0, abs(a))

    def test_large_n_limit(self):
        z, w, x = 0.75, 0.5 + 0.2j, 1.0
        limit = 2 * f11(0.5 + z, 0.5, w * w / 4).value
        assert abs(a_factor(10 ** 4, z, w, x) - limit) <= 1e-4

    def test_singular_point(self):
        with pytest.raises(Exception):
            a_factor(1, 0.75, 0.5, -2j * PI)


class TestVerifyExamples:
    def test_watson(self):
        r = verify(TheoremId.WATSON_CLASSICAL, P(x=1, z=0.75), POLICY, 1e-8)
        assert r.passed and r.rel_residual <= 1e-8
        assert r.error is None

    def test_ramanujan_guinand_symmetric_point(self):
        lhs, rhs = sides(TheoremId.RAMANUJAN_GUINAND, P(alpha=PI, beta=PI, z=1.3))
        assert lhs == 0 and rhs == 0

    def test_dkm(self):
        r = verify(TheoremId.DKM_GENERALIZED, P(alpha=2, beta=BETA, z=1.3, w=0.5), POLICY, 1e-6)
        assert r.passed

    def test_kzw_collapse_at_w_zero(self):
        k = verify(TheoremId.WATSON_KZW, P(x=1, z=0.75, w=0), POLICY, 1e-8)
        c = verify(TheoremId.WATSON_CLASSICAL, P(x=1, z=0.75), POLICY, 1e-8)
        assert k.lhs == c.lhs and k.rhs == c.rhs
        assert k.rel_residual == c.rel_residual

    def test_kzw_continued(self):
        r = verify(TheoremId.WATSON_KZW_CONTINUED, P(x=1, z=-0.6, w=0.4, M=1), POLICY, 1e-6)
        assert r.passed

    def test_muk(self):
        r = verify(TheoremId.WATSON_MUK, P(mu=0.4, lam=0.3, z=0.6, x=1), POLICY, 1e-6)
        assert r.passed and not r.flags

    def test_muk_z_zero_and_watson_k_zero(self):
        assert verify(TheoremId.MUK_Z_ZERO, P(mu=0.4, lam=0.3, x=1), POLICY, 1e-6).passed
        assert verify(TheoremId.WATSON_K_ZERO, P(x=1), POLICY, 1e-8).passed

    def test_string_ids(self):
        a = verify("watson", P(x=1, z=0.75))
        b = verify(TheoremId.WATSON_CLASSICAL, P(x=1, z=0.75))
        assert a.lhs == b.lhs and a.rhs == b.rhs

    def test_report_schema(self):
        d = verify(TheoremId.WATSON_CLASSICAL, P(x=1, z=0.75)).to_dict(timestamps=False)
        for key in ("theorem", "params", "lhs", "rhs", "abs_residual", "rel_residual", "series", "passed"):
            assert key in d
        assert set(d["lhs"]) == {"re", "im"}
        assert all(set(s) == {"label", "terms", "tail"} for s in d["series"])

    def test_passed_matches_tolerance(self):
        r = verify(TheoremId.WATSON_KZW, P(x=1, z=0.75, w=0.3), TruncationPolicy(6, TailMode.FIXED_N), 1e-8)
        assert r.passed == (r.rel_residual <= 1e-8)
        assert not r.passed


class TestContinuationOverlap:
    def test_kzw(self):
        p = P(x=1, z=0.75, w=0.4, M=1)
        lc, rc = sides(TheoremId.WATSON_KZW_CONTINUED, p)
        lb, rb = sides(TheoremId.WATSON_KZW, p.replace(M=None))
        assert abs(lc - lb) <= 1e-9 * max(1, abs(lb))
        assert abs(rc - rb) <= 1e-9 * max(1, abs(rb))

    @pytest.mark.parametrize("M", [1, 2])
    def test_muk(self, M):
        p = P(mu=0.4, lam=0.3, z=0.6, x=1, M=M)
        lc, rc = sides(TheoremId.WATSON_MUK_CONTINUED, p)
        lb, rb = sides(TheoremId.WATSON_MUK, p.replace(M=None))
        assert abs(rc - rb) <= 1e-9 * max(1, abs(rb))
        assert lc == lb

    def test_classical(self):
        p = P(x=1, z=0.75, M=2)
        _, rc = sides(TheoremId.WATSON_CLASSICAL_CONTINUED, p)
        _, rb = sides(TheoremId.WATSON_CLASSICAL, p.replace(M=None))
        assert abs(rc - rb) <= 1e-9 * max(1, abs(rb))


class TestReductionChain:
    def test_dkm_w_zero(self):
        d = verify(TheoremId.DKM_GENERALIZED, P(alpha=2, beta=BETA, z=1.3, w=0), POLICY)
        g = verify(TheoremId.RAMANUJAN_GUINAND, P(alpha=2, beta=BETA, z=1.3), POLICY)
        assert abs(d.rel_residual - g.rel_residual) <= 1e-9

    def test_kzw_continued_w_zero(self):
        k = verify(TheoremId.WATSON_KZW_CONTINUED, P(x=1, z=-0.6, w=0, M=1), POLICY)
        c = verify(TheoremId.WATSON_CLASSICAL_CONTINUED, P(x=1, z=-0.6, M=1), POLICY)
        assert abs(k.rel_residual - c.rel_residual) <= 1e-9

    def test_muk_continued_reduces_to_watson(self):
        # mu = -z, lam = 0 needs Re(mu + lam) > 0, so z < 0 on the continuation
        m = verify(TheoremId.WATSON_MUK_CONTINUED, P(mu=0.6, lam=0, z=-0.6, x=1, M=1), POLICY)
        c = verify(TheoremId.WATSON_CLASSICAL_CONTINUED, P(x=1, z=-0.6, M=1), POLICY)
        assert abs(m.rel_residual - c.rel_residual) <= 1e-9
        assert abs(m.lhs - c.lhs) <= 1e-9 * abs(c.lhs)
        assert abs(m.rhs - c.rhs) <= 1e-9 * abs(c.rhs)


def test_monotone_refinement():
    p = P(x=1, z=0.75, w=0.3)
    prev = None
    for N in (5, 10, 20, 40):
        r = verify(TheoremId.WATSON_KZW, p, TruncationPolicy(N, TailMode.FIXED_N))
        tails = sum(d.tail for d in r.per_series_terms)
        if prev is not None:
            assert r.rel_residual <= prev[0] + prev[1] + tails
        prev = (r.rel_residual, tails)
    assert prev[0] <= 1e-12


def test_tail_bound_certifies():
    pol = TruncationPolicy(tail_mode=TailMode.TAIL_BOUND, tail_tol=1e-13)
    r = verify(TheoremId.WATSON_KZW, P(x=1, z=0.75, w=0.3), pol)
    assert all(d.tail <= 1e-13 for d in r.per_series_terms)
    assert r.rel_residual <= 1e-11


class TestDKMStructure:
    @pytest.mark.parametrize("w", [0.5, 0.3 + 0.2j])
    def test_swap_negates(self, w):
        p = P(alpha=2, beta=BETA, z=1.3, w=w)
        q = P(alpha=BETA, beta=2, z=1.3, w=1j * w)
        l1, r1 = sides(TheoremId.DKM_GENERALIZED, p)
        l2, r2 = sides(TheoremId.DKM_GENERALIZED, q)
        assert abs(l1 + l2) <= 1e-12 * abs(l1)
        assert abs(r1 + r2) <= 1e-12 * abs(r1)

    def test_kummer_step(self):
        p = P(alpha=2, beta=BETA, z=1.3, w=0.5 + 0.1j)
        before, after = dkm_rhs_before_kummer(p), dkm_rhs_after_kummer(p)
        assert abs(before - after) <= 1e-10
        assert abs(after - sides(TheoremId.DKM_GENERALIZED, p)[1]) <= 1e-12


class TestConstants:
    def test_constant_mismatch_flags_scaled_rhs(self):
        p = P(mu=0.4, lam=0.3, z=0.6, x=1)
        lhs, rhs = sides(TheoremId.WATSON_MUK, p)
        flag = constant_mismatch(p, POLICY, lhs, 2 * rhs, 1e-6)
        assert flag is not None and flag.startswith("CONSTANT_MISMATCH")
        ratio = float(flag.split("ratio=")[1].split("+")[0].split("-0")[0])
        assert abs(ratio - 0.5) <= 1e-6
        assert constant_mismatch(p, POLICY, lhs, rhs, 1e-6) is None

    def test_muk_z_zero_blocks(self):
        mu, lam, x = 0.4, 0.3, 1.0
        limit = muk_z_zero_limit_block(mu, lam, x, z=1e-4)
        used = muk_z_zero_constant_block(mu, lam, x)
        displayed = muk_z_zero_constant_block(mu, lam, x, displayed=True)
        assert abs(used - limit) <= 1e-3
        # the sign of the log term as displayed does not match the limit
        assert abs(displayed - limit) > 1.0

    def test_displayed_z_zero_forms_fail(self):
        p = P(mu=0.4, lam=0.3, x=1)
        lhs = eval_side(TheoremId.MUK_Z_ZERO, Side.LHS, p)[0]
        assert abs(lhs - T.muk_z_zero_rhs(p, POLICY, [], displayed=True)) > 1.0
        k = P(x=1)
        lhs = eval_side(TheoremId.WATSON_K_ZERO, Side.LHS, k)[0]
        assert abs(lhs - T.watson_k_zero_rhs(k, POLICY, [], displayed=True)) > 1.0

    def test_muk_z_zero_mu_zero_path(self):
        # mu = 0, lam -> 0 turns the muK identity into the K_0 one
        a = verify(TheoremId.MUK_Z_ZERO, P(mu=0, lam=1e-7, x=1), POLICY)
        b = verify(TheoremId.WATSON_K_ZERO, P(x=1), POLICY)
        assert abs(a.lhs - b.lhs) <= 1e-5
        assert abs(a.rhs - b.rhs) <= 1e-5


class TestLemmas:
    def test_kzw(self):
        r = lemma_check(LemmaKind.KZW, P(z=0.75, w=0.5, x=1, a=2 * PI))
        assert r.abs_residual <= 1e-6

    def test_kzw_w_zero_closed_form(self):
        z, x, a = 0.75, 1.3, 2.0
        ref = 0.5 * math.sqrt(PI) * gamma(0.5 + z) * x ** (2 * z) / (x * x + a * a) ** (z + 0.5)
        assert abs(lemma_kzw_closed_form(z, 0, x, a) - ref) <= 1e-14

    @pytest.mark.parametrize("a", [0.0, 2 * PI])
    def test_muk(self, a):
        r = lemma_check(LemmaKind.MUK, P(mu=0.4, lam=0.3, z=0.6, x=1, a=a))
        assert r.abs_residual <= 1e-6

    def test_gate(self):
        with pytest.raises(DomainGate):
            lemma_check(LemmaKind.KZW, P(z=0.75, w=0.5, x=1j, a=1.0))


class TestPoisson:
    def test_kzw(self):
        r = poisson_cross_check(SummandFamily.KZW_SUMMAND, P(z=0.75, w=0.3, x=1))
        assert r.rel_residual <= 1e-5 and r.error is None

    def test_f0_plus(self):
        z, w = 0.75, 0.3 + 0.1j
        ref = 0.5 * gamma(z) * f11(z, 0.5, -w * w / 4).value
        assert abs(besselk.kzw_at_zero(z, w) - ref) <= 1e-13
        p = besselk.BesselParamsKZW(z, w, 1e-9)
        assert abs((besselk.k_zw_integral(p) * (1e-9 / 2) ** z) - ref) <= 1e-6


class TestGatesAndErrors:
    def test_alpha_beta_constraint(self):
        with pytest.raises(DomainGate):
            verify(TheoremId.RAMANUJAN_GUINAND, P(alpha=2, beta=2, z=1.3))

    def test_rg_pole(self):
        with pytest.raises(PoleGate):
            verify(TheoremId.RAMANUJAN_GUINAND, P(alpha=2, beta=BETA, z=2))

    def test_z_positive(self):
        with pytest.raises(DomainGate):
            verify(TheoremId.WATSON_KZW, P(x=1, z=-0.6, w=0.4))

    def test_continuation_order(self):
        with pytest.raises(DomainGate):
            verify(TheoremId.WATSON_KZW_CONTINUED, P(x=1, z=-1.6, w=0.4, M=1))

    def test_continuation_pole(self):
        with pytest.raises(PoleGate):
            verify(TheoremId.WATSON_CLASSICAL_CONTINUED, P(x=1, z=-0.5, M=1))

    def test_mu_lam(self):
        with pytest.raises(DomainGate):
            verify(TheoremId.WATSON_MUK, P(mu=-0.5, lam=0.3, z=0.6, x=1))

    def test_imag_limit(self):
        with pytest.raises(DomainGate):
            verify(TheoremId.WATSON_CLASSICAL, P(x=1, z=0.75 + 11j))

    def test_missing(self):
        with pytest.raises(DomainGate):
            verify(TheoremId.WATSON_CLASSICAL, P(x=1))

    def test_nonfinite(self):
        with pytest.raises(DomainGate):
            P(z=float("nan"))

    def test_tail_not_met_embedded(self):
        pol = TruncationPolicy(tail_mode=TailMode.TAIL_BOUND, tail_tol=1e-300)
        r = verify(TheoremId.WATSON_CLASSICAL, P(x=1, z=0.75), pol)
        assert not r.passed and r.error.startswith("TailNotMet")

    def test_policy_validation(self):
        with pytest.raises(ValueError):
            TruncationPolicy(series_terms_N=0)
        with pytest.raises(ValueError):
            TruncationPolicy(tail_tol=0)


def test_registry_closed():
    assert len(REGISTRY) == 10
    for theorem in TheoremId:
        assert TheoremId.parse(theorem.value) is theorem


def test_deterministic():
    p = P(alpha=2, beta=BETA, z=0.5 + 0.4j, w=0.3)
    a = verify(TheoremId.DKM_GENERALIZED, p).to_dict(timestamps=False)
    b = verify(TheoremId.DKM_GENERALIZED, p).to_dict(timestamps=False)
    assert a == b
