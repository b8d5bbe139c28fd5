"""Left- and right-hand side evaluators of every identity, with domain gates.

Each evaluator has the signature ``fn(params, policy, diags) -> complex``
and appends one SeriesDiag row per truncated outer sum it performs.
"""

import cmath
import math

import numpy as np

from .. import besselk
from ..complexfn import EULER_GAMMA, SQRT_PI, digamma, gamma, gen_binomial, pochhammer, rgamma
from ..errors import DomainGate, PoleGate
from ..hypergeom import f11, f21_array
from ..zetafn import sigma_array, zeta
from .core import TheoremId
from .sums import a_factor_u, alg_series, exp_series, muk_series

PI = math.pi
IMAG_LIMIT = 10.0
PI2_TOL = 1e-14


def _f11(a, c, x):
    return complex(f11(a, c, x).value)


def _pow(base, e):
    return cmath.exp(e * cmath.log(base))


def _radius(x):
    # the kernels in u = 1/n have their nearest singularity at |u| = 2 pi / |x|
    return min(PI / abs(x), 0.5)


# ------------------------------------------------------------------ gates

def _near_int(v, tol=1e-12):
    return abs(v.imag) <= tol and abs(v.real - round(v.real)) <= tol


def gate_imag(params):
    for name in ("z", "w", "mu", "lam", "x", "alpha", "beta"):
        v = getattr(params, name)
        if v is not None and abs(v.imag) > IMAG_LIMIT:
            raise DomainGate(f"|Im {name}| > {IMAG_LIMIT:g} is outside the verified range")


def gate_alpha_beta(params):
    alpha, beta = params.require("alpha", "beta")
    if alpha.imag != 0 or beta.imag != 0 or not (alpha.real > 0 and beta.real > 0):
        raise DomainGate("alpha and beta must be positive reals")
    if abs(alpha.real * beta.real - PI * PI) > PI2_TOL * PI * PI:
        raise DomainGate("alpha * beta must equal pi^2 (relative 1e-14)")


def gate_rg_pole(z):
    # Gamma(z/2), Gamma(-z/2) at even integers; zeta(z), zeta(-z) at z = +-1
    if _near_int(z) and (round(z.real) % 2 == 0 or abs(round(z.real)) == 1):
        raise PoleGate(f"z = {z} is a pole of the Gamma/zeta prefactors")


def gate_continuation(z, M):
    if not z.real > -M:
        raise DomainGate(f"the continued identity needs Re(z) > -M = {-M}")
    if _near_int(z) and round(z.real) <= 0:
        raise PoleGate(f"z = {z} is a pole of Gamma(z) / zeta(2z + 2m + 1)")
    if _near_int(z + 0.5) and round((z + 0.5).real) <= 0:
        raise PoleGate(f"z = {z} is a pole of Gamma(1/2 + z)")


def gate_x_right(x):
    if not x.real > 0:
        raise DomainGate("Re(x) > 0 is required")


def gate_x_sq(x):
    if not (x * x).real > 0:
        raise DomainGate("Re(x^2) > 0 is required")


def gate_z_pos(z):
    if not z.real > 0:
        raise DomainGate("Re(z) > 0 is required")


def gate_mu_lam(mu, lam):
    if not (mu + lam).real > 0:
        raise DomainGate("Re(mu + lambda) > 0 is required")


# ------------------------------------------- Ramanujan-Guinand and DKM

def _divisor_bessel_sum(z, w, X0, prefactor, label, policy, diags):
    """prefactor * sum sigma_{-z}(n) n^{z/2} K_{z/2,w}(n X0)."""
    # n^{z/2} K(n X0) = (X0/2)^{-z/2} (n X0/2)^{z/2} K(n X0)
    scale = _pow(X0 / 2.0, -z / 2.0)

    def term(n):
        sig = sigma_array(-z, int(n.max()))[n - 1]
        return sig * besselk.kzw_summand_array(z / 2.0, w, n * X0)

    return prefactor * scale * exp_series(term, X0.real, policy, label, diags)


def _rg_params(p):
    z, alpha, beta = p.require("z", "alpha", "beta")
    return z, alpha, beta


def gate_rg(p):
    z, _, _ = _rg_params(p)
    gate_alpha_beta(p)
    gate_rg_pole(z)
    gate_imag(p)


def rg_lhs(p, policy, diags):
    z, alpha, beta = _rg_params(p)
    a = _divisor_bessel_sum(z, 0j, 2.0 * alpha, cmath.sqrt(alpha), "lhs:alpha", policy, diags)
    b = _divisor_bessel_sum(z, 0j, 2.0 * beta, cmath.sqrt(beta), "lhs:beta", policy, diags)
    return a - b


def rg_rhs(p, policy, diags):
    z, alpha, beta = _rg_params(p)
    t1 = 0.25 * gamma(z / 2.0) * zeta(z) * (_pow(beta, (1.0 - z) / 2.0) - _pow(alpha, (1.0 - z) / 2.0))
    t2 = 0.25 * gamma(-z / 2.0) * zeta(-z) * (_pow(beta, (1.0 + z) / 2.0) - _pow(alpha, (1.0 + z) / 2.0))
    return t1 + t2


def gate_dkm(p):
    gate_rg(p)
    p.require("w")


def dkm_lhs(p, policy, diags):
    z, alpha, beta = _rg_params(p)
    w = p.w
    q = cmath.exp(w * w / 4.0)
    a = _divisor_bessel_sum(z, 1j * w, 2.0 * alpha, cmath.sqrt(alpha) / q, "lhs:alpha", policy, diags)
    b = _divisor_bessel_sum(z, w, 2.0 * beta, cmath.sqrt(beta) * q, "lhs:beta", policy, diags)
    return a - b


def dkm_rhs(p, policy, diags):
    z, alpha, beta = _rg_params(p)
    y = p.w * p.w / 4.0
    t1 = 0.25 * gamma(z / 2.0) * zeta(z) * (
        _pow(beta, (1.0 - z) / 2.0) * _f11((1.0 - z) / 2.0, 0.5, y)
        - _pow(alpha, (1.0 - z) / 2.0) * _f11((1.0 - z) / 2.0, 0.5, -y))
    t2 = 0.25 * gamma(-z / 2.0) * zeta(-z) * (
        _pow(beta, (1.0 + z) / 2.0) * _f11((1.0 + z) / 2.0, 0.5, y)
        - _pow(alpha, (1.0 + z) / 2.0) * _f11((1.0 + z) / 2.0, 0.5, -y))
    return t1 + t2


def dkm_rhs_before_kummer(p):
    """Right side of the DKM identity just before the two Kummer steps."""
    z, alpha, beta = _rg_params(p)
    y = p.w * p.w / 4.0
    gz = gamma(z / 2.0) * zeta(z)
    gz1 = SQRT_PI * gamma((z + 1.0) / 2.0) * zeta(z + 1.0)
    return 0.25 * (
        -_pow(alpha, (1.0 - z) / 2.0) * gz * cmath.exp(-y) * _f11(z / 2.0, 0.5, y)
        + _pow(alpha, (-z - 1.0) / 2.0) * gz1 * _f11((1.0 + z) / 2.0, 0.5, y)
        + _pow(beta, (1.0 - z) / 2.0) * gz * cmath.exp(y) * _f11(z / 2.0, 0.5, -y)
        - _pow(beta, (-z - 1.0) / 2.0) * gz1 * _f11((1.0 + z) / 2.0, 0.5, -y))


def dkm_rhs_after_kummer(p):
    """The same right side once Kummer's transformation has been applied twice."""
    z, alpha, beta = _rg_params(p)
    y = p.w * p.w / 4.0
    gz = gamma(z / 2.0) * zeta(z)
    gz1 = SQRT_PI * gamma((z + 1.0) / 2.0) * zeta(z + 1.0)
    return 0.25 * (
        -_pow(alpha, (1.0 - z) / 2.0) * gz * _f11((1.0 - z) / 2.0, 0.5, -y)
        + _pow(alpha, (-z - 1.0) / 2.0) * gz1 * _f11((1.0 + z) / 2.0, 0.5, y)
        + _pow(beta, (1.0 - z) / 2.0) * gz * _f11((1.0 - z) / 2.0, 0.5, y)
        - _pow(beta, (-z - 1.0) / 2.0) * gz1 * _f11((1.0 + z) / 2.0, 0.5, -y))


# ------------------------------------------------- Watson and K_{z,w}

def _kzw_lhs_sum(z, w, x, policy, diags):
    def term(n):
        return besselk.kzw_summand_array(z, w, n * x)

    return 2.0 * exp_series(term, x.real, policy, "lhs:bessel", diags)


def _rational(z, x, u):
    # (x^2 u^2 + 4 pi^2)^{-z-1/2}, i.e. n^{2z+1} (x^2 + 4 n^2 pi^2)^{-z-1/2}
    return np.exp(-(z + 0.5) * np.log(x * x * u * u + 4.0 * PI * PI))


def _n_pow(n, s):
    return np.exp(-s * np.log(np.asarray(n, dtype=float)))


def gate_watson(p):
    z, x = p.require("z", "x")
    gate_x_right(x)
    gate_z_pos(z)
    gate_imag(p)


def watson_lhs(p, policy, diags):
    z, x = p.z, p.x
    return _kzw_lhs_sum(z, 0j, x, policy, diags) + (0.5 * gamma(z) - SQRT_PI / x * gamma(z + 0.5))


def watson_rhs(p, policy, diags):
    z, x = p.z, p.x
    s = 2.0 * z + 1.0

    def head(n):
        return np.exp(-(z + 0.5) * np.log(x * x + 4.0 * PI * PI * n * n))

    total = alg_series(head, lambda u: _rational(z, x, u), s, _radius(x), policy, "rhs:rational", diags)
    return 2.0 * SQRT_PI * _pow(x, 2.0 * z) * gamma(z + 0.5) * total


def _kzw_constants(z, w, x):
    y = -w * w / 4.0
    return (0.5 * gamma(z) * _f11(z, 0.5, y)
            - SQRT_PI / x * gamma(0.5 + z) * cmath.exp(y) * _f11(0.5 + z, 0.5, y))


def gate_kzw(p):
    z, w, x = p.require("z", "w", "x")
    gate_x_sq(x)
    gate_z_pos(z)
    gate_imag(p)


def kzw_lhs(p, policy, diags):
    z, w, x = p.z, p.w, p.x
    return _kzw_lhs_sum(z, w, x, policy, diags) + _kzw_constants(z, w, x)


def kzw_rhs(p, policy, diags):
    z, w, x = p.z, p.w, p.x
    s = 2.0 * z + 1.0

    def head(n):
        return a_factor_u(1.0 / n, z, w, x) * np.exp(-(z + 0.5) * np.log(x * x + 4.0 * PI * PI * n * n))

    def phi(u):
        return a_factor_u(u, z, w, x) * _rational(z, x, u)

    total = alg_series(head, phi, s, _radius(x), policy, "rhs:A-rational", diags)
    return SQRT_PI * _pow(x, 2.0 * z) * gamma(0.5 + z) * cmath.exp(-w * w / 4.0) * total


def gate_kzw_continued(p):
    z, w, x, M = p.require("z", "w", "x", "M")
    gate_x_sq(x)
    gate_continuation(z, M)
    gate_imag(p)


def _subtracted(z, x, M, u):
    # (x^2 u^2 + 4 pi^2)^{-z-1/2} - sum_{m<M} C(-z-1/2, m) x^{2m} u^{2m} / (2 pi)^{2z+2m+1}
    out = _rational(z, x, u)
    for m in range(M):
        out = out - gen_binomial(-z - 0.5, m) * x ** (2 * m) * u ** (2 * m) * (2.0 * PI) ** (-(2.0 * z + 2 * m + 1.0))
    return out


def kzw_continued_rhs(p, policy, diags):
    z, w, x, M = p.z, p.w, p.x, p.M
    s = 2.0 * z + 1.0
    r = _radius(x)

    def head(n):
        return a_factor_u(1.0 / n, z, w, x) * _subtracted(z, x, M, 1.0 / n) * _n_pow(n, s)

    def phi(u):
        return a_factor_u(u, z, w, x) * _subtracted(z, x, M, u)

    total = alg_series(head, phi, s, r, policy, "rhs:subtracted", diags, start_order=2 * M)

    def a_head(sm):
        return lambda n: a_factor_u(1.0 / n, z, w, x) * _n_pow(n, sm)

    for m in range(M):
        sm = 2.0 * z + 2 * m + 1.0
        a_sum = alg_series(a_head(sm), lambda u: a_factor_u(u, z, w, x), sm, r, policy, f"rhs:A-zeta[m={m}]", diags)
        total += gen_binomial(-z - 0.5, m) * x ** (2 * m) * (2.0 * PI) ** (-sm) * a_sum
    return SQRT_PI * _pow(x, 2.0 * z) * gamma(0.5 + z) * cmath.exp(-w * w / 4.0) * total


def gate_watson_continued(p):
    z, x, M = p.require("z", "x", "M")
    gate_x_sq(x)
    gate_continuation(z, M)
    gate_imag(p)


def watson_continued_lhs(p, policy, diags):
    z, x = p.z, p.x
    return _kzw_lhs_sum(z, 0j, x, policy, diags) + 0.5 * gamma(z) - SQRT_PI / x * gamma(0.5 + z)


def watson_continued_rhs(p, policy, diags):
    z, x, M = p.z, p.x, p.M
    s = 2.0 * z + 1.0

    def head(n):
        return _subtracted(z, x, M, 1.0 / n) * _n_pow(n, s)

    total = alg_series(head, lambda u: _subtracted(z, x, M, u), s, _radius(x), policy,
                       "rhs:subtracted", diags, start_order=2 * M)
    for m in range(M):
        sm = 2.0 * z + 2 * m + 1.0
        total += gen_binomial(-z - 0.5, m) * x ** (2 * m) * zeta(sm) * (2.0 * PI) ** (-sm)
    return 2.0 * SQRT_PI * _pow(x, 2.0 * z) * gamma(0.5 + z) * total


# ------------------------------------------------------------ muK family

def _muk_constants(mu, z, lam, x):
    f0 = 2.0 ** (z + mu + lam - 1.0) * gamma(z) * gamma(0.5 + lam + mu) * rgamma(0.5 + lam - z)
    two_int = SQRT_PI * 2.0 ** (mu + z + lam) * gamma(lam + mu) * gamma(0.5 + z) * rgamma(lam - z) / x
    return f0, two_int


def _muk_prefactor(mu, z, lam, x):
    return 2.0 ** (mu + lam - z) / SQRT_PI * _pow(x / PI, 2.0 * z)


def _f21_kernel(mu, z, lam, x, u):
    xi = -(x * x) * np.asarray(u) ** 2 / (4.0 * PI * PI)
    vals, _, _, _ = f21_array(0.5 + z, 0.5 + lam + mu + z, 0.5 + lam, xi)
    return vals


def gate_muk(p):
    mu, z, lam, x = p.require("mu", "z", "lam", "x")
    gate_x_right(x)
    gate_z_pos(z)
    gate_mu_lam(mu, lam)
    gate_imag(p)


def muk_lhs(p, policy, diags):
    mu, z, lam, x = p.mu, p.z, p.lam, p.x
    f0, two_int = _muk_constants(mu, z, lam, x)
    return 2.0 * muk_series(mu, z, lam, x, policy, "lhs:muK", diags) + f0 - two_int


def muk_rhs(p, policy, diags):
    mu, z, lam, x = p.mu, p.z, p.lam, p.x
    s = 2.0 * z + 1.0

    def phi(u):
        return _f21_kernel(mu, z, lam, x, u)

    total = alg_series(lambda n: phi(1.0 / n) * _n_pow(n, s), phi, s, _radius(x), policy, "rhs:2F1", diags)
    c = _muk_prefactor(mu, z, lam, x) * gamma(z + 0.5) * gamma(0.5 + lam + mu + z) * rgamma(0.5 + lam)
    return c * total


def gate_muk_continued(p):
    mu, z, lam, x, M = p.require("mu", "z", "lam", "x", "M")
    gate_x_right(x)
    gate_mu_lam(mu, lam)
    gate_continuation(z, M)
    gate_imag(p)


def _poch_ratio(mu, z, lam, m):
    return (pochhammer(0.5 + z, m) * pochhammer(0.5 + lam + mu + z, m)
            / (math.factorial(m) * pochhammer(0.5 + lam, m)))


def muk_continued_rhs(p, policy, diags):
    mu, z, lam, x, M = p.mu, p.z, p.lam, p.x, p.M
    s = 2.0 * z + 1.0
    coef = [_poch_ratio(mu, z, lam, m) for m in range(M)]

    def phi(u):
        u = np.asarray(u, dtype=np.complex128)
        xi = -(x * x) * u * u / (4.0 * PI * PI)
        out = _f21_kernel(mu, z, lam, x, u)
        for m in range(M):
            out = out - coef[m] * xi ** m
        return out

    total = alg_series(lambda n: phi(1.0 / n) * _n_pow(n, s), phi, s, _radius(x), policy,
                       "rhs:2F1-subtracted", diags, start_order=2 * M)
    pre = _muk_prefactor(mu, z, lam, x)
    out = pre * gamma(z + 0.5) * gamma(0.5 + lam + mu + z) * rgamma(0.5 + lam) * total
    q = -(x * x) / (4.0 * PI * PI)
    for m in range(M):
        out += (pre * gamma(z + 0.5 + m) * gamma(0.5 + lam + mu + z + m) * zeta(2.0 * z + 2 * m + 1.0)
                * rgamma(0.5 + lam + m) / math.factorial(m) * q ** m)
    return out


def gate_muk_z_zero(p):
    mu, lam, x = p.require("mu", "lam", "x")
    if p.z is not None and p.z != 0:
        raise DomainGate("the z = 0 identity takes no z (or z = 0)")
    gate_x_right(x)
    gate_mu_lam(mu, lam)
    gate_imag(p)


def muk_z_zero_constant_block(mu, lam, x, displayed=False):
    """Digamma/log constant of the z = 0 identity.

    ``displayed=True`` uses 2(gamma - log(x / 4 pi)); the default uses
    2(gamma + log(x / 4 pi)), which is what the z -> 0 limit produces.
    """
    mu, lam, x = complex(mu), complex(lam), complex(x)
    lg = cmath.log(x / (4.0 * PI))
    inner = 2.0 * (EULER_GAMMA - lg if displayed else EULER_GAMMA + lg)
    inner += -digamma(lam + 0.5) + digamma(lam + mu + 0.5)
    return 2.0 ** (mu + lam - 1.0) * gamma(0.5 + lam + mu) * rgamma(lam + 0.5) * inner


def muk_z_zero_limit_block(mu, lam, x, z=1e-4):
    """The z -> 0 bracket (zeta(2z+1) term minus the Gamma(z) term) at small z."""
    mu, lam, x, z = complex(mu), complex(lam), complex(x), complex(z)
    t1 = (2.0 ** (mu + lam - z) / SQRT_PI * _pow(x / PI, 2.0 * z) * gamma(z + 0.5)
          * gamma(0.5 + lam + mu + z) * zeta(2.0 * z + 1.0) * rgamma(0.5 + lam))
    t2 = 2.0 ** (z + mu + lam - 1.0) * gamma(z) * gamma(0.5 + lam + mu) * rgamma(0.5 + lam - z)
    return t1 - t2


def muk_z_zero_lhs(p, policy, diags):
    mu, lam, x = p.mu, p.lam, p.x
    s = muk_series(mu, 0j, lam, x, policy, "lhs:muK0", diags)
    return 2.0 * s - PI * 2.0 ** (mu + lam) * gamma(lam + mu) * rgamma(lam) / x


def muk_z_zero_rhs(p, policy, diags, displayed=False):
    mu, lam, x = p.mu, p.lam, p.x

    def phi(u):
        return _f21_kernel(mu, 0j, lam, x, u) - 1.0

    total = alg_series(lambda n: phi(1.0 / n) / n, phi, 1.0, _radius(x), policy, "rhs:2F1-1", diags,
                       start_order=2)
    c = 2.0 ** (mu + lam) * gamma(0.5 + lam + mu) * rgamma(0.5 + lam)
    return c * total + muk_z_zero_constant_block(mu, lam, x, displayed)


def gate_watson_k_zero(p):
    (x,) = p.require("x")
    gate_x_right(x)
    gate_imag(p)


def watson_k_zero_lhs(p, policy, diags):
    x = p.x
    return _kzw_lhs_sum(0j, 0j, x, policy, diags) - PI / x


def watson_k_zero_rhs(p, policy, diags, displayed=False):
    x = p.x

    def phi(u):
        return 2.0 * PI * np.exp(-0.5 * np.log(x * x * np.asarray(u) ** 2 + 4.0 * PI * PI)) - 1.0

    total = alg_series(lambda n: phi(1.0 / n) / n, phi, 1.0, _radius(x), policy, "rhs:rational-1", diags,
                       start_order=2)
    lg = cmath.log(x / (4.0 * PI))
    return total + (EULER_GAMMA - lg if displayed else EULER_GAMMA + lg)


REGISTRY = {
    TheoremId.RAMANUJAN_GUINAND: (gate_rg, rg_lhs, rg_rhs),
    TheoremId.WATSON_CLASSICAL: (gate_watson, watson_lhs, watson_rhs),
    TheoremId.DKM_GENERALIZED: (gate_dkm, dkm_lhs, dkm_rhs),
    TheoremId.WATSON_KZW: (gate_kzw, kzw_lhs, kzw_rhs),
    TheoremId.WATSON_KZW_CONTINUED: (gate_kzw_continued, kzw_lhs, kzw_continued_rhs),
    TheoremId.WATSON_CLASSICAL_CONTINUED: (gate_watson_continued, watson_continued_lhs, watson_continued_rhs),
    TheoremId.WATSON_MUK: (gate_muk, muk_lhs, muk_rhs),
    TheoremId.WATSON_MUK_CONTINUED: (gate_muk_continued, muk_lhs, muk_continued_rhs),
    TheoremId.MUK_Z_ZERO: (gate_muk_z_zero, muk_z_zero_lhs, muk_z_zero_rhs),
    TheoremId.WATSON_K_ZERO: (gate_watson_k_zero, watson_k_zero_lhs, watson_k_zero_rhs),
}
