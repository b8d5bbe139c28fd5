"""Cosine transforms with closed forms: the 1F2 integrals behind the muK lemma.

The integrals of 1F2(...; x^2 t^2 / 4) cos(a t) exist only in a summability
sense (the 1F2 grows like e^{x t}).  They are computed with a Gaussian
regulator e^{-eps t^2}: once a > |x| the regulated value differs from the
limit by a power series in eps (plus a part of size e^{-(a^2 - x^2)/(4 eps)}),
and Richardson extrapolation over halving eps removes the series.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import besselk
from .complexfn import SQRT_PI, gamma, rgamma, sinpi
from .errors import DomainError
from .hypergeom import f12_array, f21
from .quadrature import Method, QuadratureSpec, integrate_semi_infinite

# Richardson levels and the largest eps whose exponential remainder stays below ~1e-14
EPS_LEVELS = 5
_EXP_MARGIN = 32.0


@dataclass(frozen=True)
class VerificationRow:
    label: str
    quadrature: complex
    closed_form: complex
    residual: float
    err_estimate: float


def _richardson(values):
    # eliminate eps, eps^2, ... for eps halving at each level
    table = [list(values)]
    for k in range(1, len(values)):
        prev = table[-1]
        f = 2.0 ** k
        table.append([(f * prev[i + 1] - prev[i]) / (f - 1.0) for i in range(len(prev) - 1)])
    best = table[-1][0]
    err = abs(table[-1][0] - table[-2][-1])
    return complex(best), float(err)


def regularized_cosine_integral(g, a, growth, tol=1e-9):
    """Abel-Gauss value of int_0^inf g(t) cos(a t) dt for g growing like e^{growth t}."""
    a = float(a)
    if not a > 1.5 * growth:
        raise DomainError("the Gaussian regulator needs a > 1.5 |x|")
    eps0 = min(0.4, (a * a - growth * growth) / (4.0 * _EXP_MARGIN))
    values = []
    quad_err = 0.0
    for k in range(EPS_LEVELS):
        eps = eps0 / 2.0 ** k
        # beyond T the regulated integrand is below e^{-60}
        T = (growth + math.sqrt(growth * growth + 240.0 * eps)) / (2.0 * eps)

        def f(t, eps=eps, T=T):
            out = np.zeros(t.shape, dtype=np.complex128)
            m = t <= T
            if np.any(m):
                tm = t[m]
                out[m] = g(tm) * np.exp(-eps * tm * tm) * np.cos(a * tm)
            return out

        v, e = integrate_semi_infinite(f, QuadratureSpec(Method.HALF_PERIOD_PARTITION, tol, 10, a))
        values.append(v)
        quad_err = max(quad_err, e)
    value, rich_err = _richardson(values)
    return value, float(rich_err + 2.0 * quad_err)


def _muk_parts(g_params):
    mu, z, lam, x = (complex(g_params.mu), complex(g_params.z), complex(g_params.lam), complex(g_params.x))
    if not z.real > 0:
        raise DomainError("the cosine transforms need Re(z) > 0")
    if not (mu + lam).real > 0:
        raise DomainError("the cosine transforms need Re(mu + lambda) > 0")
    return mu, z, lam, x


def cosine_transform_check(g_params, a, case="nonvanishing"):
    """Quadrature against closed form for the 1F2 cosine transforms.

    case "nonvanishing": int t^{2z} 1F2(mu+z+lam+1/2; lam+1/2, 1+z; x^2 t^2/4) cos(a t) dt
    = -Gamma(2z+1) sin(pi z) a^{-2z-1} 2F1(1/2+z, 1/2+lam+mu+z; 1/2+lam; -x^2/a^2).
    case "vanishing": int 1F2(mu+lam+1/2; lam+1/2-z, 1-z; x^2 t^2/4) cos(a t) dt = 0.
    At a = 0 the whole profile f(t) = (tx/2)^{z-lam} muK_z(tx, lam) is integrated
    with the DE rule and compared with its closed form.
    """
    mu, z, lam, x = _muk_parts(g_params)
    a = float(a)
    if a < 0:
        raise DomainError("the frequency a must be nonnegative")
    if a == 0:
        if not x.real > 0:
            raise DomainError("the a = 0 integral needs Re(x) > 0")
        p = besselk.BesselParamsMuK(mu, z, lam, x)
        value, err = integrate_semi_infinite(lambda t: besselk.f_profile(p, t), QuadratureSpec(target_tol=1e-11))
        closed = SQRT_PI * 2.0 ** (mu + z + lam - 1.0) * gamma(mu + lam) * gamma(0.5 + z) * rgamma(lam - z) / x
        return VerificationRow("profile_integral", value, closed, abs(value - closed), float(err))
    growth = abs(x)
    if case == "vanishing":
        def g(t):
            return f12_array(mu + lam + 0.5, lam + 0.5 - z, 1.0 - z, (x * t) ** 2 / 4.0)
        closed = 0j
    elif case == "nonvanishing":
        def g(t):
            return np.exp(2.0 * z * np.log(t)) * f12_array(mu + z + lam + 0.5, lam + 0.5, 1.0 + z, (x * t) ** 2 / 4.0)
        closed = (-gamma(2.0 * z + 1.0) * sinpi(z) * a ** (-(2.0 * z + 1.0))
                  * f21(0.5 + z, 0.5 + lam + mu + z, 0.5 + lam, -(x * x) / (a * a)).value)
    else:
        raise ValueError(f"unknown case {case!r}")
    value, err = regularized_cosine_integral(g, a, growth)
    return VerificationRow(case, value, complex(closed), abs(value - closed), err)
