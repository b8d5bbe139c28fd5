"""Riemann zeta for complex argument and generalized divisor sums."""

import cmath
import math
from fractions import Fraction

import numpy as np

from .complexfn import EULER_GAMMA, PI, gamma, sinpi
from .errors import PoleError

_BORWEIN_N = 50
_STIELTJES = (
    EULER_GAMMA,
    -0.0728158454836767249,
    -0.00969036319287231848,
    0.00205383442030334587,
    0.00232537006546730006,
    0.000793323817301062702,
)


def _borwein_weights(n):
    # d_k = n * sum_{i<=k} (n+i-1)! 4^i / ((n-i)! (2i)!), in exact rationals
    d = []
    acc = Fraction(0)
    for i in range(n + 1):
        acc += Fraction(math.factorial(n + i - 1) * 4 ** i * n, math.factorial(n - i) * math.factorial(2 * i))
        d.append(acc)
    dn = d[n]
    # (d_k - d_n) / d_n as floats
    return np.array([float((d[k] - dn) / dn) for k in range(n)])


_WEIGHTS = _borwein_weights(_BORWEIN_N)
_SIGNS = np.array([(-1.0) ** k for k in range(_BORWEIN_N)])
_LOGK = np.log(np.arange(1, _BORWEIN_N + 1, dtype=float))


def _eta_zeta_shifted(eps):
    # zeta(1 + eps) from eps itself, so 1 - 2^{-eps} keeps full accuracy
    u = -eps * math.log(2.0)
    denom = -2.0 * cmath.exp(u / 2.0) * cmath.sinh(u / 2.0)
    terms = _SIGNS * _WEIGHTS * np.exp(-(1.0 + eps) * _LOGK)
    eta = -complex(np.sum(terms[::-1]))
    return eta / denom


def _eta_zeta(s):
    return _eta_zeta_shifted(s - 1.0)


def zeta(s):
    """Riemann zeta function zeta(s) for complex s != 1."""
    s = complex(s)
    if abs(s - 1.0) < 1e-12:
        raise PoleError("zeta has a pole at s = 1")
    if s == 0:
        return -0.5 + 0j
    if s.real > 0:
        return _eta_zeta(s)
    # zeta(s) = 2^s pi^{s-1} sin(pi s / 2) Gamma(1-s) zeta(1-s)
    return complex(2.0 ** s * PI ** (s - 1.0) * sinpi(s / 2.0) * gamma(1.0 - s) * _eta_zeta(1.0 - s))


def zeta_pole_expansion(z_small):
    """zeta(2z+1) - 1/(2z), continuous through z = 0 where it equals gamma."""
    z = complex(z_small)
    if abs(z) > 0.1:
        raise ValueError("zeta_pole_expansion is meant for |z| <= 0.1")
    if abs(z) < 1e-3:
        # zeta(1+e) - 1/e = sum_n (-1)^n gamma_n e^n / n!  (Stieltjes constants)
        eps = 2.0 * z
        out = 0j
        for n in range(len(_STIELTJES) - 1, -1, -1):
            out = out * eps + (-1) ** n * _STIELTJES[n] / math.factorial(n)
        return out
    return _eta_zeta_shifted(2.0 * z) - 1.0 / (2.0 * z)


def divisors(n):
    """Sorted divisors of a positive integer by trial division."""
    if n < 1 or int(n) != n:
        raise ValueError("divisors needs a positive integer")
    n = int(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def sigma(z, n):
    """Generalized divisor function sigma_z(n) = sum_{d | n} d^z."""
    z = complex(z)
    return complex(sum(cmath.exp(z * math.log(d)) for d in divisors(n)))


def sigma_array(z, nmax):
    """sigma_z(n) for n = 1..nmax as an array, by a divisor sieve."""
    z = complex(z)
    out = np.zeros(nmax, dtype=np.complex128)
    dpow = np.exp(z * np.log(np.arange(1, nmax + 1, dtype=float)))
    for d in range(1, nmax + 1):
        out[d - 1::d] += dpow[d - 1]
    return out
