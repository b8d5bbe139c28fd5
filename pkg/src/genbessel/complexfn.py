"""Gamma-family functions on the complex plane.

Scalars go in and Python ``complex`` comes out; numpy arrays are accepted
and returned elementwise so the hot loops elsewhere can stay vectorized.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericalOverflow, PoleError

EULER_GAMMA = 0.57721566490153286061
PI = math.pi
SQRT_PI = 1.7724538509055160273
LOG_2PI_HALF = 0.91893853320467274178  # log(2 pi) / 2

# Pole-detection radius around 0, -1, -2, ...
POLE_RADIUS = 1e-12


@dataclass(frozen=True)
class Constants:
    euler_gamma: float = EULER_GAMMA
    pi: float = PI
    sqrt_pi: float = SQRT_PI


CONSTANTS = Constants()

# Lanczos coefficients, g = 7, nine terms.
_LANCZOS_G = 7.0
_LANCZOS = np.array([
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
])

# B_{2k} / (2k) for the digamma asymptotic series.
_DIGAMMA_COEF = np.array([
    1.0 / 12.0, -1.0 / 120.0, 1.0 / 252.0, -1.0 / 240.0,
    1.0 / 132.0, -691.0 / 32760.0, 1.0 / 12.0, -3617.0 / 8160.0,
])


def _prepare(s):
    scalar = np.ndim(s) == 0
    arr = np.atleast_1d(np.asarray(s, dtype=np.complex128))
    return arr, scalar


def _finish(arr, scalar):
    if scalar:
        return complex(arr[0])
    return arr


def pole_mask(s, radius=POLE_RADIUS):
    """Boolean mask of entries within ``radius`` of a nonpositive integer."""
    s = np.asarray(s, dtype=np.complex128)
    n = np.round(s.real)
    return (n <= 0) & (np.abs(s - n) < radius)


def sinpi(s):
    """sin(pi s) with argument reduction, accurate near the integers."""
    arr, scalar = _prepare(s)
    n = np.round(arr.real)
    sign = np.where(np.mod(n, 2) == 0, 1.0, -1.0)
    return _finish(sign * np.sin(PI * (arr - n)), scalar)


def cospi(s):
    """cos(pi s) with argument reduction."""
    arr, scalar = _prepare(s)
    n = np.round(arr.real)
    sign = np.where(np.mod(n, 2) == 0, 1.0, -1.0)
    return _finish(sign * np.cos(PI * (arr - n)), scalar)


def _lanczos_log(s):
    # valid for Re(s) >= 1/2
    sm = s - 1.0
    acc = np.full(s.shape, _LANCZOS[0], dtype=np.complex128)
    for k in range(1, len(_LANCZOS)):
        acc += _LANCZOS[k] / (sm + k)
    t = sm + _LANCZOS_G + 0.5
    return LOG_2PI_HALF + (sm + 0.5) * np.log(t) - t + np.log(acc)


def _ln_gamma_array(s):
    s = np.asarray(s, dtype=np.complex128)
    # upward recurrence keeps the principal branch for Re(s) < 1/2
    shift = np.maximum(np.ceil(0.5 - s.real), 0.0).astype(int)
    out = _lanczos_log(s + shift)
    for k in range(int(shift.max()) if shift.size else 0):
        m = shift > k
        out[m] -= np.log(s[m] + k)
    return out


def ln_gamma(s):
    """Principal branch of log Gamma(s)."""
    arr, scalar = _prepare(s)
    if np.any(pole_mask(arr)):
        raise PoleError(f"ln_gamma has a pole at {s}")
    return _finish(_ln_gamma_array(arr), scalar)


def _check_finite(out, what):
    if not np.all(np.isfinite(out)):
        raise NumericalOverflow(f"{what} overflowed double precision")


def _gamma_array(s):
    s = np.asarray(s, dtype=np.complex128)
    out = np.empty_like(s)
    right = s.real >= 0.5
    with np.errstate(over="ignore", invalid="ignore"):
        out[right] = np.exp(_lanczos_log(s[right]))
        left = ~right
        if np.any(left):
            sl = s[left]
            out[left] = PI / (sinpi(sl) * np.exp(_lanczos_log(1.0 - sl)))
    return out


def gamma(s):
    """Gamma(s), raising PoleError at the nonpositive integers."""
    arr, scalar = _prepare(s)
    if np.any(pole_mask(arr)):
        raise PoleError(f"gamma has a pole at {s}")
    out = _gamma_array(arr)
    _check_finite(out, "gamma")
    return _finish(out, scalar)


def _rgamma_array(s):
    s = np.asarray(s, dtype=np.complex128)
    out = np.zeros_like(s)
    poles = pole_mask(s)
    right = (s.real >= 0.5) & ~poles
    out[right] = np.exp(-_lanczos_log(s[right]))
    left = (s.real < 0.5) & ~poles
    if np.any(left):
        sl = s[left]
        out[left] = sinpi(sl) * np.exp(_lanczos_log(1.0 - sl)) / PI
    return out


def rgamma(s):
    """1/Gamma(s); exactly zero at the nonpositive integers."""
    arr, scalar = _prepare(s)
    out = _rgamma_array(arr)
    _check_finite(out, "rgamma")
    return _finish(out, scalar)


def _digamma_array(s):
    s = np.asarray(s, dtype=np.complex128)
    out = np.empty_like(s)
    left = s.real < 0.5
    refl = np.pi * cospi(s[left]) / sinpi(s[left]) if np.any(left) else None
    work = np.where(left, 1.0 - s, s)
    acc = np.zeros_like(s)
    while True:
        small = work.real < 10.0
        if not np.any(small):
            break
        acc[small] -= 1.0 / work[small]
        work[small] += 1.0
    inv2 = 1.0 / (work * work)
    series = np.zeros_like(s)
    for c in _DIGAMMA_COEF[::-1]:
        series = (series + c) * inv2
    out[:] = np.log(work) - 0.5 / work - series + acc
    if np.any(left):
        out[left] = out[left] - refl
    return out


def digamma(s):
    """psi(s) = Gamma'(s)/Gamma(s)."""
    arr, scalar = _prepare(s)
    if np.any(pole_mask(arr)):
        raise PoleError(f"digamma has a pole at {s}")
    out = _digamma_array(arr)
    _check_finite(out, "digamma")
    return _finish(out, scalar)


def pochhammer(a, m):
    """Rising factorial (a)_m = a(a+1)...(a+m-1)."""
    if m < 0 or int(m) != m:
        raise ValueError("pochhammer needs a nonnegative integer m")
    arr, scalar = _prepare(a)
    out = np.ones_like(arr)
    for k in range(int(m)):
        out *= arr + k
    _check_finite(out, "pochhammer")
    return _finish(out, scalar)


def gen_binomial(a, m):
    """Generalized binomial coefficient C(a, m) = (-1)^m (-a)_m / m!."""
    if m < 0 or int(m) != m:
        raise ValueError("gen_binomial needs a nonnegative integer m")
    arr, scalar = _prepare(a)
    out = np.ones_like(arr)
    for k in range(int(m)):
        out *= (arr - k) / (k + 1)
    _check_finite(out, "gen_binomial")
    return _finish(out, scalar)
