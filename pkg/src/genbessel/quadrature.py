"""Quadrature on (0, inf): double-exponential rules and half-period panels.

Integrand callbacks take a float ndarray of nodes and return the values
at those nodes; every node set is fixed in advance, so results are
bit-reproducible.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import NonConvergence, QuadratureFailure

_EPS = np.finfo(float).eps


class Method(enum.Enum):
    DOUBLE_EXPONENTIAL = "double_exponential"
    HALF_PERIOD_PARTITION = "half_period_partition"


@dataclass(frozen=True)
class QuadratureSpec:
    method: Method = Method.DOUBLE_EXPONENTIAL
    target_tol: float = 1e-12
    max_levels: int = 10
    oscillation_frequency: float = 0.0

    def __post_init__(self):
        if not self.target_tol > 0:
            raise ValueError("target_tol must be positive")
        if not 1 <= self.max_levels <= 14:
            raise ValueError("max_levels must lie in 1..14")
        if self.method is Method.HALF_PERIOD_PARTITION and not self.oscillation_frequency > 0:
            raise ValueError("half-period partition needs a positive oscillation frequency")


def _evaluate(f, t):
    vals = np.asarray(f(t), dtype=np.complex128)
    if vals.shape != t.shape:
        vals = np.broadcast_to(vals, t.shape)
    if not np.all(np.isfinite(vals)):
        raise QuadratureFailure("integrand returned a non-finite value")
    return vals


# exp-sinh map t = exp((pi/2) sinh(tau)); tau in [-T, T]
_DE_TMAX = 5.5
_DE_H0 = 0.5


def _de_nodes(h, offset):
    # offset 0: all nodes j*h; offset 1: only the odd multiples of h
    n = int(math.floor(_DE_TMAX / h))
    j = np.arange(-n, n + 1)
    if offset:
        j = j[j % 2 != 0]
    tau = j * h
    q = 0.5 * math.pi * np.sinh(tau)
    t = np.exp(q)
    w = t * 0.5 * math.pi * np.cosh(tau)
    return t, w


def de_levels(f, spec):
    """Yield (level, estimate, diff, abs_sum) for successive DE levels."""
    h = _DE_H0
    t, w = _de_nodes(h, 0)
    vals = _evaluate(f, t)
    total = h * np.sum(w * vals)
    abs_sum = h * np.sum(np.abs(w * vals))
    yield 0, complex(total), math.inf, float(abs_sum)
    for level in range(1, spec.max_levels + 1):
        h /= 2.0
        t, w = _de_nodes(h, 1)
        vals = _evaluate(f, t)
        new = 0.5 * total + h * np.sum(w * vals)
        abs_sum = 0.5 * abs_sum + h * np.sum(np.abs(w * vals))
        diff = abs(new - total)
        total = new
        yield level, complex(total), float(diff), float(abs_sum)


def _de_integrate(f, spec):
    best = None
    for level, value, diff, abs_sum in de_levels(f, spec):
        floor = 8.0 * _EPS * abs_sum
        err = max(diff, floor)
        best = (value, err)
        if level >= 2 and diff <= spec.target_tol * max(1.0, abs(value)):
            return value, err
    raise QuadratureFailure("double-exponential rule did not converge", value=best[0], estimate=best[1])


def tanh_sinh(f, a, b, tol=1e-14, max_levels=10):
    """Integral over the finite interval [a, b] by the tanh-sinh rule."""
    c = 0.5 * (a + b)
    d = 0.5 * (b - a)
    tmax = 4.0

    def nodes(h, odd):
        n = int(math.floor(tmax / h))
        j = np.arange(-n, n + 1)
        if odd:
            j = j[j % 2 != 0]
        tau = j * h
        q = 0.5 * math.pi * np.sinh(tau)
        # distance to the nearer endpoint stays accurate near both ends
        left = a + 2.0 * d / (1.0 + np.exp(-2.0 * q))
        right = b - 2.0 * d / (1.0 + np.exp(2.0 * q))
        x = np.where(tau < 0, left, right)
        w = d * 0.5 * math.pi * np.cosh(tau) / np.cosh(q) ** 2
        return x, w

    h = 0.5
    x, w = nodes(h, False)
    vals = _evaluate(f, x)
    total = h * np.sum(w * vals)
    abs_sum = h * np.sum(np.abs(w * vals))
    err = math.inf
    for level in range(1, max_levels + 1):
        h /= 2.0
        x, w = nodes(h, True)
        vals = _evaluate(f, x)
        new = 0.5 * total + h * np.sum(w * vals)
        abs_sum = 0.5 * abs_sum + h * np.sum(np.abs(w * vals))
        err = max(abs(new - total), 8.0 * _EPS * abs_sum)
        total = new
        if level >= 2 and err <= tol * max(1.0, abs(total)):
            return complex(total), float(err)
    raise QuadratureFailure("tanh-sinh rule did not converge", value=complex(total), estimate=float(err))


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(24)


def _gauss_panels(f, a, k0, k1):
    # integrals over [k pi/a, (k+1) pi/a] for k = k0..k1-1
    width = math.pi / a
    k = np.arange(k0, k1)[:, None]
    t = (k + 0.5 * (_GL_NODES[None, :] + 1.0)) * width
    vals = _evaluate(f, t.ravel()).reshape(t.shape)
    return 0.5 * width * (vals @ _GL_WEIGHTS)


def euler_accelerate(partials):
    """Euler (repeated averaging) transform of a sequence of partial sums.

    Returns the best row-end estimate and its error estimate.
    """
    row = np.asarray(partials, dtype=np.complex128)
    best = row[-1]
    best_err = abs(row[-1] - row[-2]) if len(row) > 1 else math.inf
    while len(row) > 3:
        row = 0.5 * (row[:-1] + row[1:])
        est = max(abs(row[-1] - row[-2]), abs(row[-2] - row[-3]))
        if est < best_err:
            best, best_err = row[-1], est
    return complex(best), float(best_err)


def _half_period_integrate(f, spec):
    a = spec.oscillation_frequency
    first, first_err = tanh_sinh(f, 0.0, math.pi / a, tol=min(spec.target_tol, 1e-13))
    panels = np.array([first], dtype=np.complex128)
    n_panels = 16
    best = None
    max_panels = 16 * 2 ** min(spec.max_levels, 10)
    while True:
        extra = _gauss_panels(f, a, len(panels), n_panels)
        panels = np.concatenate([panels, extra])
        partials = np.cumsum(panels)
        value, err = euler_accelerate(partials)
        err = max(err, first_err, 8.0 * _EPS * float(np.sum(np.abs(panels))))
        best = (value, err)
        if err <= spec.target_tol * max(1.0, abs(value)):
            return value, err
        if n_panels >= max_panels:
            break
        n_panels *= 2
    raise QuadratureFailure("half-period partition did not converge", value=best[0], estimate=best[1])


def integrate_semi_infinite(f, spec=QuadratureSpec()):
    """Integral of ``f`` over (0, inf); returns (value, err_estimate)."""
    if spec.method is Method.DOUBLE_EXPONENTIAL:
        return _de_integrate(f, spec)
    return _half_period_integrate(f, spec)


def friendly_error(exc):
    """Short text for a quadrature failure, used in report diagnostics."""
    if isinstance(exc, NonConvergence) and exc.value is not None:
        return f"{exc} (best {exc.value!r}, estimate {exc.estimate:.3g})"
    return str(exc)


def cosine_transform_check(g_params, a, case="nonvanishing"):
    """The 1F2 cosine-transform closed forms; see :mod:`genbessel.lemmas`."""
    from .lemmas import cosine_transform_check as _check

    return _check(g_params, a, case)
