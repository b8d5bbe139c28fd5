"""Outer sums of the identities under a truncation policy, and the A factor."""

import math

import numpy as np

from .. import besselk
from ..errors import DomainError, TailNotMet
from ..hypergeom import f11, f11_array
from ..series import HARD_CAP, dirichlet_sum, exp_sum, zeta_tail
from .core import SeriesDiag

# the muK sum switches to its asymptotic series once n x passes this
MUK_TAIL_START = 60.0


def exp_series(term_fn, rate, policy, label, diags):
    """Exponentially decaying outer sum; the diagnostics row is appended."""
    r = exp_sum(term_fn, rate, policy.series_terms_N, tail_bound=policy.tail_bound,
                tail_tol=policy.tail_tol, label=label)
    diags.append(SeriesDiag(label, r.terms, r.tail))
    return r.value


def alg_series(head_fn, phi, s, radius, policy, label, diags, start_order=0):
    """sum_n n^{-s} phi(1/n) with the Taylor tail; N doubles in tail-bound mode."""
    N = policy.series_terms_N
    while True:
        r = dirichlet_sum(head_fn, phi, s, radius, N=N, start_order=start_order, label=label)
        if not policy.tail_bound or r.tail <= policy.tail_tol:
            break
        if 2 * r.terms > HARD_CAP:
            raise TailNotMet(f"{label}: tail {r.tail:.3g} above {policy.tail_tol:.3g} at the cap",
                             terms=r.terms, tail=r.tail)
        N = 2 * r.terms
    diags.append(SeriesDiag(label, r.terms, r.tail))
    return r.value


def zeta_radius(x):
    # phi(u) is analytic for |u| < 2 pi / |x|; the FFT circle sits at half that
    return min(math.pi / abs(x), 1.0)


def muk_series(mu, z, lam, x, policy, label, diags, path="auto"):
    """sum_{n >= 1} (n x / 2)^{z - lam} muK_z(n x, lam).

    Direct terms up to n x >= 60, then the asymptotic expansion of the
    summand summed termwise against zeta tails.
    """
    if x.real <= 0:
        raise DomainError("muK sums need Re(x) > 0")
    N = max(policy.series_terms_N, int(math.ceil(MUK_TAIL_START / x.real)))
    if N > HARD_CAP:
        raise TailNotMet(f"{label}: head length {N} exceeds the cap", terms=N)
    n = np.arange(1, N + 1)
    head = besselk.muk_F_array(mu, z, lam, n * x, tol=1e-7, path=path)
    total = complex(np.sum(head[::-1]))
    A, c = besselk.muk_asymptotic_coefficients(mu, z, lam)
    pref = 2.0 ** (lam + mu + z - 1.0)
    logh = np.log(x / 2.0)
    tail = 0j
    est = 0.0
    prev = math.inf
    for k in range(c.size):
        if c[k] == 0:
            continue
        s = 2.0 * A + 2 * k - z
        term = pref * c[k] * np.exp((z - 2.0 * A - 2 * k) * logh) * zeta_tail(s, N)
        mag = abs(term)
        if mag > prev:
            break
        tail += term
        est = mag
        prev = mag
        if mag <= 1e-17 * max(abs(total + tail), 1e-300):
            break
    # exponentially small remainder of the summand beyond the head
    est += abs(head[-1]) * math.exp(-x.real) / (1.0 - math.exp(-x.real)) if np.all(c == 0) else 0.0
    if policy.tail_bound and est > policy.tail_tol * max(1.0, abs(total + tail)):
        raise TailNotMet(f"{label}: asymptotic tail estimate {est:.3g} too large", terms=N, tail=est)
    diags.append(SeriesDiag(label, N, float(est)))
    return total + tail


def a_factor(n, z, w, x):
    """A(n, z, w, x), the pair of 1F1 factors attached to frequency n."""
    z, w, x = complex(z), complex(w), complex(x)
    n = float(n)
    two_pi_n = 2.0 * n * math.pi
    d1 = 4.0 * two_pi_n - 4j * x
    d2 = 4.0 * two_pi_n + 4j * x
    if d1 == 0 or d2 == 0:
        raise DomainError("A(n, z, w, x) is singular at x = -+2 n pi i")
    e1 = w * w * (two_pi_n + 1j * x) / d1
    e2 = w * w * (two_pi_n - 1j * x) / d2
    return f11(0.5 + z, 0.5, e1).value + f11(0.5 + z, 0.5, e2).value


def a_factor_u(u, z, w, x):
    """A(1/u, z, w, x) for an array u, written so that u = 0 is regular."""
    u = np.asarray(u, dtype=np.complex128)
    e1 = w * w * (2.0 * math.pi + 1j * x * u) / (8.0 * math.pi - 4j * x * u)
    e2 = w * w * (2.0 * math.pi - 1j * x * u) / (8.0 * math.pi + 4j * x * u)
    return f11_array(0.5 + z, 0.5, e1) + f11_array(0.5 + z, 0.5, e2)
