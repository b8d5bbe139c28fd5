"""Outer sums over n with certified or asymptotically corrected tails.

Two shapes occur in the identities:

* exponentially decaying summands (Bessel-type left-hand sides), summed
  until a geometric tail bound is met;
* algebraic summands n^{-s} phi(1/n) with phi analytic near 0, where the
  tail beyond N is replaced by sum_j phi_j * zeta_tail(s + j, N), the
  phi_j being Taylor coefficients read off by FFT on a circle.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import PoleError, TailNotMet

HARD_CAP = 5000

# B_{2k} / (2k)! for Euler-Maclaurin
_BERNOULLI_RATIO = [
    1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0, -1.0 / 1209600.0,
    1.0 / 47900160.0, -691.0 / 1307674368000.0, 1.0 / 74724249600.0,
    -3617.0 / 10670622842880000.0,
]


@dataclass(frozen=True)
class SumResult:
    value: complex
    terms: int
    tail: float
    label: str = ""


def zeta_tail(s, N):
    """sum_{n > N} n^{-s}, analytically continued (a Hurwitz-type tail).

    Euler-Maclaurin at a cut L > N with the terms N < n < L summed
    explicitly; valid for every s != 1.
    """
    s = complex(s)
    if abs(s - 1.0) < 1e-14:
        raise PoleError("zeta tail has a pole at s = 1")
    L = int(max(N + 1, math.ceil(2.0 * abs(s)) + 20))
    n = np.arange(N + 1, L, dtype=float)
    head = complex(np.sum(np.exp(-s * np.log(n))[::-1])) if n.size else 0j
    logL = math.log(L)
    out = np.exp((1.0 - s) * logL) / (s - 1.0) + 0.5 * np.exp(-s * logL)
    # (s)_{2k-1} L^{-s-2k+1}
    rising = s
    power = np.exp(-(s + 1.0) * logL)
    for k, b in enumerate(_BERNOULLI_RATIO, start=1):
        out += b * rising * power
        rising *= (s + 2 * k - 1) * (s + 2 * k)
        power /= L * L
    return head + complex(out)


def taylor_coefficients(phi, radius, count=64):
    """First ``count`` Taylor coefficients of phi at 0 via the FFT."""
    theta = 2.0 * math.pi * np.arange(count) / count
    u = radius * np.exp(1j * theta)
    vals = np.asarray(phi(u), dtype=np.complex128)
    coef = np.fft.fft(vals) / count
    return coef * radius ** (-np.arange(count, dtype=float))


def dirichlet_sum(head_fn, phi, s, radius, N=10, start_order=0, label="", n_coef=48):
    """sum_{n >= 1} n^{-s} phi(1/n), continued analytically in s.

    ``head_fn(n)`` returns the summands for an integer array n (so the head
    can use whatever evaluation path is most accurate there); ``phi`` is
    evaluated on the circle |u| = radius to get the tail coefficients.
    Coefficients below ``start_order`` are known to vanish and are dropped.
    """
    N = int(max(N, math.ceil(2.0 / radius)))
    if N > HARD_CAP:
        raise TailNotMet(f"{label}: head length {N} exceeds the cap", terms=N)
    n = np.arange(1, N + 1)
    head_terms = np.asarray(head_fn(n), dtype=np.complex128)
    head = complex(np.sum(head_terms[::-1]))
    coef = taylor_coefficients(phi, radius, count=2 * n_coef)[:n_coef]
    tail_terms = []
    for j in range(start_order, n_coef):
        cj = coef[j]
        if cj == 0:
            tail_terms.append(0j)
            continue
        sj = s + j
        if abs(sj - 1.0) < 1e-12:
            if abs(cj) > 1e-13 * max(1.0, np.max(np.abs(coef))):
                raise PoleError(f"{label}: tail coefficient meets the pole of zeta")
            tail_terms.append(0j)
            continue
        tail_terms.append(cj * zeta_tail(sj, N))
    tail_terms = np.array(tail_terms, dtype=np.complex128)
    tail_value = complex(np.sum(tail_terms[::-1]))
    # truncation of the Taylor tail plus the FFT coefficient noise
    err = float(np.sum(np.abs(tail_terms[-4:]))) + 1e-16 * float(np.sum(np.abs(tail_terms)))
    return SumResult(head + tail_value, N, err, label)


def exp_sum(term_fn, rate, N, tail_bound=False, tail_tol=1e-15, label="", chunk=16):
    """sum_{n >= 1} term(n) for summands decaying like e^{-rate n}.

    The tail after n = k is bounded by C e^{-rate} / (1 - e^{-rate}) with
    C the largest of the last three terms scaled forward to k.  In
    tail-bound mode N is only a minimum and the sum runs until the bound
    drops below tail_tol (TailNotMet past the hard cap).
    """
    if rate <= 0:
        raise ValueError("exponential sums need a positive decay rate")
    q = math.exp(-rate)

    def bound(terms, k):
        lo = max(0, k - 3)
        mags = np.abs(terms[lo:k]) * q ** np.arange(k - lo - 1, -1, -1)
        return float(np.max(mags)) * q / (1.0 - q)

    if not tail_bound:
        n = np.arange(1, N + 1)
        terms = np.asarray(term_fn(n), dtype=np.complex128)
        return SumResult(complex(np.sum(terms[::-1])), N, bound(terms, N), label)
    terms = np.zeros(0, dtype=np.complex128)
    while True:
        start = len(terms)
        n = np.arange(start + 1, start + chunk + 1)
        terms = np.concatenate([terms, np.asarray(term_fn(n), dtype=np.complex128)])
        for k in range(max(start, 1, N - 1) + 1, len(terms) + 1):
            b = bound(terms, k)
            if b <= tail_tol:
                return SumResult(complex(np.sum(terms[:k][::-1])), k, b, label)
        if len(terms) >= HARD_CAP:
            b = bound(terms, len(terms))
            raise TailNotMet(f"{label}: tail bound {b:.3g} not met by n = {HARD_CAP}", terms=len(terms), tail=b)
        chunk = min(2 * chunk, HARD_CAP - len(terms))
