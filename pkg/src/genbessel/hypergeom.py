"""Truncated hypergeometric series 1F1, 2F1 and 1F2 with tail control."""

from dataclasses import dataclass

import numpy as np

from .complexfn import pole_mask
from .errors import BranchCut, DomainError, NonConvergence, NumericalOverflow, ParameterPole

DEFAULT_TOL = 1e-16
MAX_TERMS = 10_000
PFAFF_THRESHOLD = 0.8


@dataclass(frozen=True)
class SeriesResult:
    """Value of a truncated series with its truncation diagnostics.

    ``tail_estimate`` is absolute; convergence means it is below
    ``tol * max(1, |value|)``, the same scale the stopping rule uses.
    """

    value: complex
    terms_used: int
    tail_estimate: float
    converged: bool


def _two_sum(s, c, x):
    # Neumaier compensated accumulation on real arrays
    t = s + x
    big = np.abs(s) >= np.abs(x)
    c += np.where(big, (s - t) + x, (x - t) + s)
    return t, c


def _check_lower(b_params):
    for b in b_params:
        if np.any(pole_mask(b)):
            raise ParameterPole(f"lower parameter {b} is a nonpositive integer")


def _prep_params(a_params, b_params, x):
    x = np.asarray(x, dtype=np.complex128)
    a_params = [np.asarray(a, dtype=np.complex128) for a in a_params]
    b_params = [np.asarray(b, dtype=np.complex128) for b in b_params]
    shape = np.broadcast_shapes(x.shape, *(a.shape for a in a_params), *(b.shape for b in b_params))
    x = np.broadcast_to(x, shape)
    a_params = [np.broadcast_to(a, shape) for a in a_params]
    b_params = [np.broadcast_to(b, shape) for b in b_params]
    return a_params, b_params, x, shape


def _stop_check(prev, cur, sr, cr, si, ci, tol, hits, done, tail):
    partial = np.abs((sr + cr) + 1j * (si + ci))
    small = (np.abs(prev) + np.abs(cur)) <= tol * np.maximum(1.0, partial)
    hits = np.where(small, hits + 1, 0)
    newly = (~done) & (hits >= 2)
    tail = np.where(newly, np.abs(prev) + np.abs(cur), tail)
    return hits, done | newly, tail


def hyp_series(a_params, b_params, x, tol=DEFAULT_TOL, max_terms=MAX_TERMS):
    """Vectorized pFq series with compensated summation.

    Parameters broadcast against ``x``.  The loop stops elementwise once
    |t_n| + |t_{n+1}| <= tol * max(1, |partial|) holds for two consecutive
    n.  Returns (values, terms_used, tail, converged) as arrays.
    """
    a_params, b_params, x, shape = _prep_params(a_params, b_params, x)
    _check_lower(b_params)
    term = np.ones(shape, dtype=np.complex128)
    sr = np.ones(shape)
    si = np.zeros(shape)
    cr = np.zeros(shape)
    ci = np.zeros(shape)
    hits = np.zeros(shape, dtype=int)
    done = np.zeros(shape, dtype=bool)
    terms = np.ones(shape, dtype=int)
    tail = np.zeros(shape)
    for n in range(max_terms):
        ratio = x / (n + 1)
        for a in a_params:
            ratio = ratio * (a + n)
        for b in b_params:
            ratio = ratio / (b + n)
        nxt = term * ratio
        hits, done, tail = _stop_check(term, nxt, sr, cr, si, ci, tol, hits, done, tail)
        if np.all(done):
            break
        upd = np.where(done, 0.0, nxt)
        sr, cr = _two_sum(sr, cr, upd.real)
        si, ci = _two_sum(si, ci, upd.imag)
        terms = np.where(done, terms, terms + 1)
        term = np.where(done, term, nxt)
    values = (sr + cr) + 1j * (si + ci)
    if not np.all(np.isfinite(values)):
        raise NumericalOverflow("hypergeometric series overflowed")
    tail = np.where(done, tail, 2.0 * np.abs(term))
    return values, terms, tail, done


def hyp_series_regularized(a_params, b_params, x, tol=DEFAULT_TOL, max_terms=MAX_TERMS):
    """Series for pFq(a; b; x) / prod Gamma(b), defined for every b.

    Each term is prod (a)_n x^n / n! times prod rgamma(b + n), so lower
    parameters at nonpositive integers simply drop the leading terms.
    """
    from .complexfn import _rgamma_array
    a_params, b_params, x, shape = _prep_params(a_params, b_params, x)
    # terms before this index may vanish identically; do not stop there
    first = 1 + max([0] + [int(np.ceil(np.max(-b.real))) for b in b_params])
    numer = np.ones(shape, dtype=np.complex128)
    sr = np.zeros(shape)
    si = np.zeros(shape)
    cr = np.zeros(shape)
    ci = np.zeros(shape)
    hits = np.zeros(shape, dtype=int)
    done = np.zeros(shape, dtype=bool)
    terms = np.zeros(shape, dtype=int)
    tail = np.zeros(shape)
    prev = None
    for n in range(max_terms):
        if n > 0:
            numer = numer * x / n
            for a in a_params:
                numer = numer * (a + (n - 1))
        cur = numer.copy()
        for b in b_params:
            cur = cur * _rgamma_array((b + n).ravel()).reshape(shape)
        if n >= first:
            hits, done, tail = _stop_check(prev, cur, sr, cr, si, ci, tol, hits, done, tail)
            if np.all(done):
                break
        upd = np.where(done, 0.0, cur)
        sr, cr = _two_sum(sr, cr, upd.real)
        si, ci = _two_sum(si, ci, upd.imag)
        terms = np.where(done, terms, terms + 1)
        prev = cur
    values = (sr + cr) + 1j * (si + ci)
    if not np.all(np.isfinite(values)):
        raise NumericalOverflow("hypergeometric series overflowed")
    return values, terms, tail, done


def _result(values, terms, tail, converged, what):
    v = complex(np.asarray(values).ravel()[0])
    t = int(np.asarray(terms).ravel()[0])
    e = float(np.asarray(tail).ravel()[0])
    ok = bool(np.asarray(converged).ravel()[0])
    if not ok:
        raise NonConvergence(f"{what} hit the term cap", value=v, estimate=e)
    return SeriesResult(v, t, e, ok)


def f11(a, c, x, tol=DEFAULT_TOL, max_terms=MAX_TERMS):
    """Confluent hypergeometric 1F1(a; c; x)."""
    return _result(*hyp_series([a], [c], x, tol, max_terms), "1F1")


def f12(a, b1, b2, x, tol=DEFAULT_TOL, max_terms=MAX_TERMS):
    """1F2(a; b1, b2; x)."""
    return _result(*hyp_series([a], [b1, b2], x, tol, max_terms), "1F2")


def f21_array(a, b, c, x, tol=DEFAULT_TOL, max_terms=MAX_TERMS):
    """Vectorized 2F1 with the Pfaff map on the negative real axis."""
    x = np.asarray(x, dtype=np.complex128)
    _check_lower([np.asarray(c, dtype=np.complex128)])
    on_cut = (np.abs(x.imag) == 0) & (x.real >= 1.0)
    if np.any(on_cut):
        raise BranchCut("2F1 argument on the branch cut [1, inf)")
    pfaff = (np.abs(x) > PFAFF_THRESHOLD) & (x.real < 0) & (np.abs(x.imag) <= 1e-14 * np.abs(x))
    outside = (np.abs(x) >= 1.0) & ~pfaff
    if np.any(outside):
        raise DomainError("2F1 is only implemented on the unit disk and the negative real axis")
    shape = np.broadcast_shapes(x.shape, np.shape(a), np.shape(b), np.shape(c))
    x = np.broadcast_to(x, shape)
    a = np.broadcast_to(np.asarray(a, dtype=np.complex128), shape)
    b = np.broadcast_to(np.asarray(b, dtype=np.complex128), shape)
    c = np.broadcast_to(np.asarray(c, dtype=np.complex128), shape)
    xm = np.where(pfaff, x / (x - 1.0), x)
    bm = np.where(pfaff, c - b, b)
    vals, terms, tail, conv = hyp_series([a, bm], [c], xm, tol, max_terms)
    scale = np.where(pfaff, (1.0 - x) ** (-a), 1.0)
    return vals * scale, terms, tail * np.abs(scale), conv


def f21(a, b, c, x, tol=DEFAULT_TOL, max_terms=MAX_TERMS):
    """Gauss hypergeometric 2F1(a, b; c; x)."""
    return _result(*f21_array(a, b, c, x, tol, max_terms), "2F1")


def f11_array(a, c, x, tol=DEFAULT_TOL, max_terms=MAX_TERMS):
    vals, _, _, conv = hyp_series([a], [c], x, tol, max_terms)
    if not np.all(conv):
        raise NonConvergence("1F1 hit the term cap")
    return vals


def f12_array(a, b1, b2, x, tol=DEFAULT_TOL, max_terms=MAX_TERMS):
    vals, _, _, conv = hyp_series([a], [b1, b2], x, tol, max_terms)
    if not np.all(conv):
        raise NonConvergence("1F2 hit the term cap")
    return vals


def kummer_transform(b, c, x, tol=DEFAULT_TOL):
    """Right-hand side of 1F1(b; c; x) = e^x 1F1(c-b; c; -x)."""
    r = f11(c - b, c, -x, tol)
    return complex(np.exp(x) * r.value)
