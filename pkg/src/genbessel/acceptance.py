"""The acceptance suite behind ``genbessel selftest``.

Each criterion is a list of checks (label, measured quantity, tolerance).
Criteria belong to a group so that ``selftest --only`` can filter them.
Results carry no timing data, so their JSON form is reproducible.
"""

import cmath
import itertools
import json
import math
from dataclasses import dataclass, field

from . import besselk
from .complexfn import PI, SQRT_PI, gamma, sinpi
from .errors import GenBesselError
from .hypergeom import f11, kummer_transform
from .identities import (
    LemmaKind, SummandFamily, TheoremId, TheoremParams, TruncationPolicy, lemma_check, lemma_kzw_closed_form,
    poisson_cross_check, verify,
)
from .identities.theorems import REGISTRY
from .lemmas import cosine_transform_check
from .zetafn import zeta

P = TheoremParams
POLICY = TruncationPolicy()
KZW_GRID = list(itertools.product((0.3, 0.75, 1.2), (0.0, 0.5, 0.5 + 0.25j), (0.8, 1.0, 2.0)))


@dataclass
class Check:
    label: str
    value: float
    tol: float
    error: str = None

    @property
    def passed(self):
        return self.error is None and math.isfinite(self.value) and self.value <= self.tol

    def to_dict(self):
        return {"label": self.label, "value": self.value, "tol": self.tol, "passed": self.passed,
                "error": self.error}


@dataclass
class CriterionResult:
    number: int
    name: str
    group: str
    checks: list = field(default_factory=list)

    @property
    def passed(self):
        return bool(self.checks) and all(c.passed for c in self.checks)

    def to_dict(self):
        return {"criterion": self.number, "name": self.name, "group": self.group, "passed": self.passed,
                "checks": [c.to_dict() for c in self.checks]}


def _rel(a, b):
    return abs(a - b) / max(1.0, abs(b))


def _verified(label, theorem, params, tol):
    r = verify(theorem, params, POLICY, tol)
    return Check(label, r.rel_residual, tol, r.error), r


def _sides(theorem, params):
    gate, lhs, rhs = REGISTRY[theorem]
    gate(params)
    return complex(lhs(params, POLICY, [])), complex(rhs(params, POLICY, []))


def _c1():
    a, _ = _verified("x=1 z=0.75", TheoremId.WATSON_CLASSICAL, P(x=1, z=0.75), 1e-8)
    b, _ = _verified("x=2 z=1.5+0.5i", TheoremId.WATSON_CLASSICAL, P(x=2, z=1.5 + 0.5j), 1e-7)
    return [a, b]


def _c2():
    beta = PI * PI / 2
    a, _ = _verified("alpha=2 z=1.3", TheoremId.RAMANUJAN_GUINAND, P(alpha=2, beta=beta, z=1.3), 1e-8)
    b, _ = _verified("alpha=2 z=0.5+0.4i", TheoremId.RAMANUJAN_GUINAND, P(alpha=2, beta=beta, z=0.5 + 0.4j), 1e-7)
    r = verify(TheoremId.RAMANUJAN_GUINAND, P(alpha=PI, beta=PI, z=1.3), POLICY, 1e-10)
    sym = Check("alpha=beta=pi |lhs|,|rhs|", r.rel_residual if r.error else max(abs(r.lhs), abs(r.rhs)), 1e-10,
                r.error)
    return [a, b, sym]


def _c3():
    beta = PI * PI / 2
    a, _ = _verified("alpha=2 z=1.3 w=0.5", TheoremId.DKM_GENERALIZED, P(alpha=2, beta=beta, z=1.3, w=0.5), 1e-6)
    d = verify(TheoremId.DKM_GENERALIZED, P(alpha=2, beta=beta, z=1.3, w=0), POLICY, 1e-8)
    g = verify(TheoremId.RAMANUJAN_GUINAND, P(alpha=2, beta=beta, z=1.3), POLICY, 1e-8)
    err = d.error or g.error
    b = Check("w=0 residual vs Ramanujan-Guinand", abs(d.rel_residual - g.rel_residual) if not err else math.inf,
              1e-9, err)
    return [a, b]


def _c4():
    a, _ = _verified("w=0.3", TheoremId.WATSON_KZW, P(x=1, z=0.75, w=0.3), 1e-6)
    b, _ = _verified("w=0.3+0.2i", TheoremId.WATSON_KZW, P(x=1, z=0.75, w=0.3 + 0.2j), 1e-6)
    k = verify(TheoremId.WATSON_KZW, P(x=1, z=0.75, w=0), POLICY, 1e-8)
    c = verify(TheoremId.WATSON_CLASSICAL, P(x=1, z=0.75), POLICY, 1e-8)
    err = k.error or c.error
    # the collapse is exact: both sides coincide bit for bit
    gap = max(abs(k.lhs - c.lhs), abs(k.rhs - c.rhs), abs(k.rel_residual - c.rel_residual)) if not err else math.inf
    return [a, b, Check("w=0 collapse onto Watson", gap, 0.0, err)]


def _c5():
    a, _ = _verified("z=-0.6 w=0.4 M=1", TheoremId.WATSON_KZW_CONTINUED, P(x=1, z=-0.6, w=0.4, M=1), 1e-6)
    p = P(x=1, z=0.75, w=0.4, M=1)
    checks = [a]
    try:
        lc, rc = _sides(TheoremId.WATSON_KZW_CONTINUED, p)
        lb, rb = _sides(TheoremId.WATSON_KZW, p.replace(M=None))
        checks.append(Check("overlap z=0.75 vs base", max(_rel(lc, lb), _rel(rc, rb)), 1e-9))
    except GenBesselError as exc:
        checks.append(Check("overlap z=0.75 vs base", math.inf, 1e-9, str(exc)))
    b, _ = _verified("Watson continued z=-0.6 M=1", TheoremId.WATSON_CLASSICAL_CONTINUED, P(x=1, z=-0.6, M=1), 1e-7)
    return checks + [b]


def _c6():
    a, _ = _verified("x=1", TheoremId.WATSON_MUK, P(mu=0.4, lam=0.3, z=0.6, x=1), 1e-6)
    b, _ = _verified("x=8 (Pfaff path)", TheoremId.WATSON_MUK, P(mu=0.4, lam=0.3, z=0.6, x=8), 1e-6)
    return [a, b]


def _c7():
    a, _ = _verified("z=-0.6 M=1", TheoremId.WATSON_MUK_CONTINUED, P(mu=0.4, lam=0.3, z=-0.6, x=1, M=1), 1e-6)
    p = P(mu=0.4, lam=0.3, z=0.6, x=1, M=1)
    try:
        lc, rc = _sides(TheoremId.WATSON_MUK_CONTINUED, p)
        lb, rb = _sides(TheoremId.WATSON_MUK, p.replace(M=None))
        b = Check("overlap z=0.6 vs base", max(_rel(lc, lb), _rel(rc, rb)), 1e-9)
    except GenBesselError as exc:
        b = Check("overlap z=0.6 vs base", math.inf, 1e-9, str(exc))
    return [a, b]


def _c8():
    a, _ = _verified("z=0 limit mu=0.4 lam=0.3", TheoremId.MUK_Z_ZERO, P(mu=0.4, lam=0.3, x=1), 1e-6)
    b, cor = _verified("Watson z=0 at x=1", TheoremId.WATSON_K_ZERO, P(x=1), 1e-8)
    # mu = 0 with lambda -> 0 reduces muK_0(x, lambda) to K_0(x)
    path = verify(TheoremId.MUK_Z_ZERO, P(mu=0, lam=1e-7, x=1), POLICY, 1e-6)
    err = path.error or cor.error
    gap = max(abs(path.lhs - cor.rhs), abs(path.rhs - cor.rhs)) if not err else math.inf
    return [a, b, Check("mu=0 lam->0 path vs z=0 Watson", gap, 1e-5, err)]


def _c9():
    checks = []
    for label, kind, p in (
        ("K_zw lemma a=2pi", LemmaKind.KZW, P(z=0.75, w=0.5, x=1, a=2 * PI)),
        ("K_zw lemma a=0", LemmaKind.KZW, P(z=0.75, w=0.5, x=1, a=0)),
        ("muK lemma a=2pi", LemmaKind.MUK, P(mu=0.4, lam=0.3, z=0.6, x=1, a=2 * PI)),
        ("muK lemma a=0", LemmaKind.MUK, P(mu=0.4, lam=0.3, z=0.6, x=1, a=0)),
    ):
        r = lemma_check(kind, p, 1e-6)
        checks.append(Check(label, r.abs_residual, 1e-6, r.error))
    # w = 0 special case against its own closed form
    z, x, a = 0.75, 1.0, 3.0
    cor = 0.5 * SQRT_PI * gamma(0.5 + z) * x ** (2 * z) * (x * x + a * a) ** (-(z + 0.5))
    r = lemma_check(LemmaKind.KZW, P(z=z, w=0, x=x, a=a), 1e-6)
    checks.append(Check("K_zw lemma w=0 closed form", abs(lemma_kzw_closed_form(z, 0, x, a) - cor), 1e-12))
    checks.append(Check("K_zw lemma w=0 quadrature", r.abs_residual, 1e-6, r.error))
    g = besselk.BesselParamsMuK(0.4, 0.6, 0.3, 1.0)
    try:
        row = cosine_transform_check(g, 2 * PI, case="vanishing")
        checks.append(Check("vanishing 1F2 cosine integral", row.residual, 1e-6))
    except GenBesselError as exc:
        checks.append(Check("vanishing 1F2 cosine integral", math.inf, 1e-6, str(exc)))
    return checks


def _c10():
    checks = []
    for label, fam, p in (
        ("K_zw summand", SummandFamily.KZW_SUMMAND, P(z=0.75, w=0.3, x=1)),
        ("muK summand", SummandFamily.MUK_SUMMAND, P(mu=0.4, lam=0.3, z=0.6, x=1)),
    ):
        r = poisson_cross_check(fam, p, POLICY, 1e-5)
        checks.append(Check(label, r.rel_residual, 1e-5, r.error))
    return checks


def _c11():
    pts = (0.3 + 0.1j, 1.7, -2.4 + 0.5j, 3.5 - 2j, 0.5 + 7j)
    rec = max(abs(gamma(s + 1) - s * gamma(s)) / abs(s * gamma(s)) for s in pts)
    refl = max(abs(gamma(s) * gamma(1 - s) * sinpi(s) / PI - 1) for s in pts)
    kum = 0.0
    for b, c, x in ((0.75, 0.5, 0.3 + 0.2j), (1.3, 0.5, -2.5), (-0.4 + 0.3j, 1.5, 4 - 1j)):
        lhs = f11(b, c, x).value
        kum = max(kum, abs(lhs - kummer_transform(b, c, x)) / max(1.0, abs(lhs)))
    fe = 0.0
    for s in (0.3 + 2j, -1.5 + 0.5j, 2.5, 0.7 - 14j, -3.3):
        rhs = 2 ** s * PI ** (s - 1) * sinpi(s / 2) * gamma(1 - s) * zeta(1 - s)
        fe = max(fe, abs(zeta(s) - rhs) / max(1.0, abs(zeta(s))))
    grid = 0.0
    for z, w, x in KZW_GRID:
        p = besselk.BesselParamsKZW(z, w, x)
        mb = besselk.k_zw_mellin_barnes(p)
        grid = max(grid, abs(besselk.k_zw_integral(p) - mb) / abs(mb))
        if w == 0:
            grid = max(grid, abs(besselk.k_classical(z, x) - mb) / abs(mb))
    red = 0.0
    for z, lam, x in ((0.4, 0.7, 1.3), (0.4, 0.0, 1.3), (0.65 + 0.2j, 0.3, 2.0)):
        mk = besselk.mu_k(besselk.BesselParamsMuK(-z, z, lam, x))
        ref = cmath.exp(lam * cmath.log(x)) * besselk.k_classical(z, x)
        red = max(red, abs(mk - ref) / abs(ref))
    return [
        Check("gamma recurrence", rec, 1e-10),
        Check("gamma reflection", refl, 1e-10),
        Check("Kummer transformation", kum, 1e-10),
        Check("zeta functional equation", fe, 1e-10),
        Check("K_zw two methods on 27-point grid", grid, 1e-7),
        Check("-zK_z(x, lam) = x^lam K_z(x)", red, 1e-9),
    ]


def _c12():
    # the suite's deterministic core run twice in-process; the CLI test
    # compares two full `selftest --json --no-timestamp` runs byte for byte
    first = json.dumps([c.to_dict() for c in _run_checks(_DETERMINISM_SUBSET)], sort_keys=True)
    second = json.dumps([c.to_dict() for c in _run_checks(_DETERMINISM_SUBSET)], sort_keys=True)
    return [Check("repeated runs serialize identically", 0.0 if first == second else 1.0, 0.0)]


CRITERIA = (
    (1, "Watson classical", "identities", _c1),
    (2, "Ramanujan-Guinand", "identities", _c2),
    (3, "DKM generalization", "identities", _c3),
    (4, "Watson with K_zw", "identities", _c4),
    (5, "K_zw continuation", "identities", _c5),
    (6, "Watson with muK", "identities", _c6),
    (7, "muK continuation", "identities", _c7),
    (8, "z=0 limits", "identities", _c8),
    (9, "integral lemmas", "lemmas", _c9),
    (10, "Poisson cross-checks", "poisson", _c10),
    (11, "special functions", "special_functions", _c11),
    (12, "determinism", "determinism", _c12),
)
GROUPS = tuple(sorted({c[2] for c in CRITERIA}))
_DETERMINISM_SUBSET = (1, 2, 4, 11)


def _run_checks(numbers):
    out = []
    for num, _, _, fn in CRITERIA:
        if num in numbers:
            out.extend(fn())
    return out


def run_criterion(number):
    num, name, group, fn = next(c for c in CRITERIA if c[0] == number)
    try:
        checks = fn()
    except GenBesselError as exc:
        checks = [Check(name, math.inf, 0.0, f"{type(exc).__name__}: {exc}")]
    return CriterionResult(num, name, group, checks)


def run_suite(only=None):
    """Run every criterion, or only those whose group or number is listed in ``only``."""
    selected = []
    for num, _, group, _ in CRITERIA:
        if not only or group in only or str(num) in only:
            selected.append(run_criterion(num))
    return selected


def format_line(result):
    worst = max(result.checks, key=lambda c: (not c.passed, c.value / c.tol if c.tol else c.value))
    status = "PASS" if result.passed else "FAIL"
    return f"[{status}] {result.number:2d} {result.name:<24s} worst {worst.label}: {worst.value:.3g} (tol {worst.tol:g})"
