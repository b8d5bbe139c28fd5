"""Identifiers, parameter sets, truncation policy and reports."""

import enum
import math
from dataclasses import dataclass, field, fields
from typing import Optional

from ..errors import DomainGate


class TheoremId(enum.Enum):
    RAMANUJAN_GUINAND = "ramanujan_guinand"
    WATSON_CLASSICAL = "watson"
    DKM_GENERALIZED = "dkm"
    WATSON_KZW = "watson_kzw"
    WATSON_KZW_CONTINUED = "watson_kzw_continued"
    WATSON_CLASSICAL_CONTINUED = "watson_continued"
    WATSON_MUK = "watson_muk"
    WATSON_MUK_CONTINUED = "watson_muk_continued"
    MUK_Z_ZERO = "muk_z_zero"
    WATSON_K_ZERO = "watson_k_zero"
    LEMMA_KZW_INTEGRAL = "lemma_kzw"
    LEMMA_MUK_INTEGRAL = "lemma_muk"
    POISSON_CROSS_CHECK = "poisson"

    @classmethod
    def parse(cls, text):
        key = str(text).strip().lower().replace("-", "_")
        for member in cls:
            if key in (member.value, member.name.lower()):
                return member
        raise KeyError(f"unknown theorem id {text!r}")


class Side(enum.Enum):
    LHS = "lhs"
    RHS = "rhs"


class TailMode(enum.Enum):
    FIXED_N = "fixed_n"
    TAIL_BOUND = "tail_bound"


_COMPLEX_FIELDS = ("z", "w", "mu", "lam", "x", "alpha", "beta")


@dataclass(frozen=True)
class TheoremParams:
    """Everything one identity instance needs; unused entries stay None."""

    z: Optional[complex] = None
    w: Optional[complex] = None
    mu: Optional[complex] = None
    lam: Optional[complex] = None
    x: Optional[complex] = None
    alpha: Optional[complex] = None
    beta: Optional[complex] = None
    a: Optional[float] = None
    M: Optional[int] = None
    n_for_lemma: Optional[int] = None

    def __post_init__(self):
        for name in _COMPLEX_FIELDS:
            v = getattr(self, name)
            if v is None:
                continue
            c = complex(v)
            if not (math.isfinite(c.real) and math.isfinite(c.imag)):
                raise DomainGate(f"{name} must be finite")
            object.__setattr__(self, name, c)
        if self.a is not None:
            a = float(self.a)
            if not math.isfinite(a):
                raise DomainGate("a must be finite")
            object.__setattr__(self, "a", a)
        for name in ("M", "n_for_lemma"):
            v = getattr(self, name)
            if v is not None:
                if int(v) != v or int(v) < 1:
                    raise DomainGate(f"{name} must be a positive integer")
                object.__setattr__(self, name, int(v))

    def require(self, *names):
        missing = [n for n in names if getattr(self, n) is None]
        if missing:
            raise DomainGate("missing parameter(s): " + ", ".join(missing))
        return tuple(getattr(self, n) for n in names)

    def replace(self, **changes):
        data = {f.name: getattr(self, f.name) for f in fields(self)}
        data.update(changes)
        return TheoremParams(**data)

    def to_dict(self):
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            if v is None:
                continue
            out[f.name] = {"re": v.real, "im": v.imag} if isinstance(v, complex) else v
        return out


@dataclass(frozen=True)
class TruncationPolicy:
    series_terms_N: int = 20
    tail_mode: TailMode = TailMode.TAIL_BOUND
    tail_tol: float = 1e-13
    inner_tol: float = 1e-12

    def __post_init__(self):
        if int(self.series_terms_N) != self.series_terms_N or self.series_terms_N < 1:
            raise ValueError("series_terms_N must be a positive integer")
        if not (self.tail_tol > 0 and self.inner_tol > 0):
            raise ValueError("tail_tol and inner_tol must be positive")

    @property
    def tail_bound(self):
        return self.tail_mode is TailMode.TAIL_BOUND


@dataclass(frozen=True)
class SeriesDiag:
    label: str
    terms: int
    tail: float


@dataclass
class VerificationReport:
    theorem: TheoremId
    params: TheoremParams
    lhs: Optional[complex]
    rhs: Optional[complex]
    abs_residual: float
    rel_residual: float
    per_series_terms: list = field(default_factory=list)
    passed: bool = False
    wall_time_ms: float = 0.0
    tol: float = 0.0
    flags: list = field(default_factory=list)
    error: Optional[str] = None

    def to_dict(self, timestamps=True):
        def cx(v):
            return None if v is None else {"re": v.real, "im": v.imag}

        out = {
            "theorem": self.theorem.value,
            "params": self.params.to_dict(),
            "lhs": cx(self.lhs),
            "rhs": cx(self.rhs),
            "abs_residual": self.abs_residual,
            "rel_residual": self.rel_residual,
            "series": [{"label": s.label, "terms": s.terms, "tail": s.tail} for s in self.per_series_terms],
            "passed": self.passed,
            "tol": self.tol,
            "flags": list(self.flags),
            "error": self.error,
        }
        if timestamps:
            out["wall_time_ms"] = self.wall_time_ms
        return out
