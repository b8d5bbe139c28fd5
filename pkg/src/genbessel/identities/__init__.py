"""Theorem registry, verification reports and the Poisson-summation replay."""

from .api import (
    DEFAULT_TOL, POISSON_FREQUENCIES, LemmaKind, SummandFamily, constant_mismatch, eval_side, lemma_check,
    lemma_kzw_closed_form, lemma_muk_closed_form, muk_building_block_rhs, poisson_cross_check, verify,
)
from .core import SeriesDiag, Side, TailMode, TheoremId, TheoremParams, TruncationPolicy, VerificationReport
from .sums import a_factor, a_factor_u
from .theorems import (
    REGISTRY, dkm_rhs_after_kummer, dkm_rhs_before_kummer, muk_z_zero_constant_block, muk_z_zero_limit_block,
)

__all__ = [
    "DEFAULT_TOL", "POISSON_FREQUENCIES", "LemmaKind", "SummandFamily", "constant_mismatch", "eval_side",
    "lemma_check", "lemma_kzw_closed_form", "lemma_muk_closed_form", "muk_building_block_rhs",
    "poisson_cross_check", "verify", "SeriesDiag", "Side", "TailMode", "TheoremId", "TheoremParams",
    "TruncationPolicy", "VerificationReport", "a_factor", "a_factor_u", "REGISTRY", "dkm_rhs_after_kummer",
    "dkm_rhs_before_kummer", "muk_z_zero_constant_block", "muk_z_zero_limit_block",
]
