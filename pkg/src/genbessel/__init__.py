"""Generalized modified Bessel functions and numerical replays of their summation identities."""

from .besselk import (
    BesselParamsKZW, BesselParamsMuK, f_profile, k_classical, k_zw_integral, k_zw_mellin_barnes, mu_k,
)
from .complexfn import digamma, gamma, ln_gamma, rgamma
from .hypergeom import f11, f12, f21, kummer_transform
from .identities import (
    LemmaKind, Side, SummandFamily, TailMode, TheoremId, TheoremParams, TruncationPolicy, VerificationReport,
    a_factor, eval_side, lemma_check, poisson_cross_check, verify,
)
from .zetafn import sigma, zeta

__version__ = "0.1.0"

__all__ = [
    "BesselParamsKZW", "BesselParamsMuK", "f_profile", "k_classical", "k_zw_integral", "k_zw_mellin_barnes",
    "mu_k", "digamma", "gamma", "ln_gamma", "rgamma", "f11", "f12", "f21", "kummer_transform", "LemmaKind",
    "Side", "SummandFamily", "TailMode", "TheoremId", "TheoremParams", "TruncationPolicy", "VerificationReport",
    "a_factor", "eval_side", "lemma_check", "poisson_cross_check", "verify", "sigma", "zeta",
]
