"""Exact p-adic computation toolkit.

Finite-precision Qp arithmetic, Bruhat cell decomposition of GL3 over Qp
with branching cocycles, finite models of Steinberg representations,
p-adic measures on unit groups, signed-permutation Weyl combinatorics,
Hecke-Satake polynomial identities, and L-invariant formulas, together
with a verification CLI.
"""

__version__ = "0.1.0"

from .padic import (
    DualNumber,
    Homomorphism,
    PadicNumber,
    exp_p,
    hom_eval,
    log_p,
    teichmuller,
)

__all__ = [
    "PadicNumber",
    "DualNumber",
    "Homomorphism",
    "log_p",
    "exp_p",
    "teichmuller",
    "hom_eval",
]
