"""Exact-arithmetic knot Floer standard complexes and the gamma_0 invariant."""

from .algebra import LaurentPoly, Mode, RingElem, alexander_torus
from .complexes import ChainComplex, Endomorphism, Generator
from .involutive import basic_involution, phi_psi, tensor_involution, verify_lemma_43_44
from .knots import (
    Cable2,
    CableRegime,
    Mirror,
    Sum,
    Torus,
    Unknot,
    cable2,
    cable_genus,
    eval_expr,
    gamma0_of,
    genus_of,
    locally_equivalent,
    p_knot,
    parse_expr,
    staircase_from_alexander,
    sum_with_T2,
    tau_cable_formula,
)
from .standard import (
    SharpnessReport,
    epsilon,
    extract_gamma0,
    normalize_seq,
    seq_to_complex,
    sharpness,
    simplify_basis,
    tau,
    top_alexander,
    validate_seq,
)

__version__ = "0.1.0"

__all__ = [
    "LaurentPoly",
    "Mode",
    "RingElem",
    "alexander_torus",
    "ChainComplex",
    "Endomorphism",
    "Generator",
    "basic_involution",
    "phi_psi",
    "tensor_involution",
    "verify_lemma_43_44",
    "Cable2",
    "CableRegime",
    "Mirror",
    "Sum",
    "Torus",
    "Unknot",
    "cable2",
    "cable_genus",
    "eval_expr",
    "gamma0_of",
    "genus_of",
    "locally_equivalent",
    "p_knot",
    "parse_expr",
    "staircase_from_alexander",
    "sum_with_T2",
    "tau_cable_formula",
    "SharpnessReport",
    "epsilon",
    "extract_gamma0",
    "normalize_seq",
    "seq_to_complex",
    "sharpness",
    "simplify_basis",
    "tau",
    "top_alexander",
    "validate_seq",
    "__version__",
]
