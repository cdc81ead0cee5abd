"""Exact prover for mixed trigonometric-polynomial inequalities on (0, b] within (0, pi/2)."""

from .certificate import CertificateError, check_certificate, verify_certificate
from .estimation import EstimationPlan, TermPlan, auto_search, estimate_expr, estimate_term
from .exact import (
    PI_HALF_HI,
    PI_HALF_LO,
    BoundaryValue,
    IntervalSpec,
    Poly,
    count_roots,
    is_positive_on,
    isolate_root,
    poly_eval,
    poly_mul,
    sturm_chain,
)
from .model import MtpExpr, MtpTerm, eliminate_even_cos, khat_method_c, normalize, select_khat
from .params import LinearParamForm, prove_linear_param
from .parser import ParseError, parse_expr
from .prover import ProofCertificate, ProofFailure, prove
from .taylor import TaylorBound, cos_crossing_dk, cos_root_ck, taylor_cos, taylor_sin

__version__ = "0.1.0"

__all__ = [
    "BoundaryValue",
    "CertificateError",
    "EstimationPlan",
    "IntervalSpec",
    "LinearParamForm",
    "MtpExpr",
    "MtpTerm",
    "PI_HALF_HI",
    "PI_HALF_LO",
    "ParseError",
    "Poly",
    "ProofCertificate",
    "ProofFailure",
    "TaylorBound",
    "TermPlan",
    "auto_search",
    "check_certificate",
    "cos_crossing_dk",
    "cos_root_ck",
    "count_roots",
    "eliminate_even_cos",
    "estimate_expr",
    "estimate_term",
    "is_positive_on",
    "isolate_root",
    "khat_method_c",
    "normalize",
    "parse_expr",
    "poly_eval",
    "poly_mul",
    "prove",
    "prove_linear_param",
    "select_khat",
    "sturm_chain",
    "taylor_cos",
    "taylor_sin",
    "verify_certificate",
]
