"""Positivity of ``p(t) * a + q(t)`` for all t in an interval and a in (a_lo, a_hi).

The expression is affine in ``a``, so its infimum over the open parameter
interval is approached at an endpoint.  Strict positivity at both endpoints,
or strict at one and non-strict at the other, proves strict positivity for
every interior ``a``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .exact import (
    IntervalSpec,
    NonnegativityEvidence,
    Poly,
    PositivityEvidence,
    is_nonnegative_on,
    is_positive_on,
    to_rational,
)

BOTH_STRICT = "both-strict"
LO_NONSTRICT = "lo-nonstrict"
HI_NONSTRICT = "hi-nonstrict"


@dataclass(frozen=True)
class LinearParamForm:
    p_poly: Poly
    q_poly: Poly
    a_lo: Fraction
    a_hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a_lo", to_rational(self.a_lo))
        object.__setattr__(self, "a_hi", to_rational(self.a_hi))
        if self.a_lo >= self.a_hi:
            raise ValueError("parameter interval must have a_lo < a_hi")

    def at(self, a) -> Poly:
        return self.p_poly * to_rational(a) + self.q_poly


@dataclass(frozen=True)
class LinearParamResult:
    proven: bool
    case: Optional[str]
    lo_poly: Poly
    hi_poly: Poly
    lo_strict: Optional[PositivityEvidence]
    hi_strict: Optional[PositivityEvidence]
    lo_weak: Optional[NonnegativityEvidence]
    hi_weak: Optional[NonnegativityEvidence]
    p_sign: str


def _one_sign(p: Poly, interval: IntervalSpec) -> str:
    if p.is_zero():
        return "zero"
    if is_positive_on(p, interval).positive:
        return "positive"
    if is_positive_on(-p, interval).positive:
        return "negative"
    return "mixed"


def _strict(p: Poly, interval: IntervalSpec) -> Optional[PositivityEvidence]:
    if p.is_zero():
        return None
    return is_positive_on(p, interval)


def _weak(p: Poly, interval: IntervalSpec) -> Union[NonnegativityEvidence, None]:
    if p.is_zero():
        return None
    return is_nonnegative_on(p, interval)


def prove_linear_param(form: LinearParamForm, t_interval: IntervalSpec) -> LinearParamResult:
    lo_poly, hi_poly = form.at(form.a_lo), form.at(form.a_hi)
    lo_s, hi_s = _strict(lo_poly, t_interval), _strict(hi_poly, t_interval)
    lo_ok = lo_s is not None and lo_s.positive
    hi_ok = hi_s is not None and hi_s.positive
    lo_w = hi_w = None
    case = None
    if lo_ok and hi_ok:
        case = BOTH_STRICT
    elif hi_ok:
        lo_w = _weak(lo_poly, t_interval)
        if lo_poly.is_zero() or (lo_w is not None and lo_w.nonnegative):
            case = LO_NONSTRICT
    elif lo_ok:
        hi_w = _weak(hi_poly, t_interval)
        if hi_poly.is_zero() or (hi_w is not None and hi_w.nonnegative):
            case = HI_NONSTRICT
    return LinearParamResult(
        proven=case is not None,
        case=case,
        lo_poly=lo_poly,
        hi_poly=hi_poly,
        lo_strict=lo_s,
        hi_strict=hi_s,
        lo_weak=lo_w,
        hi_weak=hi_w,
        p_sign=_one_sign(form.p_poly, t_interval),
    )
