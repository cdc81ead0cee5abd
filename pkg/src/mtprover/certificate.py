"""Certificate JSON (version 1) and its checker.

All rationals are ``"num/den"`` strings and polynomials are low-to-high
coefficient lists, so the same proof always serializes to the same bytes.
The checker trusts nothing but ``original_text``, the interval, the
parameter box, the requested method and the plan; everything else is
recomputed and must match exactly.
"""

from __future__ import annotations

import json
from typing import Any, Optional, Union

from .estimation import EstimationError, EstimationPlan, TermPlan, term_bounds, term_signs
from .exact import (
    PI_HALF_HI,
    BoundaryValue,
    IntervalSpec,
    NonnegativityEvidence,
    Poly,
    PositivityEvidence,
    rat_from_str,
    rat_to_str,
)
from .model import MtpExpr
from .params import LinearParamForm, LinearParamResult
from .taylor import MAX_DEGREE, cos_direction, sin_direction

CERT_VERSION = 1


class CertificateError(ValueError):
    pass


def dumps(d: dict) -> str:
    return json.dumps(d, indent=2, sort_keys=True) + "\n"


def _poly(p: Poly) -> list[str]:
    return [rat_to_str(c) for c in p.coeffs]


def _terms(e: MtpExpr) -> list[dict]:
    return [
        {"alpha": [rat_to_str(t.alpha.c0), rat_to_str(t.alpha.c1)], "p": t.p, "q": t.q, "r": t.r}
        for t in e.terms
    ]


def _interval(iv: IntervalSpec) -> dict:
    return {
        "lower": rat_to_str(iv.lower),
        "upper": "pi/2" if iv.upper.is_pi_half else rat_to_str(iv.upper.value),
        "upper_closed": iv.upper_closed,
        "pi_half_proxy": rat_to_str(PI_HALF_HI) if iv.uses_proxy else None,
    }


def _positivity(ev: Optional[PositivityEvidence]) -> Optional[dict]:
    if ev is None:
        return None
    return {
        "positive": ev.positive,
        "x_power": ev.x_power,
        "square_free": _poly(ev.square_free),
        "chain_length": ev.chain_length,
        "sign_changes": [ev.changes_lo, ev.changes_hi],
        "root_count": ev.root_count,
        "sample": rat_to_str(ev.sample),
        "sample_value": rat_to_str(ev.sample_value),
        "lower_value": rat_to_str(ev.lower_value),
        "upper_value": rat_to_str(ev.upper_value),
    }


def _nonneg(ev: Optional[NonnegativityEvidence]) -> Optional[dict]:
    if ev is None:
        return None
    return {
        "nonnegative": ev.nonnegative,
        "odd_part": _poly(ev.odd_part),
        "interior_roots": ev.interior_roots,
        "sample": rat_to_str(ev.sample),
        "sample_value": rat_to_str(ev.sample_value),
    }


def _plan(plan: EstimationPlan) -> list[Optional[dict]]:
    return [None if tp is None else {"s": tp.s, "k": tp.k, "variant": tp.variant} for tp in plan.per_term]


def _bounds(e: MtpExpr, plan: EstimationPlan) -> list[dict]:
    out = []
    for i, (term, tp) in enumerate(zip(e.terms, plan.per_term)):
        if tp is None:
            continue
        for b in term_bounds(term, tp):
            if b is not None:
                out.append({
                    "term": i,
                    "func": b.func,
                    "degree": b.degree,
                    "direction": b.direction,
                    "radius_squared": b.radius_squared,
                })
    return out


def certificate_to_dict(cert) -> dict:
    te = cert.khat_plan.transformed
    param = cert.normalized.param
    d: dict[str, Any] = {
        "cert_version": CERT_VERSION,
        "original_text": cert.original_text,
        "variable": cert.normalized.var,
        "param": None if param is None else {
            "name": param.name, "lo": rat_to_str(param.lo), "hi": rat_to_str(param.hi)
        },
        "method": cert.method,
        "interval": _interval(cert.interval),
        "normalized": _terms(cert.normalized),
        "khat_plan": {
            "khat": cert.khat_plan.khat,
            "method_used": cert.khat_plan.method_used,
            "transformed": _terms(te),
        },
        "plan": _plan(cert.plan),
        "bounds": _bounds(te, cert.plan),
        "conclusion": cert.conclusion,
    }
    if isinstance(cert.tp, LinearParamForm):
        ev: LinearParamResult = cert.evidence
        d["tp"] = {
            "kind": "linear-param",
            "p": _poly(cert.tp.p_poly),
            "q": _poly(cert.tp.q_poly),
            "a_lo": rat_to_str(cert.tp.a_lo),
            "a_hi": rat_to_str(cert.tp.a_hi),
        }
        d["positivity_evidence"] = {
            "kind": "linear-param",
            "case": ev.case,
            "p_sign": ev.p_sign,
            "lo_poly": _poly(ev.lo_poly),
            "hi_poly": _poly(ev.hi_poly),
            "lo_strict": _positivity(ev.lo_strict),
            "hi_strict": _positivity(ev.hi_strict),
            "lo_weak": _nonneg(ev.lo_weak),
            "hi_weak": _nonneg(ev.hi_weak),
        }
    else:
        d["tp"] = {"kind": "poly", "poly": _poly(cert.tp)}
        d["positivity_evidence"] = {"kind": "poly", **_positivity(cert.evidence)}
    return d


# ---------------------------------------------------------------------------
# checking


def _interval_from(d: dict) -> IntervalSpec:
    upper = d["upper"]
    bv = BoundaryValue.pi_half() if upper == "pi/2" else BoundaryValue.rational(rat_from_str(upper))
    iv = IntervalSpec(bv, bool(d["upper_closed"]), rat_from_str(d["lower"]))
    expected_proxy = rat_to_str(PI_HALF_HI) if iv.uses_proxy else None
    if d.get("pi_half_proxy") != expected_proxy:
        raise CertificateError("pi/2 proxy missing or wrong")
    return iv


def _plan_from(items: list) -> tuple[Optional[TermPlan], ...]:
    out = []
    for it in items:
        if it is None:
            out.append(None)
        else:
            if set(it) != {"s", "k", "variant"}:
                raise CertificateError("malformed plan entry")
            out.append(TermPlan(int(it["s"]), int(it["k"]), str(it["variant"])))
    return tuple(out)


def _check_bounds(bounds: list[dict]) -> None:
    """Every bound must carry the direction and radius its degree implies."""
    for b in bounds:
        n = b["degree"]
        if b["func"] == "sin":
            if n % 2 != 1 or b["direction"] != sin_direction(n):
                raise CertificateError(f"bad sine bound direction at degree {n}")
        elif b["func"] == "cos":
            if n % 2 != 0 or b["direction"] != cos_direction(n):
                raise CertificateError(f"bad cosine bound direction at degree {n}")
        else:
            raise CertificateError("unknown bound function")
        if n > MAX_DEGREE:
            raise CertificateError("bound degree above cap")
        if b["radius_squared"] != (n + 3) * (n + 4):
            raise CertificateError("wrong validity radius")
        if b["radius_squared"] * PI_HALF_HI.denominator**2 <= PI_HALF_HI.numerator**2:
            raise CertificateError("bound not valid up to pi/2")


def _check_admissible(te: MtpExpr, plan: tuple, khat: int) -> None:
    if len(plan) != len(te.terms):
        raise CertificateError("plan length does not match the transformed expression")
    for term, tp, sign in zip(te.terms, plan, term_signs(te)):
        if term.is_polynomial:
            if tp is not None:
                raise CertificateError("polynomial term carries a plan")
            continue
        if tp is None:
            raise CertificateError("trigonometric term without a plan")
        if sign > 0 and term.q and tp.k < khat:
            raise CertificateError(f"plan admissibility: k = {tp.k} below k-hat = {khat}")


def check_certificate(cert: Union[dict, str, Any]) -> None:
    """Raise CertificateError unless the certificate re-derives exactly."""
    from .prover import ProofCertificate, prove

    if isinstance(cert, ProofCertificate):
        cert = cert.to_dict()
    elif isinstance(cert, str):
        try:
            cert = json.loads(cert)
        except json.JSONDecodeError as exc:
            raise CertificateError(f"not JSON: {exc}") from None
    if not isinstance(cert, dict):
        raise CertificateError("certificate must be a JSON object")
    try:
        if cert.get("cert_version") != CERT_VERSION:
            raise CertificateError("unsupported cert_version")
        if cert.get("conclusion") != "proven":
            raise CertificateError("certificate does not claim a proof")
        interval = _interval_from(cert["interval"])
        param = None
        if cert["param"] is not None:
            pd = cert["param"]
            param = (rat_from_str(pd["lo"]), rat_from_str(pd["hi"]))
            param_name = pd["name"]
        else:
            param_name = None
        plan = _plan_from(cert["plan"])
        _check_bounds(cert["bounds"])
        khat = cert["khat_plan"]["khat"]
        if not isinstance(khat, int) or khat < 0:
            raise CertificateError("bad k-hat")
        result = prove(
            cert["original_text"],
            interval,
            method=cert["method"],
            plan=plan,
            param=param,
            param_name=param_name,
        )
        if not result.proven:
            raise CertificateError("recomputed polynomial is not positive")
        _check_admissible(result.khat_plan.transformed, plan, result.khat_plan.khat)
        fresh = result.to_dict()
    except CertificateError:
        raise
    except EstimationError as exc:
        raise CertificateError(f"plan admissibility: {exc}") from None
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise CertificateError(f"malformed certificate: {exc}") from None
    for key in sorted(set(fresh) | set(cert)):
        if fresh.get(key) != cert.get(key):
            raise CertificateError(f"mismatch in field {key!r}")


def verify_certificate(cert) -> bool:
    try:
        check_certificate(cert)
    except CertificateError:
        return False
    return True
