"""Drive the whole reduction: k-hat, estimation, exact positivity, certificate."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .enclosure import expr_enclosure
from .estimation import (
    DEFAULT_BUDGET,
    DEFAULT_MAX_CANDIDATES,
    AffinePoly,
    BudgetExhausted,
    EstimationPlan,
    TermPlan,
    auto_search,
    estimate_expr,
)
from .exact import (
    PI_HALF_LO,
    BoundaryValue,
    IntervalSpec,
    Poly,
    PositivityEvidence,
    compare_boundaries,
    is_positive_on,
    isolate_all_roots,
    poly_eval,
)
from .model import KhatPlan, MtpExpr, normalize, select_khat
from .params import LinearParamForm, LinearParamResult, prove_linear_param
from .parser import parse_expr

log = logging.getLogger(__name__)

PROVEN = "proven"
NOT_PROVEN = "not-proven"
DISPROVEN = "disproven"

DIAGNOSTIC_EPS = Fraction(1, 10**6)
COUNTEREXAMPLE_SAMPLES = 16


_PI_HALF = BoundaryValue.pi_half()


class IntervalError(ValueError):
    pass


@dataclass(frozen=True)
class ProofCertificate:
    original_text: str
    method: str
    normalized: MtpExpr
    interval: IntervalSpec
    khat_plan: KhatPlan
    plan: EstimationPlan
    tp: Union[Poly, LinearParamForm]
    evidence: Union[PositivityEvidence, LinearParamResult]
    conclusion: str = PROVEN

    @property
    def proven(self) -> bool:
        return self.conclusion == PROVEN

    def to_dict(self) -> dict:
        from .certificate import certificate_to_dict

        return certificate_to_dict(self)

    def to_json(self) -> str:
        from .certificate import dumps

        return dumps(self.to_dict())


@dataclass(frozen=True)
class ProofFailure:
    status: str  # NOT_PROVEN or DISPROVEN
    reason: str
    original_text: str
    normalized: Optional[MtpExpr] = None
    khat_plan: Optional[KhatPlan] = None
    last_plan: Optional[EstimationPlan] = None
    last_tp: Optional[Union[Poly, AffinePoly]] = None
    root_enclosures: tuple = ()
    witness: Optional[tuple[Fraction, Fraction]] = None  # (x, TP(x)) with TP(x) <= 0
    counterexample: Optional[dict] = None
    candidates_tried: int = 0

    proven = False


def check_interval(interval: IntervalSpec) -> None:
    if interval.lower != 0:
        raise IntervalError("only intervals (0, b] and (0, b) are supported")
    if compare_boundaries(interval.upper, _PI_HALF) > 0:
        raise IntervalError("upper end must not exceed pi/2")


def _decide(tp, e: MtpExpr, interval: IntervalSpec):
    if isinstance(tp, AffinePoly):
        form = LinearParamForm(tp.p, tp.q, e.param.lo, e.param.hi)
        res = prove_linear_param(form, interval)
        return form, res, res.proven
    ev = is_positive_on(tp, interval)
    return tp, ev, ev.positive


def resolve_expr(text_or_expr, param: Optional[tuple] = None, param_name: Optional[str] = None):
    """Parse (if needed) and attach the parameter interval ``(lo, hi)``."""
    if isinstance(text_or_expr, MtpExpr):
        e, text = text_or_expr, text_or_expr.to_text()
    else:
        text = text_or_expr
        e = parse_expr(text, param=param_name)
    if param is not None:
        e = e.with_param_interval(*param)
    return e, text


def prove(
    expr: Union[str, MtpExpr],
    interval: IntervalSpec,
    *,
    method: str = "auto",
    budget: int = DEFAULT_BUDGET,
    plan: Optional[Sequence[Optional[TermPlan]]] = None,
    param: Optional[tuple] = None,
    param_name: Optional[str] = None,
    max_candidates: int = DEFAULT_MAX_CANDIDATES,
) -> Union[ProofCertificate, ProofFailure]:
    """Try to prove ``expr > 0`` on ``interval``.

    ``plan`` pins the per-term degree choices (aligned with the transformed,
    normalized terms); otherwise they are searched up to ``budget``.
    """
    e, text = resolve_expr(expr, param, param_name)
    check_interval(interval)
    normalized = normalize(e)
    khat_plan = select_khat(normalized, interval, method)
    te = normalize(khat_plan.transformed)
    log.info("k-hat %d via %s; %d terms to estimate", khat_plan.khat, khat_plan.method_used, len(te.terms))

    if plan is not None:
        eplan = EstimationPlan(khat_plan, tuple(plan))
        tp = estimate_expr(te, eplan)
        tp_out, evidence, ok = _decide(tp, te, interval)
        if ok:
            return ProofCertificate(text, method, normalized, interval, khat_plan, eplan, tp_out, evidence)
        return _failure(text, normalized, khat_plan, interval, "pinned plan does not prove positivity",
                        eplan, tp, 1)

    try:
        found = auto_search(te, interval, budget, khat_plan=khat_plan, max_candidates=max_candidates)
    except BudgetExhausted as exc:
        last_plan, last_tp = (exc.diagnostic[0], exc.diagnostic[1]) if exc.diagnostic else (None, None)
        return _failure(text, normalized, khat_plan, interval, str(exc), last_plan, last_tp, exc.tried)
    log.info("plan found after %d candidates", found.tried)
    tp_out, evidence, _ = _decide(found.tp, te, interval)
    return ProofCertificate(text, method, normalized, interval, khat_plan, found.plan, tp_out, evidence)


def _witness(p: Poly, interval: IntervalSpec):
    """Root enclosures of ``p`` and a rational point where ``p <= 0``, if found."""
    if p.is_zero():
        return (), (interval.midpoint(), Fraction(0))
    roots = tuple(isolate_all_roots(p, interval, DIAGNOSTIC_EPS))
    points = [interval.midpoint()]
    for lo, hi in roots:
        points += [lo, hi, (lo + hi) / 2]
    edges = [interval.lower] + [x for r in roots for x in r] + [interval.hi]
    points += [(a + b) / 2 for a, b in zip(edges, edges[1:]) if a < b]
    for x in sorted(set(points)):
        if interval.contains(x):
            v = poly_eval(p, x)
            if v <= 0:
                return roots, (x, v)
    return roots, None


def _failure(text, normalized, khat_plan, interval, reason, plan, tp, tried) -> ProofFailure:
    roots, witness = (), None
    if tp is not None:
        if isinstance(tp, AffinePoly):
            a_lo, a_hi = normalized.param.lo, normalized.param.hi
            for a in (a_hi, a_lo):
                roots, witness = _witness(tp.at(a), interval)
                if witness is not None:
                    break
        else:
            roots, witness = _witness(tp, interval)
    cex = find_counterexample(normalized, interval)
    status = DISPROVEN if cex else NOT_PROVEN
    return ProofFailure(status, reason, text, normalized, khat_plan, plan, tp, roots, witness, cex, tried)


def find_counterexample(e: MtpExpr, interval: IntervalSpec, samples: int = COUNTEREXAMPLE_SAMPLES):
    """A sample point where the enclosure of ``e`` is strictly negative."""
    lo, hi = interval.lower, interval.hi
    if interval.uses_proxy:
        hi = PI_HALF_LO
    a_values = [None]
    if e.param is not None and e.param.bounded:
        pl, ph = e.param.lo, e.param.hi
        a_values = [pl + (ph - pl) * Fraction(j, 4) for j in (1, 2, 3)]
    for i in range(1, samples + 1):
        x = lo + (hi - lo) * Fraction(i, samples + 1)
        for a in a_values:
            enc = expr_enclosure(e, x, a)
            if enc[1] < 0:
                return {"x": x, "a": a, "enclosure": enc}
    return None
