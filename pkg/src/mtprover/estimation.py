"""Replace each trig factor by a Taylor bound of the right direction.

A term with a positive coefficient gets downward bounds of sin (degree 4s+3)
and cos (degree 4k+2, k >= k-hat); a negative one gets upward bounds.  The
sum of the bounded terms is a polynomial TP with f > TP on the interval.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Optional, Union

from .exact import IntervalSpec, Poly, is_positive_on
from .model import KhatPlan, MtpExpr, MtpTerm, alpha_sign, normalize, select_khat
from .taylor import DegreeBudgetError, TaylorBound, cos_lower, cos_upper, taylor_cos, taylor_sin

STEP_I = "I"
II_I = "II-i"
II_II = "II-ii"
II_III = "II-iii"
VARIANTS = (STEP_I, II_I, II_II, II_III)

DEFAULT_BUDGET = 12
DEFAULT_MAX_CANDIDATES = 4096


class EstimationError(ValueError):
    pass


class BudgetExhausted(Exception):
    def __init__(self, message: str, diagnostic=None, tried: int = 0):
        super().__init__(message)
        self.diagnostic = diagnostic
        self.tried = tried


@dataclass(frozen=True)
class TermPlan:
    s: int = 0
    k: int = 0
    variant: str = STEP_I


@dataclass(frozen=True)
class EstimationPlan:
    khat_plan: KhatPlan
    per_term: tuple[Optional[TermPlan], ...]


@dataclass(frozen=True)
class AffinePoly:
    """``p(x) * a + q(x)``."""

    p: Poly
    q: Poly

    def __add__(self, other: "AffinePoly") -> "AffinePoly":
        return AffinePoly(self.p + other.p, self.q + other.q)

    def at(self, a) -> Poly:
        return self.p * Fraction(a) + self.q


def term_bounds(term: MtpTerm, plan: TermPlan) -> tuple[Optional[TaylorBound], Optional[TaylorBound]]:
    """(sin bound, cos bound) used for ``term`` under ``plan``."""
    s, k, v = plan.s, plan.k, plan.variant
    if v == STEP_I:
        sb, cb = taylor_sin(4 * s + 3), cos_lower(k)
    elif v == II_III:
        sb, cb = taylor_sin(4 * s + 1), cos_upper(k)
    elif v == II_I:
        # next upward sine bound above degree 4s+3
        sb, cb = taylor_sin(4 * s + 5), cos_upper(k)
    elif v == II_II:
        # next upward cosine bound above degree 4k+2
        sb, cb = taylor_sin(4 * s + 1), taylor_cos(4 * k + 4)
    else:
        raise EstimationError(f"unknown variant {v!r}")
    return (sb if term.r else None), (cb if term.q else None)


def check_term_plan(term: MtpTerm, plan: TermPlan, sign: int, khat: int) -> None:
    if plan.s < 0 or plan.k < 0:
        raise EstimationError("degree indices must be natural numbers")
    if sign > 0:
        if plan.variant != STEP_I:
            raise EstimationError("positive coefficient requires step I")
        if term.q and plan.k < khat:
            raise EstimationError(f"step I needs k >= k-hat = {khat}, got k = {plan.k}")
    elif plan.variant == STEP_I:
        raise EstimationError("negative coefficient cannot use step I")


def _bounded_monomial(term: MtpTerm, plan: TermPlan) -> Poly:
    sb, cb = term_bounds(term, plan)
    out = Poly.monomial(term.p)
    if sb is not None:
        out = out * sb.poly ** term.r
    if cb is not None:
        out = out * cb.poly ** term.q
    return out


def estimate_term(term: MtpTerm, plan: Optional[TermPlan], sign: int, khat: int = 0) -> AffinePoly:
    """Polynomial lower bound (affine in the parameter) of one term."""
    if term.is_polynomial:
        base = Poly.monomial(term.p)
    else:
        if plan is None:
            raise EstimationError("trigonometric term needs a plan")
        check_term_plan(term, plan, sign, khat)
        base = _bounded_monomial(term, plan)
    return AffinePoly(base * term.alpha.c1, base * term.alpha.c0)


def term_signs(e: MtpExpr) -> list[int]:
    return [0 if t.is_polynomial else alpha_sign(t.alpha, e.param) for t in e.terms]


def estimate_expr(e: MtpExpr, plan: EstimationPlan) -> Union[Poly, AffinePoly]:
    """TP for the transformed expression ``e``: Poly, or AffinePoly if parametric."""
    if len(plan.per_term) != len(e.terms):
        raise EstimationError("plan length does not match the expression")
    signs = term_signs(e)
    total = AffinePoly(Poly(), Poly())
    for term, tp, sign in zip(e.terms, plan.per_term, signs):
        if term.is_polynomial and tp is not None:
            raise EstimationError("polynomial term must carry a null plan")
        total = total + estimate_term(term, tp, sign, plan.khat_plan.khat)
    if e.param is None:
        return total.q
    return total


def default_plan(e: MtpExpr, khat_plan: KhatPlan, s: int = 0, k: Optional[int] = None) -> EstimationPlan:
    """Same (s, k) for every trig term, variant by sign (II-iii for negatives)."""
    per = []
    for term, sign in zip(e.terms, term_signs(e)):
        if term.is_polynomial:
            per.append(None)
            continue
        kk = k if k is not None else (khat_plan.khat if sign > 0 else 0)
        per.append(
            TermPlan(s if term.r else 0, kk if term.q else 0, STEP_I if sign > 0 else II_III)
        )
    return EstimationPlan(khat_plan, tuple(per))


# ---------------------------------------------------------------------------
# search


def _slots(e: MtpExpr, signs: list[int], khat: int):
    """Search slots, shared by terms with the same (q, r, sign)."""
    groups: dict[tuple[int, int, int], list[int]] = {}
    for i, (t, sg) in enumerate(zip(e.terms, signs)):
        if not t.is_polynomial:
            groups.setdefault((t.q, t.r, sg), []).append(i)
    slots = []  # (group key, "s"|"k", start)
    for key in groups:
        q, r, sg = key
        if r:
            slots.append((key, "s", 0))
        if q:
            slots.append((key, "k", khat if sg > 0 else 0))
    return groups, slots


def _candidates(starts: list[int], budget: int) -> Iterator[tuple[int, ...]]:
    """Index tuples ordered by (max, sum, lexicographic)."""
    if not starts:
        yield ()
        return
    n = len(starts)
    floor = [sum(starts[i:]) for i in range(n + 1)]

    def rec(i: int, rem: int, level: int, hit: bool):
        if i == n:
            if rem == 0 and hit:
                yield ()
            return
        top = min(level, rem - floor[i + 1])
        for v in range(starts[i], top + 1):
            if rem - v > (n - i - 1) * level:
                continue
            for tail in rec(i + 1, rem - v, level, hit or v == level):
                yield (v,) + tail

    # generated lazily: the full grid is (budget+1)**slots
    for level in range(max(starts), budget + 1):
        for total in range(floor[0], n * level + 1):
            yield from rec(0, total, level, False)


def plan_from_indices(e, khat_plan, signs, groups, slots, values) -> EstimationPlan:
    idx: dict[tuple, dict[str, int]] = {key: {} for key in groups}
    for (key, name, _), v in zip(slots, values):
        idx[key][name] = v
    per: list[Optional[TermPlan]] = [None] * len(e.terms)
    for key, members in groups.items():
        sg = key[2]
        tp = TermPlan(idx[key].get("s", 0), idx[key].get("k", 0), STEP_I if sg > 0 else II_III)
        for i in members:
            per[i] = tp
    return EstimationPlan(khat_plan, tuple(per))


@dataclass(frozen=True)
class SearchResult:
    plan: EstimationPlan
    tp: Union[Poly, AffinePoly]
    check: object  # evidence returned by the acceptance check
    tried: int


def _default_check(e: MtpExpr, interval: IntervalSpec):
    if e.param is None:
        def check(tp):
            ev = is_positive_on(tp, interval)
            return ev.positive, ev
        return check
    from .params import LinearParamForm, prove_linear_param

    def check_param(tp):
        form = LinearParamForm(tp.p, tp.q, e.param.lo, e.param.hi)
        res = prove_linear_param(form, interval)
        return res.proven, res
    return check_param


def auto_search(
    e: MtpExpr,
    interval: IntervalSpec,
    budget: int = DEFAULT_BUDGET,
    method: str = "auto",
    *,
    khat_plan: Optional[KhatPlan] = None,
    check: Optional[Callable] = None,
    max_candidates: int = DEFAULT_MAX_CANDIDATES,
) -> SearchResult:
    """First plan, in deterministic order, whose TP passes the positivity check.

    Terms sharing a trig monomial and coefficient sign share their degree
    indices.  Raises BudgetExhausted with the last failing check as diagnostic.
    """
    e = normalize(e)
    if khat_plan is None:
        khat_plan = select_khat(e, interval, method)
    te = normalize(khat_plan.transformed)
    signs = term_signs(te)
    groups, slots = _slots(te, signs, khat_plan.khat)
    check = check or _default_check(te, interval)
    last = None
    tried = 0
    for values in _candidates([s[2] for s in slots], budget):
        if tried >= max_candidates:
            break
        tried += 1
        plan = plan_from_indices(te, khat_plan, signs, groups, slots, values)
        try:
            tp = estimate_expr(te, plan)
        except DegreeBudgetError:
            # levels only grow from here, so every later candidate is over the cap too
            break
        if isinstance(tp, Poly) and tp.is_zero():
            continue
        ok, evidence = check(tp)
        if ok:
            return SearchResult(plan, tp, evidence, tried)
        last = (plan, tp, evidence)
    raise BudgetExhausted(f"no plan found within budget {budget} ({tried} candidates)", last, tried)
