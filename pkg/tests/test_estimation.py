import random
from fractions import Fraction as F

import pytest
import sympy as sp

from mtprover.estimation import (
    II_I,
    II_II,
    II_III,
    STEP_I,
    AffinePoly,
    BudgetExhausted,
    EstimationError,
    EstimationPlan,
    TermPlan,
    auto_search,
    default_plan,
    estimate_expr,
    estimate_term,
    term_bounds,
)
from mtprover.exact import IntervalSpec, Poly, count_roots, is_positive_on, poly_eval
from mtprover.model import Affine, KhatPlan, MtpExpr, MtpTerm, ParamSpec, normalize, select_khat
from mtprover.parser import parse_expr
from mtprover.taylor import taylor_cos, taylor_sin

from oracles import expr_bracket, random_rational, sympy_coeffs

x, t, a = sp.symbols("x t a")
PI2 = IntervalSpec.to_pi_half()
DELTA = F(1551414, 10**6)
T5 = taylor_sin(5).poly
T4 = taylor_cos(4).poly
T10 = taylor_cos(10).poly
X = Poly.x()

MORTICI = "x^3*cos(x) - sin(x)^3 + (1/15)*x^7"
PADE_LEFT = "cos(x)^2*(17*x^4 + 420*x^2 + 4095) + 59*x^6 - 962*x^4 + 3675*x^2 - 4095"
EQ_D = "4*t*(1-a)*sin(t)^2 - 2*a*sin(t)*cos(t) + 2*t*a"
YANG_BOX = ParamSpec("a", 1, F(3, 2))


def prepared(text, interval, param=None, method="auto"):
    e = parse_expr(text)
    if param is not None:
        e = e.with_param_interval(param.lo, param.hi)
    e = normalize(e)
    kp = select_khat(e, interval, method)
    return normalize(kp.transformed), kp


def terms_of(e):
    return [(tm.alpha.c0, tm.alpha.c1, tm.p, tm.q, tm.r) for tm in e.terms]


# ---------------------------------------------------------------------------
# single terms


def test_positive_cos_square_with_k2():
    out = estimate_term(MtpTerm(Affine(1), 0, 2, 0), TermPlan(0, 2, STEP_I), +1, khat=1)
    assert out.q == T10**2 and out.p.is_zero()


def test_negative_parametric_sin_cos_term():
    out = estimate_term(MtpTerm(Affine(0, -2), 0, 1, 1), TermPlan(1, 1, II_III), -1)
    assert out.p == T5 * T4 * -2 and out.q.is_zero()


def test_negative_parametric_sin_square_term():
    out = estimate_term(MtpTerm(Affine(4, -4), 1, 0, 2), TermPlan(1, 0, II_III), -1)
    assert out.q == X * T5**2 * 4 and out.p == X * T5**2 * -4


def test_step_i_rejects_k_below_khat():
    with pytest.raises(EstimationError, match="k-hat"):
        estimate_term(MtpTerm(Affine(1), 0, 2, 0), TermPlan(0, 0, STEP_I), +1, khat=1)


@pytest.mark.parametrize(
    "sign, variant",
    [(+1, II_III), (+1, II_I), (-1, STEP_I)],
)
def test_variant_must_match_sign(sign, variant):
    with pytest.raises(EstimationError):
        estimate_term(MtpTerm(Affine(sign), 0, 1, 1), TermPlan(0, 0, variant), sign)


def test_trig_term_needs_plan_and_naturals():
    with pytest.raises(EstimationError):
        estimate_term(MtpTerm(Affine(1), 0, 1, 0), None, +1)
    with pytest.raises(EstimationError):
        estimate_term(MtpTerm(Affine(1), 0, 1, 0), TermPlan(-1, 0, STEP_I), +1)


def test_bound_kinds_per_variant():
    term = MtpTerm(Affine(-1), 0, 1, 1)
    for variant, (ns, nc) in {
        STEP_I: (3, 2),
        II_III: (1, 0),
        II_I: (5, 0),
        II_II: (1, 4),
    }.items():
        sb, cb = term_bounds(term, TermPlan(0, 0, variant))
        assert (sb.degree, cb.degree) == (ns, nc)
        want = "downward" if variant == STEP_I else "upward"
        assert sb.direction == cb.direction == want


@pytest.mark.parametrize("q, r", [(1, 0), (0, 1), (1, 1), (2, 1), (1, 3), (3, 2)])
@pytest.mark.parametrize("s, k", [(0, 0), (1, 0), (0, 1), (2, 1)])
def test_variant_iii_has_smallest_degree(q, r, s, k):
    term = MtpTerm(Affine(-1), 1, q, r)
    degs = {v: estimate_term(term, TermPlan(s, k, v), -1).q.degree for v in (II_I, II_II, II_III)}
    assert degs[II_III] <= degs[II_I] and degs[II_III] <= degs[II_II]


@pytest.mark.parametrize("s", range(6))
def test_sine_lower_bounds_increase_with_degree(s):
    diff = taylor_sin(4 * s + 7).poly - taylor_sin(4 * s + 3).poly
    assert is_positive_on(diff, PI2).positive


@pytest.mark.parametrize("variant", [II_I, II_II, II_III])
def test_negative_term_estimates_are_lower_bounds(variant):
    rng = random.Random(hash(variant) % 1000)
    for _ in range(10):
        q, r, p = rng.randint(0, 3), rng.randint(0, 3), rng.randint(0, 2)
        if q == r == 0:
            continue
        c = -F(rng.randint(1, 9), rng.randint(1, 4))
        tp = TermPlan(rng.randint(0, 2), rng.randint(0, 2), variant)
        est = estimate_term(MtpTerm(Affine(c), p, q, r), tp, -1).q
        for _ in range(10):
            xv = random_rational(rng, F(0), F(157, 100), den=10**4)
            lo, _ = expr_bracket([(c, 0, p, q, r)], xv)
            assert poly_eval(est, xv) <= lo


# ---------------------------------------------------------------------------
# whole expressions


def test_mortici_estimate():
    te, kp = prepared(MORTICI, PI2)
    plan = EstimationPlan(kp, (TermPlan(1, 0, II_III), TermPlan(0, 1, STEP_I), None))
    tp = estimate_expr(te, plan)
    want = sympy_coeffs(x**9 * (20000 - 1560 * x**2 + 60 * x**4 - x**6) / 1728000, x)
    assert tp == Poly(want)


def test_eq_d_estimate_matches_displayed_polynomial():
    te, kp = prepared(EQ_D, PI2, YANG_BOX)
    assert kp.khat == 0
    plan = default_plan(te, kp, s=1, k=1)
    tp = estimate_expr(te, plan)
    t5 = t - t**3 / 6 + t**5 / 120
    t4 = 1 - t**2 / 2 + t**4 / 24
    full = sp.expand(4 * t * (1 - a) * t5**2 - 2 * a * t5 * t4 + 2 * t * a)
    assert isinstance(tp, AffinePoly)
    assert tp.p == Poly(sympy_coeffs(full.coeff(a, 1), t))
    assert tp.q == Poly(sympy_coeffs(full.coeff(a, 0), t))


def test_pure_polynomial_passes_through():
    e = normalize(parse_expr("x^2 - x^3"))
    kp = select_khat(e, PI2)
    assert estimate_expr(e, EstimationPlan(kp, (None, None))) == X**2 - X**3
    with pytest.raises(EstimationError):
        estimate_expr(e, EstimationPlan(kp, (TermPlan(), None)))
    with pytest.raises(EstimationError):
        estimate_expr(e, EstimationPlan(kp, (None,)))


def test_estimate_is_linear_under_a_shared_plan():
    rng = random.Random(9)
    shape = [(1, 1, 0), (0, 0, 3), (2, 1, 2), (4, 0, 0)]
    for _ in range(20):
        signs = [rng.choice([-1, 1]) for _ in shape]
        def build():
            return MtpExpr(tuple(
                MtpTerm(Affine(sg * F(rng.randint(1, 9), rng.randint(1, 5))), *key) for sg, key in zip(signs, shape)
            ))
        e1, e2 = normalize(build()), normalize(build())
        both = normalize(MtpExpr(e1.terms + e2.terms))
        kp = KhatPlan(0, "none-odd-only", both)
        plan = default_plan(both, kp, s=1, k=1)
        assert estimate_expr(both, plan) == estimate_expr(e1, plan) + estimate_expr(e2, plan)


# ---------------------------------------------------------------------------
# search


def test_mortici_search_finds_s1_k1():
    te, kp = prepared(MORTICI, PI2)
    res = auto_search(te, PI2, khat_plan=kp)
    assert res.plan.per_term == (TermPlan(1, 0, II_III), TermPlan(0, 1, STEP_I), None)


def test_pade_left_search_rejects_k1_then_accepts_k2():
    iv = IntervalSpec.half_open(0, DELTA)
    te, kp = prepared(PADE_LEFT, iv)
    assert kp.khat == 1
    res = auto_search(te, iv, khat_plan=kp)
    ks = {tp.k for tp in res.plan.per_term if tp is not None}
    assert ks == {2} and res.tried == 2
    k1 = estimate_expr(te, default_plan(te, kp, k=1))
    assert count_roots(k1, IntervalSpec.open(0, DELTA)) >= 1


@pytest.mark.parametrize("budget", [0, 3, 12])
def test_false_inequality_exhausts_any_budget(budget):
    iv = IntervalSpec.half_open(0, 1)
    te, kp = prepared("sin(x) - x", iv)
    with pytest.raises(BudgetExhausted) as info:
        auto_search(te, iv, budget, khat_plan=kp)
    plan, tp, evidence = info.value.diagnostic
    assert not evidence.positive and info.value.tried == budget + 1


def test_search_stops_at_degree_cap():
    # starting at k = 50 already asks for a cosine bound of degree 202
    e = normalize(parse_expr("cos(x)^2 + 1"))
    kp = KhatPlan(50, "method-c", e)
    with pytest.raises(BudgetExhausted) as info:
        auto_search(e, IntervalSpec.half_open(0, 1), 80, khat_plan=kp)
    assert info.value.diagnostic is None


def test_search_respects_candidate_cap():
    iv = IntervalSpec.half_open(0, 1)
    te, kp = prepared("sin(x) - x", iv)
    with pytest.raises(BudgetExhausted) as info:
        auto_search(te, iv, 12, khat_plan=kp, max_candidates=4)
    assert info.value.tried == 4


@pytest.mark.parametrize(
    "text, interval, param",
    [
        (MORTICI, PI2, None),
        (PADE_LEFT, IntervalSpec.half_open(0, DELTA), None),
        ("163*x^4 - 780*x^2 + 945 - cos(x)^2*(13*x^4 + 165*x^2 + 945)", PI2, None),
        (EQ_D, PI2, YANG_BOX),
    ],
)
def test_accepted_plans_stay_below_f(text, interval, param):
    te, kp = prepared(text, interval, param)
    res = auto_search(te, interval, khat_plan=kp)
    for tp in res.plan.per_term:
        if tp is not None and tp.variant == STEP_I:
            assert tp.k >= kp.khat
    rng = random.Random(len(text))
    orig = normalize(parse_expr(text).with_param_interval(param.lo, param.hi) if param else parse_expr(text))
    for _ in range(50):
        xv = random_rational(rng, F(0), interval.hi, den=10**4)
        av = random_rational(rng, param.lo, param.hi, den=100) if param else None
        lo, _ = expr_bracket(terms_of(orig), xv, av)
        tpv = res.tp.at(av) if param else res.tp
        assert poly_eval(tpv, xv) < lo
