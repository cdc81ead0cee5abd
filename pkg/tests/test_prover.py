import json
import random
from fractions import Fraction as F

import pytest
import sympy as sp

from mtprover.certificate import CertificateError, check_certificate, dumps, verify_certificate
from mtprover.estimation import STEP_I, TermPlan
from mtprover.exact import IntervalSpec, Poly, poly_eval, rat_to_str
from mtprover.model import SignError, ZeroExpressionError
from mtprover.prover import DISPROVEN, NOT_PROVEN, IntervalError, ProofCertificate, prove

from oracles import sympy_coeffs

x = sp.symbols("x")
PI2 = IntervalSpec.to_pi_half()
DELTA = F(1551414, 10**6)
MORTICI = "x^3*cos(x) - sin(x)^3 + (1/15)*x^7"
PADE_LEFT = "cos(x)^2*(17*x^4 + 420*x^2 + 4095) + 59*x^6 - 962*x^4 + 3675*x^2 - 4095"
EQ_D = "4*t*(1-a)*sin(t)^2 - 2*a*sin(t)*cos(t) + 2*t*a"
Q_SYM = (
    17 * x**12
    + 15 * x**8 * (15837 - 176 * x**2)
    + 8100 * x**4 * (64519 - 1687 * x**2)
    + 3200 * (50205015 - 4035906 * x**2)
)


def test_mortici_proof():
    cert = prove(MORTICI, PI2)
    assert isinstance(cert, ProofCertificate) and cert.proven
    want = sympy_coeffs(x**9 * (20000 - 1560 * x**2 + 60 * x**4 - x**6) / 1728000, x)
    assert cert.tp == Poly(want)
    assert cert.evidence.positive and cert.evidence.x_power == 9


def test_pade_left_proof():
    cert = prove(PADE_LEFT, IntervalSpec.half_open(0, DELTA))
    assert cert.proven and cert.khat_plan.khat == 1
    assert {tp.k for tp in cert.plan.per_term if tp} == {2}
    assert cert.tp * 13168189440000 == Poly(sympy_coeffs(x**12 * Q_SYM, x))


def test_false_inequality_reports_diagnostics():
    res = prove("sin(x) - x", IntervalSpec.half_open(0, 1))
    assert not res.proven and res.status == DISPROVEN
    assert res.counterexample is not None and res.counterexample["enclosure"][1] < 0
    wx, wv = res.witness
    assert 0 < wx <= 1 and wv <= 0 and poly_eval(res.last_tp, wx) == wv


def test_true_but_unproven_is_never_disproven():
    res = prove("x - sin(x)", IntervalSpec.half_open(0, 1), budget=0)
    assert res.status == NOT_PROVEN and res.counterexample is None
    assert prove("x - sin(x)", IntervalSpec.half_open(0, 1)).proven


def test_failure_witness_lies_next_to_a_root():
    res = prove("x^2 - 1/4 + 0*sin(x) + sin(x)^2 - x^2", IntervalSpec.half_open(0, 1))
    assert not res.proven
    wx, wv = res.witness
    assert wv <= 0 and poly_eval(res.last_tp, wx) == wv
    assert res.root_enclosures
    lo, hi = res.root_enclosures[0]
    assert lo <= F(1, 2) + F(1, 10) and wx <= hi


def test_input_errors():
    with pytest.raises(IntervalError):
        prove("x", IntervalSpec.half_open(F(1, 10), 1))
    with pytest.raises(IntervalError):
        prove("x", IntervalSpec.half_open(0, 2))
    with pytest.raises(ZeroExpressionError):
        prove("sin(x) - sin(x)", PI2)
    with pytest.raises(SignError):
        prove("a*sin(x) + x", PI2, param=(-1, 1))


def test_pinned_plan():
    cert = prove(MORTICI, PI2, plan=(TermPlan(1, 0, "II-iii"), TermPlan(0, 1, STEP_I), None))
    assert cert.proven
    res = prove(MORTICI, PI2, plan=(TermPlan(0, 0, "II-iii"), TermPlan(0, 0, STEP_I), None))
    assert not res.proven


def test_parametric_proof():
    cert = prove(EQ_D, PI2, param=(1, F(3, 2)))
    assert cert.proven and cert.evidence.case == "both-strict"


def test_pi_half_proxy_is_recorded():
    d = prove(MORTICI, PI2).to_dict()
    assert d["interval"]["upper"] == "pi/2"
    assert d["interval"]["pi_half_proxy"] == "3926990817/2500000000"
    d = prove(PADE_LEFT, IntervalSpec.half_open(0, DELTA)).to_dict()
    assert d["interval"]["pi_half_proxy"] is None


# ---------------------------------------------------------------------------
# certificates

CORPUS = [
    (MORTICI, PI2, None),
    (PADE_LEFT, IntervalSpec.half_open(0, DELTA), None),
    ("163*x^4 - 780*x^2 + 945 - cos(x)^2*(13*x^4 + 165*x^2 + 945)", PI2, None),
    ("4*t*(a-1)*cos(t)^2 - 2*a*sin(t)*cos(t) - 2*t*(a-2)", PI2, (1, F(3, 2))),
    (EQ_D, PI2, (1, F(3, 2))),
    ("x - sin(x)", IntervalSpec.half_open(0, 1), None),
    ("cos(x) - 1 + (1/2)*x^2", IntervalSpec.open(0, F(3, 2)), None),
]


@pytest.fixture(scope="module")
def certs():
    return [prove(text, iv, param=param) for text, iv, param in CORPUS]


def test_round_trip_verifies(certs):
    for c in certs:
        assert c.proven
        assert verify_certificate(c)
        assert verify_certificate(c.to_json())
        assert verify_certificate(json.loads(c.to_json()))


def test_certificates_are_deterministic(certs):
    for (text, iv, param), c in zip(CORPUS, certs):
        assert prove(text, iv, param=param).to_json() == c.to_json()
    assert certs[0].to_json().endswith("\n")


def test_perturbed_tp_coefficient_is_rejected(certs):
    d = certs[0].to_dict()
    coeffs = d["tp"]["poly"]
    i = next(i for i, c in enumerate(coeffs) if c != "0/1")
    coeffs[i] = rat_to_str(F(coeffs[i].split("/")[0]) / F(coeffs[i].split("/")[1]) + F(1, 10**6))
    with pytest.raises(CertificateError, match="tp"):
        check_certificate(d)


def test_lowering_k_below_khat_is_rejected(certs):
    d = certs[1].to_dict()
    assert d["khat_plan"]["khat"] == 1
    for entry in d["plan"]:
        if entry is not None:
            entry["k"] = 0
    with pytest.raises(CertificateError, match="admissibility"):
        check_certificate(d)


def test_bad_bound_metadata_is_rejected(certs):
    d = certs[0].to_dict()
    d["bounds"][0]["direction"] = "downward"
    assert not verify_certificate(d)
    d = certs[0].to_dict()
    d["bounds"][0]["radius_squared"] += 1
    assert not verify_certificate(d)


@pytest.mark.parametrize(
    "edit",
    [
        lambda d: d.pop("tp"),
        lambda d: d.__setitem__("cert_version", 2),
        lambda d: d.__setitem__("conclusion", "failed"),
        lambda d: d["interval"].__setitem__("pi_half_proxy", None),
        lambda d: d["interval"].__setitem__("upper", "3/2"),
        lambda d: d.__setitem__("original_text", "x^3*cos(x) - sin(x)^3 + (1/16)*x^7"),
        lambda d: d["positivity_evidence"].__setitem__("root_count", 1),
        lambda d: d["plan"].append(None),
        lambda d: d.__setitem__("plan", "nonsense"),
    ],
)
def test_malformed_or_edited_certificates_are_rejected(certs, edit):
    d = certs[0].to_dict()
    edit(d)
    assert verify_certificate(d) is False


def test_non_json_is_rejected():
    assert not verify_certificate("{not json")
    assert not verify_certificate("[]")


def _coefficient_slots(node, path=()):
    """Paths of every rational string in the certificate."""
    if isinstance(node, dict):
        for k, v in node.items():
            yield from _coefficient_slots(v, path + (k,))
    elif isinstance(node, list):
        for i, v in enumerate(node):
            yield from _coefficient_slots(v, path + (i,))
    elif isinstance(node, str) and "/" in node and node != "pi/2" and path[-1] != "original_text":
        yield path


def _mutate(s, rng):
    positions = [i for i, ch in enumerate(s) if ch.isdigit() or ch == "-"]
    i = rng.choice(positions)
    if s[i] == "-":
        return s[:i] + s[i + 1 :] if rng.random() < 0.5 else s[:i] + "1" + s[i + 1 :]
    return s[:i] + rng.choice([d for d in "0123456789" if d != s[i]]) + s[i + 1 :]


def test_single_character_coefficient_mutations_are_all_rejected(certs):
    rng = random.Random(2024)
    rejected = 0
    for trial in range(100):
        base = certs[trial % 4].to_dict()
        slots = list(_coefficient_slots(base))
        path = rng.choice(slots)
        node = base
        for p in path[:-1]:
            node = node[p]
        before = node[path[-1]]
        node[path[-1]] = _mutate(before, rng)
        assert node[path[-1]] != before
        rejected += not verify_certificate(dumps(base))
    assert rejected == 100
