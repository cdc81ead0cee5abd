"""Built-in worked examples and their golden polynomials.

Each case proves one inequality and then extracts named polynomials from
the certificate (clearing a known scale and power of x), which are compared
coefficient-by-coefficient with ``golden/<name>.json``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Callable, Optional

from .exact import IntervalSpec, Poly, rat_from_str, rat_to_str


@dataclass(frozen=True)
class Case:
    name: str
    text: str
    interval: IntervalSpec
    extract: Callable[[object], dict[str, Poly]]
    var: str = "x"
    param: Optional[tuple[Fraction, Fraction]] = None
    method: str = "auto"
    summary: str = ""


def _cleared(tp: Poly, scale: int, power: int) -> Poly:
    return (tp * scale).shift_down(power)


def _even_part_in_square(p: Poly) -> Poly:
    """``g`` with ``p(x) = g(x^2)``; raises if ``p`` has an odd coefficient."""
    if any(p.coeffs[1::2]):
        raise ValueError("polynomial is not even")
    return Poly(p.coeffs[::2])


def _mortici(cert) -> dict[str, Poly]:
    return {"R": _even_part_in_square(_cleared(cert.tp, 1728000, 9))}


def _pade_left(cert) -> dict[str, Poly]:
    return {"Q": _cleared(cert.tp, 13168189440000, 12)}


def _pade_right(cert) -> dict[str, Poly]:
    return {"R": _cleared(cert.tp, 1625702400, 10)}


def _yang(cert) -> dict[str, Poly]:
    form = cert.tp
    return {"p": form.p_poly, "q": form.q_poly, "endpoint_hi": form.at(form.a_hi)}


CASES: dict[str, Case] = {
    c.name: c
    for c in (
        Case(
            "mortici",
            "x^3*cos(x) - sin(x)^3 + (1/15)*x^7",
            IntervalSpec.to_pi_half(),
            _mortici,
            summary="TP = x^9 R(x^2) / 1728000",
        ),
        Case(
            "pade-left",
            "cos(x)^2*(17*x^4 + 420*x^2 + 4095) + 59*x^6 - 962*x^4 + 3675*x^2 - 4095",
            IntervalSpec.half_open(0, Fraction(1551414, 10**6)),
            _pade_left,
            method="method-c",
            summary="TP = x^12 Q(x) / 13168189440000",
        ),
        Case(
            "pade-right",
            "163*x^4 - 780*x^2 + 945 - cos(x)^2*(13*x^4 + 165*x^2 + 945)",
            IntervalSpec.to_pi_half(),
            _pade_right,
            summary="TP = x^10 R(x) / 1625702400",
        ),
        Case(
            "yang-param",
            "4*t*(a-1)*cos(t)^2 - 2*a*sin(t)*cos(t) - 2*t*(a-2)",
            IntervalSpec.to_pi_half(),
            _yang,
            var="t",
            param=(Fraction(1), Fraction(3, 2)),
            summary="TP = p(t) a + q(t); endpoint_hi = TP at a = 3/2",
        ),
    )
}


def load_golden(name: str) -> dict[str, Poly]:
    raw = resources.files(__package__).joinpath("golden").joinpath(f"{name}.json").read_text()
    return {k: Poly([rat_from_str(c) for c in v]) for k, v in json.loads(raw).items()}


def poly_to_golden(p: Poly) -> list[str]:
    return [rat_to_str(c) for c in p.coeffs]


@dataclass(frozen=True)
class Reproduction:
    case: Case
    result: object  # ProofCertificate or ProofFailure
    produced: dict[str, Poly]
    golden: dict[str, Poly]

    @property
    def matches(self) -> bool:
        return bool(self.produced) and self.produced == self.golden


def reproduce(name: str) -> Reproduction:
    from .prover import prove

    case = CASES[name]
    result = prove(case.text, case.interval, method=case.method, param=case.param)
    produced = case.extract(result) if result.proven else {}
    return Reproduction(case, result, produced, load_golden(name))
