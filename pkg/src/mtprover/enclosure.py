"""Rational enclosures of sin, cos and MTP expressions at rational points.

Used only to look for counterexamples after a failed proof; a proof never
depends on these.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Optional

from .exact import to_rational
from .model import MtpExpr

SERIES_TERMS = 40

Interval = tuple[Fraction, Fraction]


def _alternating(x: Fraction, start: int, terms: int) -> Interval:
    """Bracket sum_{i>=0} (-1)^i x^(2i+start)/(2i+start)! between consecutive partial sums."""
    s = Fraction(0)
    prev = Fraction(0)
    for i in range(terms + 1):
        prev = s
        s += Fraction((-1) ** i) * x ** (2 * i + start) / factorial(2 * i + start)
    return (min(prev, s), max(prev, s))


def sin_enclosure(x, terms: int = SERIES_TERMS) -> Interval:
    # valid once the series terms decrease, i.e. |x| well below 2*terms
    return _alternating(to_rational(x), 1, terms)


def cos_enclosure(x, terms: int = SERIES_TERMS) -> Interval:
    return _alternating(to_rational(x), 0, terms)


def _imul(a: Interval, b: Interval) -> Interval:
    ps = [a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]]
    return (min(ps), max(ps))


def _ipow(a: Interval, n: int) -> Interval:
    out = (Fraction(1), Fraction(1))
    for _ in range(n):
        out = _imul(out, a)
    if n % 2 == 0 and a[0] < 0 < a[1]:
        out = (Fraction(0), out[1])
    return out


def expr_enclosure(e: MtpExpr, x, a: Optional[Fraction] = None) -> Interval:
    """Enclosure of the expression's value at ``x`` (and parameter ``a``)."""
    x = to_rational(x)
    s, c = sin_enclosure(x), cos_enclosure(x)
    lo = hi = Fraction(0)
    for t in e.terms:
        if t.alpha.c1 and a is None:
            raise ValueError("parametric expression needs a parameter value")
        alpha = t.alpha.at(a) if t.alpha.c1 else t.alpha.c0
        v = _imul(_ipow(s, t.r), _ipow(c, t.q))
        v = _imul(v, (alpha * x**t.p, alpha * x**t.p))
        lo += v[0]
        hi += v[1]
    return (lo, hi)
