"""Mixed trigonometric-polynomial expressions and the k-hat selection step.

An expression is a sum of terms ``alpha * x^p * cos(x)^q * sin(x)^r`` where
``alpha`` may be affine in one parameter ``a``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from math import comb
from typing import Literal, Optional

from .exact import PI_HALF_LO, IntervalSpec, poly_eval, to_rational
from .taylor import cos_lower


class ZeroExpressionError(ValueError):
    """Every term cancelled; ``f > 0`` is then vacuously false."""


class SignError(ValueError):
    """An affine coefficient is not of one sign over the parameter interval."""


@dataclass(frozen=True, order=True)
class Affine:
    """``c0 + c1 * a``."""

    c0: Fraction = Fraction(0)
    c1: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "c0", to_rational(self.c0))
        object.__setattr__(self, "c1", to_rational(self.c1))

    def is_zero(self) -> bool:
        return self.c0 == 0 and self.c1 == 0

    def __add__(self, other: "Affine") -> "Affine":
        return Affine(self.c0 + other.c0, self.c1 + other.c1)

    def __neg__(self) -> "Affine":
        return Affine(-self.c0, -self.c1)

    def scale(self, c) -> "Affine":
        c = to_rational(c)
        return Affine(self.c0 * c, self.c1 * c)

    def at(self, a) -> Fraction:
        return self.c0 + self.c1 * to_rational(a)


@dataclass(frozen=True)
class ParamSpec:
    """The parameter name and its open interval (lo, hi)."""

    name: str
    lo: Optional[Fraction] = None
    hi: Optional[Fraction] = None

    def __post_init__(self):
        if (self.lo is None) != (self.hi is None):
            raise ValueError("parameter interval needs both ends")
        if self.lo is not None:
            object.__setattr__(self, "lo", to_rational(self.lo))
            object.__setattr__(self, "hi", to_rational(self.hi))
            if self.lo >= self.hi:
                raise ValueError("parameter interval must have lo < hi")

    @property
    def bounded(self) -> bool:
        return self.lo is not None


@dataclass(frozen=True)
class MtpTerm:
    alpha: Affine
    p: int = 0
    q: int = 0  # power of cos
    r: int = 0  # power of sin

    @property
    def key(self) -> tuple[int, int, int]:
        return (self.p, self.q, self.r)

    @property
    def is_polynomial(self) -> bool:
        return self.q == 0 and self.r == 0


@dataclass(frozen=True)
class MtpExpr:
    terms: tuple[MtpTerm, ...]
    var: str = "x"
    param: Optional[ParamSpec] = None

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))

    @property
    def parametric(self) -> bool:
        return self.param is not None and any(t.alpha.c1 for t in self.terms)

    def with_param_interval(self, lo, hi) -> "MtpExpr":
        name = self.param.name if self.param else "a"
        return replace(self, param=ParamSpec(name, lo, hi))

    def to_text(self) -> str:
        return expr_to_text(self)

    def __str__(self) -> str:
        return self.to_text()


def _affine_text(alpha: Affine, pname: str) -> str:
    if alpha.c1 == 0:
        return f"({alpha.c0})"
    if alpha.c0 == 0:
        return f"({alpha.c1})*{pname}"
    return f"({alpha.c0} + ({alpha.c1})*{pname})"


def term_to_text(t: MtpTerm, var: str = "x", pname: str = "a") -> str:
    parts = [_affine_text(t.alpha, pname)]
    if t.p:
        parts.append(var if t.p == 1 else f"{var}^{t.p}")
    if t.q:
        parts.append(f"cos({var})" if t.q == 1 else f"cos({var})^{t.q}")
    if t.r:
        parts.append(f"sin({var})" if t.r == 1 else f"sin({var})^{t.r}")
    return "*".join(parts)


def expr_to_text(e: MtpExpr) -> str:
    if not e.terms:
        return "0"
    pname = e.param.name if e.param else "a"
    return " + ".join(term_to_text(t, e.var, pname) for t in e.terms)


def normalize(e: MtpExpr) -> MtpExpr:
    """Merge like terms, drop zeros and sort by (p, q, r)."""
    merged = _merge(e.terms)
    if not merged:
        raise ZeroExpressionError("zero expression")
    return replace(e, terms=merged)


def _merge(terms) -> tuple[MtpTerm, ...]:
    acc: dict[tuple[int, int, int], Affine] = {}
    for t in terms:
        acc[t.key] = acc.get(t.key, Affine()) + t.alpha
    return tuple(
        MtpTerm(alpha, *key) for key, alpha in sorted(acc.items()) if not alpha.is_zero()
    )


def eliminate_even_cos(e: MtpExpr) -> MtpExpr:
    """Rewrite ``cos^(2j + e)`` as ``cos^e * (1 - sin^2)^j`` with e in {0, 1}."""
    out = []
    for t in e.terms:
        if t.q < 2:
            out.append(t)
            continue
        j, rest = divmod(t.q, 2)
        for i in range(j + 1):
            c = (-1) ** i * comb(j, i)
            out.append(MtpTerm(t.alpha.scale(c), t.p, rest, t.r + 2 * i))
    return replace(e, terms=_merge(out))


def alpha_sign(alpha: Affine, param: Optional[ParamSpec]) -> int:
    """Sign of ``alpha`` on the open parameter interval (+1 or -1)."""
    if alpha.c1 == 0:
        if alpha.c0 == 0:
            raise SignError("zero coefficient")
        return 1 if alpha.c0 > 0 else -1
    if param is None or not param.bounded:
        raise SignError("parametric coefficient needs a parameter interval")
    ends = (alpha.at(param.lo), alpha.at(param.hi))
    # an affine map vanishing at one open end keeps the other end's sign inside
    if all(v >= 0 for v in ends):
        return 1
    if all(v <= 0 for v in ends):
        return -1
    raise SignError(
        f"coefficient {alpha.c0} + {alpha.c1}*{param.name} changes sign on "
        f"({param.lo}, {param.hi})"
    )


# ---------------------------------------------------------------------------
# k-hat selection

Method = Literal["auto", "method-c", "method-d"]
NONE_ODD_ONLY = "none-odd-only"
SMALL_DELTA = "small-delta"
METHOD_C = "method-c"
METHOD_D = "method-d"


class KhatError(ValueError):
    pass


@dataclass(frozen=True)
class KhatPlan:
    khat: int
    method_used: str
    transformed: MtpExpr


def khat_method_c(delta) -> int:
    """Smallest k with T_{4k+2}^cos(delta) >= 0."""
    delta = to_rational(delta)
    if delta <= 0 or delta >= PI_HALF_LO:
        raise KhatError(f"delta {delta} outside (0, pi/2)")
    k = 0
    while poly_eval(cos_lower(k).poly, delta) < 0:
        k += 1
    return k


def needs_khat(e: MtpExpr) -> bool:
    """True when some term bounded from below carries an even cos power.

    Only those terms square a downward cosine bound; terms with negative
    coefficients use upward bounds, which hold on all of (0, pi/2).
    """
    return any(
        t.q and t.q % 2 == 0 and alpha_sign(t.alpha, e.param) > 0 for t in e.terms
    )


def select_khat(e: MtpExpr, interval: IntervalSpec, method: Method = "auto") -> KhatPlan:
    if method not in ("auto", METHOD_C, METHOD_D):
        raise KhatError(f"unknown method {method!r}")
    if not needs_khat(e):
        return KhatPlan(0, NONE_ODD_ONLY, e)
    upper = interval.upper
    if not upper.is_pi_half and upper.value * upper.value <= 2:
        return KhatPlan(0, SMALL_DELTA, e)
    if upper.is_pi_half:
        if method == METHOD_C:
            raise KhatError("Method C requires delta < pi/2")
        return KhatPlan(0, METHOD_D, eliminate_even_cos(e))
    if method == METHOD_D:
        return KhatPlan(0, METHOD_D, eliminate_even_cos(e))
    return KhatPlan(khat_method_c(upper.value), METHOD_C, e)
