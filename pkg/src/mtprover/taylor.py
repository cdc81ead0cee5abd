"""Taylor polynomials of sin and cos at 0 with certified bound direction.

For x in (0, sqrt((n+3)(n+4))):

* sin: degree n = 4s+1 bounds from above, n = 4s+3 from below;
* cos: degree n = 4k bounds from above, n = 4k+2 from below.

The smallest validity radius squared is 12, well above (pi/2)^2, so every
bound here holds on the whole of (0, pi/2].
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Literal, Optional

from .exact import (
    PI_HALF_HI,
    IntervalSpec,
    Poly,
    count_roots,
    isolate_leftmost_root,
    isolate_root,
    to_rational,
)

MAX_DEGREE = 200
DEFAULT_EPS = Fraction(1, 10**6)

UPWARD = "upward"
DOWNWARD = "downward"


class DegreeBudgetError(ValueError):
    """A requested Taylor degree exceeds MAX_DEGREE."""


@dataclass(frozen=True)
class TaylorBound:
    func: Literal["sin", "cos"]
    degree: int
    direction: Literal["upward", "downward"]
    radius_squared: int
    poly: Poly

    @property
    def valid_on_pi_half(self) -> bool:
        # radius^2 > PI_HALF_HI^2, in integers
        return self.radius_squared * PI_HALF_HI.denominator**2 > PI_HALF_HI.numerator**2


def _check_degree(n: int) -> None:
    if n < 0:
        raise ValueError("degree must be a natural number")
    if n > MAX_DEGREE:
        raise DegreeBudgetError(f"Taylor degree {n} exceeds cap {MAX_DEGREE}")


def sin_direction(n: int) -> str:
    return UPWARD if n % 4 == 1 else DOWNWARD


def cos_direction(n: int) -> str:
    return UPWARD if n % 4 == 0 else DOWNWARD


@lru_cache(maxsize=None)
def taylor_sin(n: int) -> TaylorBound:
    if n % 2 != 1:
        raise ValueError(f"sine Taylor degree must be odd, got {n}")
    _check_degree(n)
    coeffs = [Fraction(0)] * (n + 1)
    for i in range((n - 1) // 2 + 1):
        coeffs[2 * i + 1] = Fraction((-1) ** i, factorial(2 * i + 1))
    return TaylorBound("sin", n, sin_direction(n), (n + 3) * (n + 4), Poly(coeffs))


@lru_cache(maxsize=None)
def taylor_cos(n: int) -> TaylorBound:
    if n % 2 != 0:
        raise ValueError(f"cosine Taylor degree must be even, got {n}")
    _check_degree(n)
    coeffs = [Fraction(0)] * (n + 1)
    for i in range(n // 2 + 1):
        coeffs[2 * i] = Fraction((-1) ** i, factorial(2 * i))
    return TaylorBound("cos", n, cos_direction(n), (n + 3) * (n + 4), Poly(coeffs))


def sin_lower(s: int) -> TaylorBound:
    return taylor_sin(4 * s + 3)


def sin_upper(s: int) -> TaylorBound:
    return taylor_sin(4 * s + 1)


def cos_lower(k: int) -> TaylorBound:
    return taylor_cos(4 * k + 2)


def cos_upper(k: int) -> TaylorBound:
    return taylor_cos(4 * k)


@dataclass(frozen=True)
class RootEnclosure:
    k: int
    lo: Fraction
    hi: Fraction
    kind: Literal["c_k", "d_k"]

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo


_PROXY = IntervalSpec.to_pi_half()


def cos_root_ck(k: int, eps=DEFAULT_EPS) -> RootEnclosure:
    """Enclose the unique zero in (0, pi/2) of the downward cosine bound of degree 4k+2."""
    eps = to_rational(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    t = cos_lower(k).poly
    lo, hi = isolate_root(t, _PROXY, eps)
    # c_k < pi/2 < PI_HALF_HI, so a grid cell clipped at the proxy can be shrunk
    while hi == PI_HALF_HI:
        mid = (lo + hi) / 2
        if count_roots(t, IntervalSpec.half_open(lo, mid)):
            hi = mid
        else:
            lo = mid
    return RootEnclosure(k, lo, hi, "c_k")


def cos_crossing_dk(k: int, m: Optional[int] = None, eps=DEFAULT_EPS) -> RootEnclosure:
    """Enclose the leftmost x > c_k with cos x = |T_{4k+2}(x)|.

    Right of c_k the downward bound T = T_{4k+2} is negative, so the crossing
    is a root of h = cos + T.  With m = 0 (mod 4),
    T_{m+2} + T <= h <= T_m + T; h stays positive up to the leftmost root of
    the lower bracket and is <= 0 at the leftmost root of the upper one, so
    the leftmost crossing lies between them.  m grows by 4 until the
    enclosure is narrow enough.
    """
    eps = to_rational(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if m is None:
        m = 4 * k + 8
    if m % 4:
        raise ValueError("m must be a multiple of 4")
    t = cos_lower(k).poly
    c = cos_root_ck(k, eps)
    inner = eps / 8
    while True:
        if m + 2 > MAX_DEGREE:
            raise DegreeBudgetError("cannot enclose d_k within the degree cap")
        search = IntervalSpec.half_open(c.lo, PI_HALF_HI)
        lower = taylor_cos(m + 2).poly + t
        upper = taylor_cos(m).poly + t
        try:
            lo, _ = isolate_leftmost_root(lower, search, inner)
            _, hi = isolate_leftmost_root(upper, search, inner)
        except ValueError:
            m += 4
            continue
        if hi - lo <= eps:
            if lo > c.hi:
                return RootEnclosure(k, lo, hi, "d_k")
            # d_k > c_k, but both sit in one grid cell: sharpen until disjoint
            c = cos_root_ck(k, c.width / 8)
            inner /= 8
        m += 4
