"""Exact rational polynomials and Sturm-chain root machinery.

Rationals are plain :class:`fractions.Fraction` values.  Polynomials are
dense, immutable, low-to-high coefficient tuples.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

Number = Union[int, Fraction]

# Fixed rational enclosure of pi/2.
PI_HALF_LO = Fraction(157079632679, 10**11)
PI_HALF_HI = Fraction(157079632680, 10**11)


class ZeroPolynomialError(ValueError):
    pass


class RootIsolationError(ValueError):
    pass


def to_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"not an exact rational: {value!r}")


def rat_to_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


_RAT_STR = re.compile(r"(-?[0-9]+)/([0-9]+)")


def rat_from_str(text: str) -> Fraction:
    """Parse the strict ``num/den`` form written by :func:`rat_to_str`."""
    m = _RAT_STR.fullmatch(text) if isinstance(text, str) else None
    if m is None:
        raise ValueError(f"rational must be 'num/den': {text!r}")
    n, d = int(m.group(1)), int(m.group(2))
    if d <= 0:
        raise ValueError(f"denominator must be positive: {text!r}")
    q = Fraction(n, d)
    if q.numerator != n or q.denominator != d:
        raise ValueError(f"rational not in lowest terms: {text!r}")
    return q


class Poly:
    """Dense univariate polynomial over Q, ``coeffs[i]`` multiplies ``x**i``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Number] = ()):
        cs = [to_rational(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def const(cls, c: Number) -> "Poly":
        return cls([c])

    @classmethod
    def monomial(cls, n: int, c: Number = 1) -> "Poly":
        return cls([0] * n + [c])

    @classmethod
    def x(cls) -> "Poly":
        return cls([0, 1])

    @property
    def degree(self) -> Optional[int]:
        """Degree, or ``None`` for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else None

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __call__(self, x: Number) -> Fraction:
        return poly_eval(self, x)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Poly({[str(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        return self.format()

    def format(self, var: str = "x") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            mag = abs(c)
            if mono and mag == 1:
                body = mono
            elif mono:
                body = f"{mag}*{mono}"
            else:
                body = str(mag)
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __neg__(self) -> "Poly":
        return Poly(-c for c in self.coeffs)

    def __add__(self, other) -> "Poly":
        other = _coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return Poly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __sub__(self, other) -> "Poly":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "Poly":
        return _coerce(other) - self

    def __mul__(self, other) -> "Poly":
        return poly_mul(self, _coerce(other))

    __rmul__ = __mul__

    def __truediv__(self, c: Number) -> "Poly":
        c = to_rational(c)
        return Poly(a / c for a in self.coeffs)

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power")
        result, base = Poly.const(1), self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def derivative(self) -> "Poly":
        return Poly(i * c for i, c in enumerate(self.coeffs) if i > 0)

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dv = other.coeffs
        dd = len(dv) - 1
        if len(rem) - 1 < dd:
            return Poly(), self
        quot = [Fraction(0)] * (len(rem) - dd)
        lead = dv[-1]
        for i in range(len(rem) - 1, dd - 1, -1):
            c = rem[i] / lead
            quot[i - dd] = c
            if c:
                for j in range(dd + 1):
                    rem[i - dd + j] -= c * dv[j]
        return Poly(quot), Poly(rem[:dd])

    def __floordiv__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[1]

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self / self.leading

    def x_valuation(self) -> int:
        """Multiplicity of the root at 0 (0 for the zero polynomial)."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return 0

    def shift_down(self, m: int) -> "Poly":
        """Divide by ``x**m``; the low ``m`` coefficients must vanish."""
        if any(self.coeffs[:m]):
            raise ValueError(f"not divisible by x^{m}")
        return Poly(self.coeffs[m:])

    def compose_square(self) -> "Poly":
        """Return ``p(x**2)``."""
        out = [Fraction(0)] * (2 * len(self.coeffs))
        for i, c in enumerate(self.coeffs):
            out[2 * i] = c
        return Poly(out)


def _coerce(value) -> Poly:
    if isinstance(value, Poly):
        return value
    return Poly.const(to_rational(value))


def poly_eval(p: Poly, x: Number) -> Fraction:
    """Horner evaluation."""
    x = to_rational(x)
    acc = Fraction(0)
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc


def poly_mul(p: Poly, q: Poly) -> Poly:
    if p.is_zero() or q.is_zero():
        return Poly()
    out = [Fraction(0)] * (len(p.coeffs) + len(q.coeffs) - 1)
    for i, a in enumerate(p.coeffs):
        if a:
            for j, b in enumerate(q.coeffs):
                out[i + j] += a * b
    return Poly(out)


def poly_gcd(p: Poly, q: Poly) -> Poly:
    """Monic gcd (zero if both are zero)."""
    while not q.is_zero():
        p, q = q, p % q
    return p.monic()


def square_free_part(p: Poly) -> Poly:
    """``p / gcd(p, p')``: same distinct roots, all simple."""
    if p.is_zero():
        raise ZeroPolynomialError("sign undecidable for zero polynomial")
    g = poly_gcd(p, p.derivative())
    if g.degree == 0:
        return p
    return p // g


def sturm_chain(p: Poly) -> list[Poly]:
    """Sturm sequence of the square-free part of ``p``.

    p0 = p, p1 = p', p_{i+1} = -rem(p_{i-1}, p_i); ends at a nonzero constant.
    """
    p = square_free_part(p)
    chain = [p]
    if p.degree == 0:
        return chain
    chain.append(p.derivative())
    while True:
        r = -(chain[-2] % chain[-1])
        if r.is_zero():
            break
        chain.append(r)
    return chain


def _sign(c: Fraction) -> int:
    return (c > 0) - (c < 0)


def sign_changes(chain: Sequence[Poly], x: Number) -> int:
    signs = [s for s in (_sign(poly_eval(f, x)) for f in chain) if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


# ---------------------------------------------------------------------------
# intervals


@dataclass(frozen=True)
class BoundaryValue:
    """A rational endpoint, or the symbolic pi/2 (``value is None``)."""

    value: Optional[Fraction] = None

    @classmethod
    def rational(cls, q: Number) -> "BoundaryValue":
        return cls(to_rational(q))

    @classmethod
    def pi_half(cls) -> "BoundaryValue":
        return cls(None)

    @property
    def is_pi_half(self) -> bool:
        return self.value is None

    @property
    def proxy(self) -> Fraction:
        """Rational stand-in used for all decisions (PI_HALF_HI for pi/2)."""
        return PI_HALF_HI if self.value is None else self.value

    def __str__(self) -> str:
        return "pi/2" if self.value is None else str(self.value)

    @classmethod
    def parse(cls, text: str) -> "BoundaryValue":
        t = text.strip().replace(" ", "").lower()
        if t in ("pi/2", "π/2"):
            return cls.pi_half()
        if "." in t:
            return cls.rational(Fraction(t))
        return cls.rational(Fraction(t))

    def __lt__(self, other: "BoundaryValue") -> bool:
        return compare_boundaries(self, other) < 0


def compare_boundaries(a: BoundaryValue, b: BoundaryValue) -> int:
    """Three-way comparison; pi/2 against a rational uses the enclosure."""
    if a.is_pi_half and b.is_pi_half:
        return 0
    if a.is_pi_half:
        return -compare_boundaries(b, a)
    if b.is_pi_half:
        if a.value <= PI_HALF_LO:
            return -1
        if a.value >= PI_HALF_HI:
            return 1
        raise ValueError(f"{a.value} is too close to pi/2 to compare")
    return _sign(a.value - b.value)


@dataclass(frozen=True)
class IntervalSpec:
    """Interval (lower, upper] or (lower, upper); lower is always open.

    A symbolic pi/2 upper end is decided on (lower, PI_HALF_HI].
    """

    upper: BoundaryValue
    upper_closed: bool = True
    lower: Fraction = field(default=Fraction(0))

    def __post_init__(self):
        object.__setattr__(self, "lower", to_rational(self.lower))
        if self.lower >= self.upper.proxy:
            raise ValueError("empty interval")

    @classmethod
    def half_open(cls, lo: Number, hi: Number) -> "IntervalSpec":
        return cls(BoundaryValue.rational(hi), True, to_rational(lo))

    @classmethod
    def open(cls, lo: Number, hi: Number) -> "IntervalSpec":
        return cls(BoundaryValue.rational(hi), False, to_rational(lo))

    @classmethod
    def to_pi_half(cls) -> "IntervalSpec":
        return cls(BoundaryValue.pi_half(), False)

    @property
    def hi(self) -> Fraction:
        return self.upper.proxy

    @property
    def closed_at_hi(self) -> bool:
        """Whether decisions include the rational upper proxy."""
        return self.upper_closed or self.upper.is_pi_half

    @property
    def uses_proxy(self) -> bool:
        return self.upper.is_pi_half

    def contains(self, x: Number) -> bool:
        x = to_rational(x)
        if x <= self.lower:
            return False
        return x <= self.hi if self.closed_at_hi else x < self.hi

    def midpoint(self) -> Fraction:
        return (self.lower + self.hi) / 2

    def __str__(self) -> str:
        close = "]" if self.upper_closed else ")"
        return f"({self.lower}, {self.upper}{close}"


def _count_half_open(chain: Sequence[Poly], a: Fraction, b: Fraction) -> int:
    """Distinct roots in (a, b] from a Sturm chain."""
    return sign_changes(chain, a) - sign_changes(chain, b)


def count_roots(p: Poly, interval: IntervalSpec) -> int:
    """Number of distinct real roots of ``p`` in ``interval``."""
    if p.is_zero():
        raise ZeroPolynomialError("sign undecidable for zero polynomial")
    chain = sturm_chain(p)
    n = _count_half_open(chain, interval.lower, interval.hi)
    if not interval.closed_at_hi and poly_eval(p, interval.hi) == 0:
        n -= 1
    return n


@dataclass(frozen=True)
class PositivityEvidence:
    """Exact evidence that ``poly > 0`` on an interval (or that it is not)."""

    positive: bool
    x_power: int
    square_free: Poly
    chain_length: int
    changes_lo: int
    changes_hi: int
    root_count: int
    sample: Fraction
    sample_value: Fraction
    lower_value: Fraction
    upper_value: Fraction


def is_positive_on(p: Poly, interval: IntervalSpec) -> PositivityEvidence:
    """Decide ``p(x) > 0`` for every x in the interval.

    For a lower end at 0 the factor ``x**m`` is split off first; it is
    positive on the interval and does not change the answer.
    """
    if p.is_zero():
        raise ZeroPolynomialError("sign undecidable for zero polynomial")
    m = p.x_valuation() if interval.lower == 0 else 0
    g = p.shift_down(m)
    sqf = square_free_part(g)
    chain = sturm_chain(sqf)
    lo, hi = interval.lower, interval.hi
    v_lo, v_hi = sign_changes(chain, lo), sign_changes(chain, hi)
    roots = v_lo - v_hi
    upper_value = poly_eval(p, hi)
    if not interval.closed_at_hi and upper_value == 0:
        roots -= 1
    sample = interval.midpoint()
    sample_value = poly_eval(g, sample)
    positive = roots == 0 and sample_value > 0
    return PositivityEvidence(
        positive=positive,
        x_power=m,
        square_free=sqf,
        chain_length=len(chain),
        changes_lo=v_lo,
        changes_hi=v_hi,
        root_count=roots,
        sample=sample,
        sample_value=sample_value,
        lower_value=poly_eval(g, lo),
        upper_value=upper_value,
    )


def _grid_search(p: Poly, interval: IntervalSpec, eps: Fraction, target: int):
    """Smallest grid cell (lo + (i-1) eps, lo + i eps] holding ``target`` roots."""
    chain = sturm_chain(p)
    lo, hi = interval.lower, interval.hi
    v_lo = sign_changes(chain, lo)
    cells = -((lo - hi) // eps)  # ceil((hi - lo) / eps)

    def roots_upto(i: int) -> int:
        x = min(lo + i * eps, hi)
        n = v_lo - sign_changes(chain, x)
        if x == hi and not interval.closed_at_hi and poly_eval(p, hi) == 0:
            n -= 1
        return n

    a, b = 0, int(cells)
    while b - a > 1:
        mid = (a + b) // 2
        if roots_upto(mid) >= target:
            b = mid
        else:
            a = mid
    return lo + a * eps, min(lo + b * eps, hi)


def isolate_root(p: Poly, interval: IntervalSpec, eps: Number) -> tuple[Fraction, Fraction]:
    """Grid-aligned ``[lo, hi]`` of width <= eps around the unique root."""
    eps = to_rational(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if count_roots(p, interval) != 1:
        raise RootIsolationError("not uniquely rooted")
    return _grid_search(p, interval, eps, 1)


def isolate_leftmost_root(p: Poly, interval: IntervalSpec, eps: Number) -> tuple[Fraction, Fraction]:
    eps = to_rational(eps)
    if count_roots(p, interval) < 1:
        raise RootIsolationError("no root in interval")
    return _grid_search(p, interval, eps, 1)


def isolate_all_roots(p: Poly, interval: IntervalSpec, eps: Number) -> list[tuple[Fraction, Fraction]]:
    eps = to_rational(eps)
    total = count_roots(p, interval)
    return [_grid_search(p, interval, eps, k) for k in range(1, total + 1)]


def square_free_decomposition(p: Poly) -> list[Poly]:
    """Yun's algorithm: monic ``[f1, f2, ...]`` with p = lc * prod f_i**i."""
    if p.is_zero():
        raise ZeroPolynomialError("sign undecidable for zero polynomial")
    out: list[Poly] = []
    if p.degree == 0:
        return out
    dp = p.derivative()
    a = poly_gcd(p, dp)
    b = p // a
    c = dp // a
    d = c - b.derivative()
    while b.degree and b.degree > 0:
        a = poly_gcd(b, d)
        out.append(a.monic())
        b = b // a
        c = d // a
        d = c - b.derivative()
    while out and out[-1].degree == 0:
        out.pop()
    return out


@dataclass(frozen=True)
class NonnegativityEvidence:
    nonnegative: bool
    odd_part: Poly
    interior_roots: int
    sample: Fraction
    sample_value: Fraction


def is_nonnegative_on(p: Poly, interval: IntervalSpec) -> NonnegativityEvidence:
    """Decide ``p(x) >= 0`` on the interval.

    p = lc * O * S**2 with O the product of odd-multiplicity factors; p >= 0
    iff O has no root strictly inside and lc * O is positive at a sample.
    """
    factors = square_free_decomposition(p)
    odd = Poly.const(p.leading)
    for i, f in enumerate(factors, start=1):
        if i % 2:
            odd = odd * f
    lo, hi = interval.lower, interval.hi
    n = count_roots(odd, IntervalSpec.open(lo, hi)) if odd.degree else 0
    sample = interval.midpoint()
    value = poly_eval(odd, sample)
    return NonnegativityEvidence(n == 0 and value > 0, odd, n, sample, value)
