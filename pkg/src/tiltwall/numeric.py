"""Exact arithmetic kernel: arbitrary-precision rationals and quadratic surds.

Rationals are stdlib ``fractions.Fraction`` values (always in lowest terms
with positive denominator); nothing here or in the modules built on top of
this one ever rounds.  Square roots enter only through :class:`Surd`, which
represents a + b*sqrt(D) with rational a, b, D >= 0 and supports exact,
decidable comparison.  Decimal rendering is offered for display only and is
computed by integer long division.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Optional, Union

from .errors import PreconditionError

# Package-wide exact scalar type.
Rational = Fraction

RationalLike = Union[Fraction, int]


class IncomparableRadicandsError(PreconditionError):
    """Comparison or arithmetic mixed two irrational surds over distinct radicands."""


class DegenerateQuadraticError(PreconditionError):
    """The quadratic's leading coefficient is zero."""


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def rational_sqrt(x: Fraction) -> Optional[Fraction]:
    """Exact square root of ``x`` when it is a perfect rational square, else None.

    For x = p/q in lowest terms, x is a square iff p and q are both perfect
    integer squares.
    """
    if x < 0:
        return None
    num, den = x.numerator, x.denominator
    rn, rd = isqrt(num), isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


def _radical_sign(s: Fraction, t: Fraction, D: Fraction) -> int:
    """Sign of s + t*sqrt(D) for D > 0, computed by rational sign tests only."""
    if t == 0:
        return _sign(s)
    if s == 0:
        return _sign(t)
    if (s > 0) == (t > 0):
        return _sign(s)
    # opposite signs: the larger of s^2 and t^2*D decides
    lhs, rhs = s * s, t * t * D
    if lhs == rhs:
        return 0
    return _sign(s) if lhs > rhs else _sign(t)


@dataclass(frozen=True, eq=False)
class Surd:
    """Exact real number a + b*sqrt(D) with rational a, b and radicand D >= 0.

    Normal form: whenever the value is rational (b = 0, or D a perfect
    rational square) the radical part is folded into ``a`` and D is set to 0.
    Instances are immutable; the normal form makes field equality coincide
    with numerical equality.
    """

    a: Fraction
    b: Fraction
    D: Fraction

    def __post_init__(self) -> None:
        a, b, D = Fraction(self.a), Fraction(self.b), Fraction(self.D)
        if D < 0:
            raise ValueError("radicand must be non-negative")
        root = rational_sqrt(D)
        if root is not None:
            a, b, D = a + b * root, Fraction(0), Fraction(0)
        elif b == 0:
            D = Fraction(0)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "D", D)

    # -- construction -----------------------------------------------------

    @staticmethod
    def from_rational(x: RationalLike) -> "Surd":
        return Surd(Fraction(x), Fraction(0), Fraction(0))

    # -- predicates -------------------------------------------------------

    @property
    def is_rational(self) -> bool:
        return self.D == 0

    # -- conversions ------------------------------------------------------

    def __float__(self) -> float:
        if self.D == 0:
            return float(self.a)
        return float(self.a) + float(self.b) * math.sqrt(float(self.D))

    def __repr__(self) -> str:
        if self.D == 0:
            return f"Surd({self.a})"
        return f"Surd({self.a} + {self.b}*sqrt({self.D}))"

    # -- equality / hashing ------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.D == 0 and self.a == other
        if isinstance(other, Surd):
            return (self.a, self.b, self.D) == (other.a, other.b, other.D)
        return NotImplemented

    def __hash__(self) -> int:
        if self.D == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.D))

    # -- arithmetic (closed for operands over one radicand) ----------------

    def __neg__(self) -> "Surd":
        return Surd(-self.a, -self.b, self.D)

    def __add__(self, other: "SurdLike") -> "Surd":
        other = as_surd(other)
        if self.D == 0:
            return Surd(self.a + other.a, other.b, other.D)
        if other.D == 0 or other.D == self.D:
            return Surd(self.a + other.a, self.b + other.b, self.D)
        raise IncomparableRadicandsError(
            f"cannot add surds over distinct radicands {self.D} and {other.D}"
        )

    __radd__ = __add__

    def __sub__(self, other: "SurdLike") -> "Surd":
        return self + (-as_surd(other))

    def __rsub__(self, other: "SurdLike") -> "Surd":
        return as_surd(other) + (-self)

    def __mul__(self, other: "SurdLike") -> "Surd":
        other = as_surd(other)
        if self.D == 0:
            return Surd(self.a * other.a, self.a * other.b, other.D)
        if other.D == 0:
            return Surd(self.a * other.a, other.a * self.b, self.D)
        if self.D == other.D:
            return Surd(
                self.a * other.a + self.b * other.b * self.D,
                self.a * other.b + self.b * other.a,
                self.D,
            )
        raise IncomparableRadicandsError(
            f"cannot multiply surds over distinct radicands {self.D} and {other.D}"
        )

    __rmul__ = __mul__

    # -- total order (within one radical extension) -------------------------

    def __lt__(self, other: "SurdLike") -> bool:
        return surd_cmp(self, other) < 0

    def __le__(self, other: "SurdLike") -> bool:
        return surd_cmp(self, other) <= 0

    def __gt__(self, other: "SurdLike") -> bool:
        return surd_cmp(self, other) > 0

    def __ge__(self, other: "SurdLike") -> bool:
        return surd_cmp(self, other) >= 0


SurdLike = Union[Surd, Fraction, int]


def as_surd(x: SurdLike) -> Surd:
    if isinstance(x, Surd):
        return x
    return Surd.from_rational(x)


def surd_cmp(x: SurdLike, y: SurdLike) -> int:
    """Exact three-way comparison: -1, 0 or +1 as x <, =, > y.

    Defined whenever x and y live over the same radicand, or at least one of
    them is rational.  Everything reduces to sign tests of rationals: isolate
    the radical, square, and track signs.
    """
    x, y = as_surd(x), as_surd(y)
    if x.D == y.D:
        return _radical_sign(x.a - y.a, x.b - y.b, x.D) if x.D != 0 else _sign(x.a - y.a)
    if x.D == 0:
        return _radical_sign(x.a - y.a, -y.b, y.D)
    if y.D == 0:
        return _radical_sign(x.a - y.a, x.b, x.D)
    raise IncomparableRadicandsError(
        f"both operands are irrational over distinct radicands {x.D} and {y.D}"
    )


def surd_is_rational(x: Surd) -> Optional[Fraction]:
    """The exact rational value of ``x`` if it has one, else None."""
    return x.a if x.D == 0 else None


def solve_quadratic(
    p: RationalLike, q: RationalLike, r: RationalLike
) -> list[Surd]:
    """Real roots of p*x^2 + q*x + r = 0 in increasing order, as Surds.

    Returns two roots (one, repeated once, for a vanishing discriminant) or
    an empty list when there are no real roots.  The roots carry radicand
    D = discriminant / (4 p^2), normalized.
    """
    p, q, r = Fraction(p), Fraction(q), Fraction(r)
    if p == 0:
        raise DegenerateQuadraticError("leading coefficient is zero")
    disc = q * q - 4 * p * r
    if disc < 0:
        return []
    center = -q / (2 * p)
    if disc == 0:
        return [Surd(center, Fraction(0), Fraction(0))]
    D = disc / (4 * p * p)
    return [Surd(center, Fraction(-1), D), Surd(center, Fraction(1), D)]


def decimal_str(x: RationalLike, digits: int) -> str:
    """Fixed-point decimal rendering of a rational, round-half-even.

    Display only; all computation elsewhere stays exact.
    """
    if digits < 0:
        raise ValueError("digits must be >= 0")
    x = Fraction(x)
    scaled = round(x * 10**digits)  # Fraction.__round__ is exact, ties-to-even
    sign = "-" if scaled < 0 else ""
    scaled = abs(scaled)
    if digits == 0:
        return f"{sign}{scaled}"
    whole, frac = divmod(scaled, 10**digits)
    return f"{sign}{whole}.{frac:0{digits}d}"


def surd_decimal_str(x: Surd, digits: int) -> str:
    """Decimal rendering of a surd, accurate to roughly ``digits`` places.

    The radical is approximated by an integer square root carrying two guard
    digits; exact geometry must never be checked against this output.
    """
    if x.D == 0:
        return decimal_str(x.a, digits)
    guard = digits + 2
    num, den = x.D.numerator, x.D.denominator
    # sqrt(num/den) = sqrt(num*den)/den
    approx_root = Fraction(isqrt(num * den * 10 ** (2 * guard)), den * 10**guard)
    return decimal_str(x.a + x.b * approx_root, digits)
