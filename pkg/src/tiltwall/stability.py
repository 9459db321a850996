"""Slope functions and positivity predicates on the (b, w) half-plane.

Weak stability parameters live in U = {w > b^2/2}.  Slopes take values in
the rationals extended by a single +infinity marker with total-order
semantics; the marker is never used in arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .charges import Charge, CurveCharge, MissingDataError, ThreefoldData
from .errors import PreconditionError
from .numeric import Rational, RationalLike


class NonzeroRankError(PreconditionError):
    """A rank-zero-only slope was evaluated on a charge of nonzero rank."""


class _Infinite:
    """Positive infinity for slope values: compares above every rational."""

    _instance: Optional["_Infinite"] = None

    def __new__(cls) -> "_Infinite":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other: object) -> bool:
        return isinstance(other, _Infinite)

    def __hash__(self) -> int:
        return hash("tiltwall-infinite-slope")

    def __lt__(self, other: object) -> bool:
        return False

    def __le__(self, other: object) -> bool:
        return isinstance(other, _Infinite)

    def __gt__(self, other: object) -> bool:
        return not isinstance(other, _Infinite)

    def __ge__(self, other: object) -> bool:
        return True

    def __repr__(self) -> str:
        return "INFINITE_SLOPE"


INFINITE_SLOPE = _Infinite()

Slope = Union[Fraction, _Infinite]


@dataclass(frozen=True)
class StabilityParam:
    """A point (b, w) of the parameter plane."""

    b: Rational
    w: Rational

    def __post_init__(self) -> None:
        object.__setattr__(self, "b", Fraction(self.b))
        object.__setattr__(self, "w", Fraction(self.w))

    @property
    def in_U(self) -> bool:
        """Strictly above the parabola w = b^2/2."""
        return self.w > self.b * self.b / 2


def mu_H(c: Charge, X: ThreefoldData) -> Slope:
    """Slope ch1.H^2 / (ch0 H^3), or +infinity in rank zero."""
    if c.r == 0:
        return INFINITE_SLOPE
    return c.c1H2 / (c.r * X.h3)


def nu_H(c: Charge) -> Slope:
    """Rank-zero slope ch2.H / ch1.H^2, or +infinity when ch1.H^2 = 0."""
    if c.r != 0:
        raise NonzeroRankError("nu_H is defined for rank-zero charges only")
    if c.c1H2 == 0:
        return INFINITE_SLOPE
    return c.c2H / c.c1H2


def nu_bw(c: Charge, p: StabilityParam, X: ThreefoldData) -> Slope:
    """Tilt slope (ch2.H - w ch0 H^3) / (ch1.H^2 - b ch0 H^3).

    The denominator is the b-twisted ch1.H^2; when it vanishes the slope is
    +infinity.  Meaningful as a weak stability slope for p in U.
    """
    den = c.c1H2 - p.b * c.r * X.h3
    if den == 0:
        return INFINITE_SLOPE
    return (c.c2H - p.w * c.r * X.h3) / den


def N_bw(c: Charge, p: StabilityParam, X: ThreefoldData) -> Slope:
    """Unrescaled slope (w ch2^{bH}.H - w^3 ch0 H^3/6) / (w^2 ch1^{bH}.H^2).

    Here p.w plays the role of the second parameter of the unrescaled family
    (it need not lie in U); p.w must be nonzero.
    """
    if p.w == 0:
        raise ValueError("N_bw needs a nonzero second parameter")
    b, w = p.b, p.w
    rH3 = c.r * X.h3
    den = w * w * (c.c1H2 - b * rH3)
    if den == 0:
        return INFINITE_SLOPE
    ch2_bH = c.c2H - b * c.c1H2 + b * b / 2 * rH3
    return (w * ch2_bH - w**3 / 6 * rH3) / den


def heart_positive(c: Charge, p: StabilityParam, X: ThreefoldData) -> bool:
    """Necessary numerical positivity for a semistable object of the tilted heart.

    Requires ch1^{bH}.H^2 >= 0, and when that vanishes additionally
    ch2.H - w ch0 H^3 >= 0.
    """
    den = c.c1H2 - p.b * c.r * X.h3
    if den < 0:
        return False
    if den > 0:
        return True
    return c.c2H - p.w * c.r * X.h3 >= 0


def pi_projection(c: Charge, X: ThreefoldData) -> tuple[Rational, Rational]:
    """Projection (ch1.H^2/(ch0 H^3), ch2.H/(ch0 H^3)) of a nonzero-rank charge."""
    if c.r == 0:
        raise NonzeroRankError(
            "projection is undefined in rank zero; rank-zero walls are the parallel lines"
        )
    rH3 = c.r * X.h3
    return (c.c1H2 / rH3, c.c2H / rH3)


def attractor_slope(
    c: Charge,
    cc: CurveCharge,
    X: ThreefoldData,
    ch1_beta: Optional[RationalLike] = None,
) -> Slope:
    """Large-volume attractor slope ch2.H/ch1.H^2 - (ch1.beta)/(n ch1.H^2).

    The pairing ch1.beta is resolved from Picard-rank-one data as
    (ch1.H^2/H^3) * beta.H unless supplied explicitly.  Tends to the
    rank-zero slope as n grows.
    """
    if c.r != 0:
        raise NonzeroRankError("attractor slope is defined for rank-zero charges only")
    if ch1_beta is None:
        if not X.pic_rank1:
            raise MissingDataError("ch1.beta must be supplied unless pic_rank1 is set")
        ch1_beta = (c.c1H2 / X.h3) * cc.betaH
    if c.c1H2 == 0:
        return INFINITE_SLOPE
    return c.c2H / c.c1H2 - Fraction(1, cc.n) * Fraction(ch1_beta) / c.c1H2
