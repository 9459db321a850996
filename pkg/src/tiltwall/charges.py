"""Numerical model of a polarized threefold and of reduced Chern characters.

A charge stores only the four H-intersected Chern numbers
(ch0, ch1.H^2, ch2.H, ch3) that drive every slope and wall formula, plus the
optional refinements ch1^2.H and ch1.c2(X).  With Picard rank one the
refinements are recomputed automatically; otherwise operations that need a
missing refinement fail loudly instead of guessing.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import PreconditionError
from .numeric import Rational, RationalLike

logger = logging.getLogger(__name__)


class MissingDataError(PreconditionError):
    """An optional refinement (ch1^2.H, ch1.c2 or Q) was needed but absent."""


@dataclass(frozen=True)
class ThreefoldData:
    """Intersection-number shadow of (X, O(1)).

    h3 = H^3, c2H = c2(X).H, b2 = b_2(X), n_tors = #H^2(X,Z)_tors.  When
    pic_rank1 is set every divisor class is treated as a rational multiple
    of H.
    """

    h3: int
    c2H: int
    b2: int = 1
    n_tors: int = 1
    pic_rank1: bool = True

    def __post_init__(self) -> None:
        if self.h3 < 1:
            raise ValueError("h3 must be a positive integer")
        if self.b2 < 1:
            raise ValueError("b2 must be a positive integer")
        if self.n_tors < 1:
            raise ValueError("n_tors must be a positive integer")


@dataclass(frozen=True)
class Charge:
    """Reduced Chern character (ch0, ch1.H^2, ch2.H, ch3).

    c1sqH = ch1^2.H and c1c2 = ch1.c2(X) ride along when known and drop to
    None under operations that cannot recompute them.
    """

    r: Rational
    c1H2: Rational
    c2H: Rational
    c3: Rational
    c1sqH: Optional[Rational] = None
    c1c2: Optional[Rational] = None

    def __post_init__(self) -> None:
        for name in ("r", "c1H2", "c2H", "c3"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        for name in ("c1sqH", "c1c2"):
            value = getattr(self, name)
            if value is not None:
                object.__setattr__(self, name, Fraction(value))


@dataclass(frozen=True)
class CurveCharge:
    """Curve class degree beta.H, holomorphic Euler characteristic m, twist n.

    Q is the self-pairing of beta against its preimage under cup product
    with nH.  Leave it None to have Picard-rank-one data derive it as
    (beta.H)^2 / (n H^3); see :func:`resolve_Q`.
    """

    betaH: Rational
    m: Rational
    n: int
    Q: Optional[Rational] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "betaH", Fraction(self.betaH))
        object.__setattr__(self, "m", Fraction(self.m))
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError("n must be a positive integer")
        if self.Q is not None:
            object.__setattr__(self, "Q", Fraction(self.Q))


def resolve_Q(cc: CurveCharge, X: ThreefoldData) -> Rational:
    """Q if supplied, else the Picard-rank-one self-pairing (beta.H)^2/(n H^3)."""
    if cc.Q is not None:
        return cc.Q
    if X.pic_rank1:
        q = cc.betaH**2 / (cc.n * X.h3)
        logger.info(
            "derived Q = (beta.H)^2/(n*H^3) = %s from Picard-rank-one data", q
        )
        return q
    raise MissingDataError("Q must be supplied unless pic_rank1 is set")


def _refine(c1H2: Fraction, X: ThreefoldData) -> tuple[Optional[Fraction], Optional[Fraction]]:
    """Optional refinements for ch1 = k*H, available exactly in rank-one mode."""
    if not X.pic_rank1:
        return None, None
    k = c1H2 / X.h3
    return k * k * X.h3, k * X.c2H


def structure_sheaf_charge(X: ThreefoldData) -> Charge:
    return Charge(Fraction(1), Fraction(0), Fraction(0), Fraction(0),
                  c1sqH=Fraction(0), c1c2=Fraction(0))


def line_bundle_charge(k: RationalLike, X: ThreefoldData) -> Charge:
    """Charge of O(kH): (1, kH^3, k^2 H^3/2, k^3 H^3/6), refinements included."""
    k = Fraction(k)
    return Charge(
        Fraction(1),
        k * X.h3,
        k * k * X.h3 / 2,
        k**3 * X.h3 / 6,
        c1sqH=k * k * X.h3,
        c1c2=k * X.c2H,
    )


def class_v(cc: CurveCharge) -> Charge:
    """Rank-one charge (1, 0, -beta.H, -m) of an ideal-sheaf-type class."""
    return Charge(Fraction(1), Fraction(0), -cc.betaH, -cc.m,
                  c1sqH=Fraction(0), c1c2=Fraction(0))


def class_vn(cc: CurveCharge, X: ThreefoldData) -> Charge:
    """Rank-zero charge (0, nH^3, -beta.H - n^2 H^3/2, -m + n^3 H^3/6).

    This is class_v minus the charge of O(-n); ch1 equals nH on the nose, so
    both refinements are known exactly.
    """
    n, h3 = cc.n, X.h3
    return Charge(
        Fraction(0),
        Fraction(n * h3),
        -cc.betaH - Fraction(n * n * h3, 2),
        -cc.m + Fraction(n**3 * h3, 6),
        c1sqH=Fraction(n * n * h3),
        c1c2=Fraction(n * X.c2H),
    )


def twist_by_bH(c: Charge, b: RationalLike, X: ThreefoldData) -> Charge:
    """The charge of ch(E) * exp(-bH), expanded through degree three."""
    b = Fraction(b)
    rH3 = c.r * X.h3
    c1H2 = c.c1H2 - b * rH3
    c2H = c.c2H - b * c.c1H2 + b * b / 2 * rH3
    c3 = c.c3 - b * c.c2H + b * b / 2 * c.c1H2 - b**3 / 6 * rH3
    c1sqH, c1c2 = _refine(c1H2, X)
    return Charge(c.r, c1H2, c2H, c3, c1sqH=c1sqH, c1c2=c1c2)


def twist_by_O(c: Charge, a: RationalLike, X: ThreefoldData) -> Charge:
    """Tensor by O(aH): the inverse-direction twist ch(E) * exp(aH)."""
    return twist_by_bH(c, -Fraction(a), X)


def delta_H(c: Charge, X: ThreefoldData) -> Rational:
    """H-discriminant (ch1.H^2)^2 - 2 (ch0 H^3)(ch2.H); a twist invariant."""
    return c.c1H2**2 - 2 * (c.r * X.h3) * c.c2H


def chi_euler(c: Charge, X: ThreefoldData) -> Rational:
    """Euler characteristic ch3 + ch1.c2/12 (Todd class (1, 0, c2/12, 0)).

    Valid on Calabi-Yau threefolds with vanishing td1 and td3; ch1.c2 is
    taken from the charge, or derived from Picard-rank-one data.
    """
    c1c2 = c.c1c2
    if c1c2 is None:
        if not X.pic_rank1:
            raise MissingDataError("ch1.c2 is needed: supply it or set pic_rank1")
        c1c2 = (c.c1H2 / X.h3) * X.c2H
    return c.c3 + c1c2 / 12


def complement(total: Charge, sub: Charge) -> Charge:
    """Componentwise total - sub, as for the remaining term of an exact triangle.

    ch1.c2 is linear in ch1 and is subtracted when both operands carry it;
    ch1^2.H is quadratic in ch1, so it cannot be subtracted componentwise
    and is always dropped.
    """
    c1c2 = None
    if total.c1c2 is not None and sub.c1c2 is not None:
        c1c2 = total.c1c2 - sub.c1c2
    return Charge(
        total.r - sub.r,
        total.c1H2 - sub.c1H2,
        total.c2H - sub.c2H,
        total.c3 - sub.c3,
        c1sqH=None,
        c1c2=c1c2,
    )


def hodge_index_check(c: Charge, X: ThreefoldData) -> bool:
    """True iff ch1^2.H <= (ch1.H^2)^2 / H^3 (equality for ch1 a multiple of H)."""
    if c.c1sqH is None:
        raise MissingDataError("hodge_index_check needs ch1^2.H")
    return c.c1sqH <= c.c1H2**2 / X.h3


def strong_bogomolov_check(c: Charge) -> bool:
    """True iff ch1^2.H - 2 ch0 (ch2.H) >= 0 (intersection-form Bogomolov bound)."""
    if c.c1sqH is None:
        raise MissingDataError("strong_bogomolov_check needs ch1^2.H")
    return c.c1sqH - 2 * c.r * c.c2H >= 0
