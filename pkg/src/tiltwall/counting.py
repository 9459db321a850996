"""Invariant bookkeeping: multiplicities, wall-crossing sums, charge twists.

Sheaf-counting and curve-counting invariants are external inputs, ingested
as finite tables keyed by (degree, charge) with absent keys meaning zero.
This module relates them: the signed Euler-characteristic multiplicity, the
product formula for the rank-zero count, the cone-restricted double sum, and
the twist-invariant normalization of ch3.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .charges import CurveCharge, ThreefoldData, resolve_Q
from .errors import PreconditionError
from .numeric import Rational


class NonIntegerChiError(PreconditionError):
    """chi(v(n)) came out non-integral: the input data is inconsistent."""


class NotPicRank1Error(PreconditionError):
    """The operation assumes Picard rank one."""


@dataclass
class InvariantTable:
    """Finite map (degree, charge) -> integer with zero for missing keys.

    ``thresholds`` declares user-supplied emptiness: for a degree d with
    threshold t, every charge k < t is empty (zero).  A nonzero entry below
    its degree's threshold is rejected as inconsistent.
    """

    entries: dict[tuple[int, int], int] = field(default_factory=dict)
    thresholds: dict[int, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for (degree, charge), value in self.entries.items():
            below = self.thresholds.get(degree)
            if below is not None and charge < below and value != 0:
                raise ValueError(
                    f"entry ({degree}, {charge}) = {value} contradicts the "
                    f"declared emptiness below {below}"
                )

    def get(self, degree: int, charge: int) -> int:
        below = self.thresholds.get(degree)
        if below is not None and charge < below:
            return 0
        return self.entries.get((degree, charge), 0)

    def support(self) -> Iterable[tuple[int, int]]:
        return sorted(k for k, v in self.entries.items() if v != 0)


def chi_vn(cc: CurveCharge, X: ThreefoldData) -> Rational:
    """chi of the twisted rank-one class: n^3 H^3/6 - n beta.H - m + n c2.H/12."""
    n = cc.n
    return (
        Fraction(n**3 * X.h3, 6)
        - n * cc.betaH
        - cc.m
        + Fraction(n * X.c2H, 12)
    )


def e_n(cc: CurveCharge, X: ThreefoldData) -> int:
    """Signed fibre multiplicity (-1)^(chi-1) * chi * n_tors^2."""
    chi = chi_vn(cc, X)
    if chi.denominator != 1:
        raise NonIntegerChiError(f"chi(v(n)) = {chi} is not an integer")
    chi = int(chi)
    sign = 1 if (chi - 1) % 2 == 0 else -1
    return sign * chi * X.n_tors**2


def dt_from_mnop(I_value: int, cc: CurveCharge, X: ThreefoldData) -> int:
    """Rank-zero count as multiplicity times the ideal-sheaf count."""
    return e_n(cc, X) * I_value


def in_cone(degree: int, charge: int, cc: CurveCharge) -> bool:
    """Membership in the finite index cone of the double sum.

    Degrees run over effective curve classes, 0 <= degree <= 6 beta.H, and
    charges satisfy |charge| < (6 beta.H + 1) n.
    """
    bound = 6 * cc.betaH
    return 0 <= degree <= bound and abs(charge) < (bound + 1) * cc.n


def toda_sum(
    cc: CurveCharge, X: ThreefoldData, I: InvariantTable, P: InvariantTable
) -> int:
    """Cone-restricted double sum over pair and ideal-sheaf invariants.

    Sums over (degree1, m1) in the support of P and the matching
    (degree2, m2) = (beta.H + degree1, m1 - n*degree1 - m), both inside the
    cone, the terms

        (-1)^(chi - n*degree1 - 1) (chi - n*degree1) I[degree2, m2] P[degree1, -m1].

    Implemented verbatim, index conventions included; the command-line layer
    offers a side-by-side comparison with the product formula.
    """
    if not X.pic_rank1:
        raise NotPicRank1Error("the double sum assumes Picard rank one")
    chi = chi_vn(cc, X)
    if chi.denominator != 1:
        raise NonIntegerChiError(f"chi(v(n)) = {chi} is not an integer")
    chi = int(chi)
    if cc.betaH.denominator != 1 or cc.m.denominator != 1:
        raise ValueError("integer beta.H and m are required for table lookups")
    betaH, m, n = int(cc.betaH), int(cc.m), cc.n

    total = 0
    for degree1, p_charge in P.support():
        m1 = -p_charge
        if not in_cone(degree1, m1, cc):
            continue
        degree2 = betaH + degree1
        m2 = m1 - n * degree1 - m
        if not in_cone(degree2, m2, cc):
            continue
        weight = chi - n * degree1
        sign = 1 if (weight - 1) % 2 == 0 else -1
        total += sign * weight * I.get(degree2, m2) * P.get(degree1, p_charge)
    return total


def mhat(cc: CurveCharge, X: ThreefoldData) -> Rational:
    """Twist-invariant normalization of ch3 used as a q-exponent.

    m + n beta.H/2 - n c2.H/24 - n^3 H^3/24 + Q/2, with Q the beta
    self-pairing (auto-derived in Picard-rank-one mode).
    """
    Q = resolve_Q(cc, X)
    n = cc.n
    return (
        cc.m
        + Fraction(1, 2) * n * cc.betaH
        - Fraction(n * X.c2H, 24)
        - Fraction(n**3 * X.h3, 24)
        + Q / 2
    )


def twist_curve_charge(cc: CurveCharge, a: int, X: ThreefoldData) -> CurveCharge:
    """Cup the underlying rank-zero class with exp(aH).

    The degree, charge and self-pairing transform as

        beta.H -> beta.H - a n H^3,
        m      -> m + a beta.H + a n^2 H^3/2 - a^2 n H^3/2,
        Q      -> Q - 2a beta.H + a^2 n H^3,

    leaving the normalized exponent of :func:`mhat` unchanged.
    """
    Q = resolve_Q(cc, X)
    n, h3 = cc.n, X.h3
    return CurveCharge(
        betaH=cc.betaH - a * n * h3,
        m=cc.m + a * cc.betaH + Fraction(a * n * n * h3, 2) - Fraction(a * a * n * h3, 2),
        n=n,
        Q=Q - 2 * a * cc.betaH + a * a * n * h3,
    )


def mock_depth(n: int, X: ThreefoldData) -> int:
    """Maximal nontrivial divisor decomposition count minus one: n - 1.

    In Picard-rank-one mode a degree-n divisor splits into at most n degree-one
    pieces; depth zero is the honestly modular regime.
    """
    if not X.pic_rank1:
        raise NotPicRank1Error("divisor decompositions assume Picard rank one")
    if n < 1:
        raise ValueError("n must be >= 1")
    return n - 1


def tables_from_records(doc: Mapping) -> tuple[InvariantTable, InvariantTable]:
    """Build the (ideal-sheaf, pair) tables from one structured document.

    Expected shape: {"entries": [{"type": "I"|"P", "degree": int,
    "charge": int, "value": int}, ...], "thresholds": [{"type": ...,
    "degree": int, "below": int}, ...]}; thresholds are optional.
    """
    entries: dict[str, dict[tuple[int, int], int]] = {"I": {}, "P": {}}
    thresholds: dict[str, dict[int, int]] = {"I": {}, "P": {}}
    for row in doc.get("entries", []):
        kind = row["type"]
        if kind not in entries:
            raise ValueError(f"unknown table type {kind!r}")
        key = (int(row["degree"]), int(row["charge"]))
        if key in entries[kind]:
            raise ValueError(f"duplicate {kind} entry at {key}")
        entries[kind][key] = int(row["value"])
    for row in doc.get("thresholds", []):
        kind = row["type"]
        if kind not in thresholds:
            raise ValueError(f"unknown table type {kind!r}")
        degree = int(row["degree"])
        if degree in thresholds[kind]:
            raise ValueError(f"duplicate {kind} threshold for degree {degree}")
        thresholds[kind][degree] = int(row["below"])
    return (
        InvariantTable(entries["I"], thresholds["I"]),
        InvariantTable(entries["P"], thresholds["P"]),
    )
