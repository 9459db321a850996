"""Formal q-series with rational exponents and the discriminant-group layer.

A series is a rational exponent offset plus coefficients at non-negative
integer steps, known up to a truncation order (terms beyond it are unknown,
not zero).  Eta-power expansions, the surface generating series, the
assembly of counting tables into a vector over the cyclic discriminant
group, the exact phase check for the translation tau -> tau + 1, and the
discrete Fourier S-matrix all live here.

Everything except the S-matrix (explicitly float complex) is exact.  Inputs
with second-cohomology torsion are rejected: the discriminant-group picture
is only set up for torsion-free data.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .charges import CurveCharge, ThreefoldData, resolve_Q
from .errors import PreconditionError
from .numeric import Rational, RationalLike


class ParityViolationError(PreconditionError):
    """A lattice vector fails the Riemann-Roch parity rule: not realizable."""


class InconsistentCosetError(PreconditionError):
    """A table entry is incompatible with its discriminant-group coset."""


class UnsupportedTorsionError(PreconditionError):
    """Second-cohomology torsion is not supported by the modular layer."""


def _require_torsion_free(X: ThreefoldData) -> None:
    if X.n_tors != 1:
        raise UnsupportedTorsionError(
            "modular-layer operations require #H^2(X,Z)_tors = 1"
        )


@dataclass(frozen=True)
class QSeries:
    """Formal series sum_k coeffs[k] * q^(offset + k), known through the
    truncation order len(coeffs) - 1; higher steps are unknown, not zero."""

    offset: Rational
    coeffs: tuple[Rational, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "offset", Fraction(self.offset))
        if len(self.coeffs) == 0:
            raise ValueError("a series needs at least one known step")
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))

    # -- structure ----------------------------------------------------------

    @property
    def order(self) -> int:
        """Largest known step."""
        return len(self.coeffs) - 1

    @property
    def top_exponent(self) -> Rational:
        """Largest exponent with a known coefficient."""
        return self.offset + self.order

    def coefficient(self, exponent: RationalLike) -> Rational:
        """Coefficient of q^exponent; zero off-support, known region only."""
        step = Fraction(exponent) - self.offset
        if step.denominator != 1 or step < 0:
            return Fraction(0)
        step = int(step)
        if step > self.order:
            raise ValueError(f"exponent {exponent} is beyond the known order")
        return self.coeffs[step]

    def support(self) -> list[Rational]:
        """Exponents with nonzero known coefficients."""
        return [self.offset + k for k, c in enumerate(self.coeffs) if c != 0]

    def _canonical(self) -> tuple[Rational, tuple[tuple[Rational, Rational], ...]]:
        return (
            self.top_exponent,
            tuple((self.offset + k, c) for k, c in enumerate(self.coeffs) if c != 0),
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        return self._canonical() == other._canonical()

    def __hash__(self) -> int:
        return hash(self._canonical())

    # -- algebra --------------------------------------------------------------

    def shift(self, t: RationalLike) -> "QSeries":
        """Multiply by q^t."""
        return QSeries(self.offset + Fraction(t), self.coeffs)

    def scale(self, a: RationalLike) -> "QSeries":
        a = Fraction(a)
        return QSeries(self.offset, tuple(a * c for c in self.coeffs))

    def __add__(self, other: "QSeries") -> "QSeries":
        if not isinstance(other, QSeries):
            return NotImplemented
        gap = other.offset - self.offset
        if gap.denominator != 1:
            raise ValueError(
                f"offsets {self.offset} and {other.offset} differ by a non-integer"
            )
        offset = min(self.offset, other.offset)
        top = min(self.top_exponent, other.top_exponent)
        order = int(top - offset)
        coeffs = []
        for k in range(order + 1):
            exponent = offset + k
            total = Fraction(0)
            for series in (self, other):
                step = exponent - series.offset
                if step.denominator == 1 and 0 <= int(step) <= series.order:
                    total += series.coeffs[int(step)]
            coeffs.append(total)
        return QSeries(offset, tuple(coeffs))

    def __neg__(self) -> "QSeries":
        return self.scale(-1)

    def __sub__(self, other: "QSeries") -> "QSeries":
        return self + (-other)

    def __mul__(self, other: "QSeries") -> "QSeries":
        if not isinstance(other, QSeries):
            return NotImplemented
        order = min(self.order, other.order)
        coeffs = [Fraction(0)] * (order + 1)
        for i, a in enumerate(self.coeffs[: order + 1]):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs[: order + 1 - i]):
                if b != 0:
                    coeffs[i + j] += a * b
        return QSeries(self.offset + other.offset, tuple(coeffs))

    def __repr__(self) -> str:
        terms = [f"{c}*q^({self.offset}+{k})" for k, c in enumerate(self.coeffs) if c != 0]
        body = " + ".join(terms) if terms else "0"
        return f"QSeries({body} + O(q^({self.top_exponent}+1)))"


def zero_series(offset: RationalLike, order: int) -> QSeries:
    return QSeries(Fraction(offset), tuple([Fraction(0)] * (order + 1)))


@dataclass(frozen=True)
class DiscriminantGroup:
    """Cyclic group Z/N indexing the components of the generating vector."""

    N: int

    def __post_init__(self) -> None:
        if self.N < 1:
            raise ValueError("N must be >= 1")

    def elements(self) -> range:
        return range(self.N)

    def pairing(self, gamma: int, betaH: RationalLike) -> Rational:
        """Pairing of a residue with degree data, as a fraction mod 1."""
        return (Fraction(gamma) * Fraction(betaH) / self.N) % 1


def discriminant_group(cc: CurveCharge, X: ThreefoldData) -> DiscriminantGroup:
    _require_torsion_free(X)
    return DiscriminantGroup(cc.n * X.h3)


# ---------------------------------------------------------------------------
# eta powers and the surface series


def _colored_partitions(e: int, order: int) -> list[int]:
    """Coefficients of prod_{k>=1} (1 - q^k)^(-e) through q^order.

    Direct product evaluation: one factor per part size k, with
    (1 - q^k)^(-e) expanded by the binomial series.
    """
    coeffs = [0] * (order + 1)
    coeffs[0] = 1
    for k in range(1, order + 1):
        updated = [0] * (order + 1)
        for base, value in enumerate(coeffs):
            if value == 0:
                continue
            binom = 1  # C(e - 1 + j, j), built incrementally over j
            j = 0
            while base + k * j <= order:
                updated[base + k * j] += value * binom
                j += 1
                binom = binom * (e - 1 + j) // j
        coeffs = updated
    return coeffs


def eta_inverse_power(e: int, order: int) -> QSeries:
    """The expansion of (q^(-1/24) prod (1-q^k)^(-1))^e through step ``order``.

    Offset -e/24; the step-k coefficient is the number of e-colored
    partitions of k.
    """
    if e < 1:
        raise ValueError("the exponent e must be a positive integer")
    if order < 0:
        raise ValueError("order must be >= 0")
    return QSeries(
        Fraction(-e, 24),
        tuple(Fraction(c) for c in _colored_partitions(e, order)),
    )


def euler_number_of_divisor(cc: CurveCharge, X: ThreefoldData) -> int:
    """Topological Euler number c2(X).nH + n^3 H^3 of a smooth degree-n divisor."""
    return X.c2H * cc.n + cc.n**3 * X.h3


def goettsche_series(
    cc: CurveCharge, X: ThreefoldData, d: RationalLike, order: int
) -> QSeries:
    """Generating series of point-counting Euler numbers on one divisor family.

    q^(c - d/(2 h^2)) times the inverse eta power with exponent e(D), where
    h^2 = n H^3, e(D) = c2.nH + n^3 H^3 and
    c = n beta.H - (beta.H)^2/(2 n H^3) + Q/2.
    """
    _require_torsion_free(X)
    Q = resolve_Q(cc, X)
    e_D = euler_number_of_divisor(cc, X)
    if e_D < 1:
        raise ValueError(f"divisor Euler number e(D) = {e_D} must be positive")
    h2 = cc.n * X.h3
    c = cc.n * cc.betaH - cc.betaH**2 / (2 * h2) + Q / 2
    return eta_inverse_power(e_D, order).shift(c - Fraction(d) / (2 * h2))


def discriminant(h2: RationalLike, l2: RationalLike, hl: RationalLike) -> Rational:
    """Lattice discriminant h^2 l^2 - (h.l)^2 of the span of h and l."""
    return Fraction(h2) * Fraction(l2) - Fraction(hl) ** 2


def charge_from_NL(
    k: int, cc_base: CurveCharge, X: ThreefoldData, l2: RationalLike
) -> Rational:
    """Charge m = k + (beta.nH - l^2)/2 of a length-k points-on-divisor family.

    Riemann-Roch on the divisor forces the parity l^2 = n beta.H (mod 2);
    vectors violating it are not realizable and are rejected.
    """
    l2 = Fraction(l2)
    gap = l2 - cc_base.n * cc_base.betaH
    if gap.denominator != 1 or int(gap) % 2 != 0:
        raise ParityViolationError(
            f"l^2 = {l2} violates the parity rule l^2 = n*beta.H (mod 2)"
        )
    return k + (cc_base.betaH * cc_base.n - l2) / 2


def assemble_nl_series(
    NL: Mapping[tuple[Rational, int], int],
    cc: CurveCharge,
    X: ThreefoldData,
    order: int,
) -> list[QSeries]:
    """Assemble counting-table data into the vector of series over Z/(n H^3).

    Component gamma is q^c * eta^(-e(D)) * sum_d NL[d, gamma] q^(-d/(2 h^2)),
    truncated to ``order`` known steps.  Every key (d, gamma) must pass the
    coset consistency check: the implied square l^2 = (d + (beta.H)^2)/h^2
    has to be an integer of the parity required by :func:`charge_from_NL`.
    Components without entries are zero series.
    """
    _require_torsion_free(X)
    if not X.pic_rank1:
        raise InconsistentCosetError("assembly is defined for Picard rank one")
    group = discriminant_group(cc, X)
    N = group.N
    base = goettsche_series(cc, X, Fraction(0), order)

    per_gamma: dict[int, list[tuple[Fraction, int]]] = {}
    for (d, gamma), value in NL.items():
        d = Fraction(d)
        if not (0 <= gamma < N):
            raise InconsistentCosetError(f"coset {gamma} is outside Z/{N}")
        l2 = (d + cc.betaH**2) / N
        if l2.denominator != 1:
            raise InconsistentCosetError(
                f"discriminant {d} implies non-integral l^2 = {l2} for coset {gamma}"
            )
        gap = l2 - cc.n * cc.betaH
        if gap.denominator != 1 or int(gap) % 2 != 0:
            raise InconsistentCosetError(
                f"discriminant {d} implies l^2 = {l2}, violating the parity rule"
            )
        per_gamma.setdefault(gamma, []).append((d, value))

    components = []
    for gamma in group.elements():
        entries = per_gamma.get(gamma)
        if not entries:
            components.append(zero_series(base.offset, order))
            continue
        total: Optional[QSeries] = None
        for d, value in sorted(entries):
            term = base.shift(-d / (2 * N)).scale(value)
            total = term if total is None else total + term
        components.append(total)
    return components


# ---------------------------------------------------------------------------
# transformation data


def t_phase(cc: CurveCharge, X: ThreefoldData) -> Rational:
    """Exponent phase picked up under tau -> tau + 1, reduced mod 1.

    c2.nH/24 + Q/2 + n beta.H/2 + n^3 H^3/8 modulo 1.
    """
    _require_torsion_free(X)
    Q = resolve_Q(cc, X)
    n = cc.n
    phase = (
        Fraction(X.c2H * n, 24)
        + Q / 2
        + Fraction(1, 2) * n * cc.betaH
        + Fraction(n**3 * X.h3, 8)
    )
    return phase % 1


def t_check(series: QSeries, phi: RationalLike) -> bool:
    """True iff every supported exponent is congruent to phi modulo 1."""
    phi = Fraction(phi)
    return all((x - phi).denominator == 1 for x in series.support())


def s_matrix(group: DiscriminantGroup) -> list[list[complex]]:
    """Discrete Fourier matrix exp(-2 pi i g g'/N)/sqrt(N), double precision."""
    N = group.N
    scale = 1 / (N**0.5)
    return [
        [scale * cmath.exp(-2j * cmath.pi * g1 * g2 / N) for g2 in range(N)]
        for g1 in range(N)
    ]


def pole_order(cc: CurveCharge, X: ThreefoldData) -> Rational:
    """Pole order (n^3 H^3 + n c2.H)/24 of the generating series at q = 0."""
    return Fraction(cc.n**3 * X.h3 + cc.n * X.c2H, 24)


# ---------------------------------------------------------------------------
# serialization


def series_to_jsonable(series: QSeries, digits: Optional[int] = None) -> dict:
    """{"offset": "p/q", "coeffs": [...], "order": N}; decimal form is display-only."""
    from .numeric import decimal_str

    fmt = str if digits is None else (lambda x: decimal_str(x, digits))
    return {
        "offset": fmt(series.offset),
        "coeffs": [fmt(c) for c in series.coeffs],
        "order": series.order,
    }


def series_from_jsonable(data: dict) -> QSeries:
    coeffs = tuple(Fraction(c) for c in data["coeffs"])
    if len(coeffs) != data["order"] + 1:
        raise ValueError("coefficient list does not match the declared order")
    return QSeries(Fraction(data["offset"]), coeffs)


def nl_table_from_records(
    records: Sequence[Mapping],
) -> dict[tuple[Rational, int], int]:
    """Build the counting-table map from {"d": "p/q", "gamma": int, "value": int} rows."""
    table: dict[tuple[Rational, int], int] = {}
    for row in records:
        key = (Fraction(str(row["d"])), int(row["gamma"]))
        if key in table:
            raise ValueError(f"duplicate table key {key}")
        table[key] = int(row["value"])
    return table
