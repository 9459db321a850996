"""Wall lines, chamber geometry, ch3 positivity bounds and the first-wall scan.

Walls of instability for a fixed charge are line segments inside
U = {w > b^2/2}: concurrent through the projection point for nonzero rank,
parallel of slope equal to the rank-zero slope otherwise.  The first-wall
scan enumerates every integer candidate for the second Chern degree of a
rank-one destabilizing subsheaf, applies the positivity filters in their
logical order, and certifies when the candidate set collapses to the single
section-pair value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional, Sequence, Union

from .charges import Charge, CurveCharge, ThreefoldData
from .errors import PreconditionError
from .numeric import (
    Rational,
    RationalLike,
    Surd,
    decimal_str,
    solve_quadratic,
    surd_cmp,
    surd_is_rational,
)
from .stability import StabilityParam

# ---------------------------------------------------------------------------
# wall lines


class ProportionalChargesError(PreconditionError):
    """The two charges have proportional slope data: no wall exists."""


class NoWallError(PreconditionError):
    """Both charges have constant, distinct slopes: their walls never meet."""


class IrrationalLocusError(PreconditionError):
    """A hypothesis point exists inside U but is not rational."""


class HypothesisNotMetError(PreconditionError):
    """The null-locus hypothesis fails at the supplied parameter point."""


class EmptyViewportError(PreconditionError):
    """The plot viewport has non-positive extent."""


@dataclass(frozen=True)
class WallLine:
    """The line w = slope*b + x."""

    slope: Rational
    x: Rational

    def __post_init__(self) -> None:
        object.__setattr__(self, "slope", Fraction(self.slope))
        object.__setattr__(self, "x", Fraction(self.x))

    def w_at(self, b: RationalLike) -> Rational:
        return self.slope * Fraction(b) + self.x


@dataclass(frozen=True)
class VerticalWall:
    """Degenerate wall b = const (both slopes infinite along it)."""

    b: Rational

    def __post_init__(self) -> None:
        object.__setattr__(self, "b", Fraction(self.b))


def wall_between(
    u: Charge, v: Charge, X: ThreefoldData
) -> Union[WallLine, VerticalWall]:
    """The locus where the tilt slopes of u and v agree.

    Cross-multiplying the two slopes kills the b*w terms, leaving the affine
    equation A + B*b + C*w = 0 with

        A = ch2(u).H ch1(v).H^2 - ch2(v).H ch1(u).H^2,
        B = H^3 (ch2(v).H ch0(u) - ch2(u).H ch0(v)),
        C = H^3 (ch0(v) ch1(u).H^2 - ch0(u) ch1(v).H^2).

    A vanishing w-coefficient C yields a vertical wall; if all three
    coefficients vanish the charges are proportional and no wall exists.
    """
    h3 = X.h3
    A = u.c2H * v.c1H2 - v.c2H * u.c1H2
    B = h3 * (v.c2H * u.r - u.c2H * v.r)
    C = h3 * (v.r * u.c1H2 - u.r * v.c1H2)
    if C != 0:
        return WallLine(-B / C, -A / C)
    if B != 0:
        return VerticalWall(-A / B)
    if A == 0:
        raise ProportionalChargesError("slope data proportional: slopes agree identically")
    raise NoWallError("two rank-zero charges with distinct constant slopes never meet")


def parabola_intersections(line: WallLine) -> Optional[tuple[Surd, Surd]]:
    """Intersections of a wall line with the boundary parabola w = b^2/2.

    Returns (b2, b1) with b2 <= b1, the roots b = slope +- sqrt(slope^2 + 2x),
    or None when the line misses the closed region under the parabola.
    """
    roots = solve_quadratic(Fraction(1, 2), -line.slope, -line.x)
    if not roots:
        return None
    if len(roots) == 1:
        return (roots[0], roots[0])
    return (roots[0], roots[1])


def li_region_contains(p: StabilityParam) -> bool:
    """Strict inequality w > b^2/2 + (b - floor(b))(floor(b) + 1 - b)/2.

    The region of the parameter plane where the quintic threefold is known
    to satisfy the ch3 positivity bound; evaluated with exact rational floor.
    """
    fl = math.floor(p.b)
    rhs = p.b * p.b / 2 + Fraction(1, 2) * (p.b - fl) * (fl + 1 - p.b)
    return p.w > rhs


# ---------------------------------------------------------------------------
# ch3 positivity bounds


def _ch2_twisted(c: Charge, b: Fraction, h3: int) -> Fraction:
    return c.c2H - b * c.c1H2 + b * b / 2 * c.r * h3


def _ch3_twisted(c: Charge, b: Fraction, h3: int) -> Fraction:
    return c.c3 - b * c.c2H + b * b / 2 * c.c1H2 - b**3 / 6 * c.r * h3


def bg_hypothesis_locus(
    c: Charge, line: WallLine, X: ThreefoldData
) -> Optional[StabilityParam]:
    """Point of ``line`` inside U where ch2^{bH}.H = (w - b^2/2) ch0 H^3 for c.

    For nonzero rank the condition cuts a parabola, met by the line in at
    most two points; the one of larger b inside U is returned.  For rank
    zero the condition pins b to the rank-zero slope of c.  Returns None
    when no such point lies inside U; a point that exists but is irrational
    raises IrrationalLocusError (the exact model has no way to return it).
    """
    h3 = X.h3
    s, x = line.slope, line.x
    if c.r != 0:
        # r H^3 b^2 - (ch1.H^2 + s r H^3) b + (ch2.H - x r H^3) = 0
        rH3 = c.r * h3
        roots = solve_quadratic(rH3, -(c.c1H2 + s * rH3), c.c2H - x * rH3)
        irrational_hit = False
        for root in reversed(roots):  # descending b
            # w - b^2/2 > 0 checked in surd arithmetic
            w = root * s + x
            margin = w - root * root * Fraction(1, 2)
            if surd_cmp(margin, 0) <= 0:
                continue
            b_rat = surd_is_rational(root)
            if b_rat is None:
                irrational_hit = True
                continue
            return StabilityParam(b_rat, s * b_rat + x)
        if irrational_hit:
            raise IrrationalLocusError(
                "hypothesis point exists inside U but is irrational"
            )
        return None
    # rank zero: ch2^{bH}.H = ch2.H - b ch1.H^2
    if c.c1H2 == 0:
        raise ValueError(
            "rank-zero charge with ch1.H^2 = 0: hypothesis locus is degenerate"
        )
    b = c.c2H / c.c1H2
    p = StabilityParam(b, line.w_at(b))
    return p if p.in_U else None


def bg_inequality_check(c: Charge, p: StabilityParam, X: ThreefoldData) -> bool:
    """ch3^{bH} <= (w/3 - b^2/6) ch1^{bH}.H^2 at a point of the null locus.

    The point must lie in U and satisfy the null-locus condition for c
    exactly; otherwise HypothesisNotMetError is raised.
    """
    if not p.in_U:
        raise HypothesisNotMetError("parameter point is not inside U")
    b, w = p.b, p.w
    if _ch2_twisted(c, b, X.h3) != (w - b * b / 2) * c.r * X.h3:
        raise HypothesisNotMetError("null-locus condition fails at this point")
    ch1_bH = c.c1H2 - b * c.r * X.h3
    return _ch3_twisted(c, b, X.h3) <= (w / 3 - b * b / 6) * ch1_bH


def ch3_bound_sub(c2H_sub: RationalLike, X: ThreefoldData) -> Rational:
    """Upper bound (2/3) c (c - 1/(2H^3)) for ch3 of the rank-one destabilizing
    subsheaf with vanishing ch1 and ch2.H = c."""
    c = Fraction(c2H_sub)
    return Fraction(2, 3) * c * (c - Fraction(1, 2 * X.h3))


def ch3_bound_quot(c2H_quot_twisted: RationalLike, X: ThreefoldData) -> Rational:
    """Upper bound (2/3) c (c + 1/(2H^3)) for ch3 of the twisted destabilizing
    quotient with vanishing ch1 and ch2.H = c."""
    c = Fraction(c2H_quot_twisted)
    return Fraction(2, 3) * c * (c + Fraction(1, 2 * X.h3))


# ---------------------------------------------------------------------------
# first-wall scan

FILTER_NAMES = ("w_range", "b_range", "ch3_combined", "ch3_quot")


@dataclass(frozen=True)
class CandidateRecord:
    """One candidate value c for ch2.H of the destabilizing subsheaf.

    w0 is the height of the candidate wall on the vertical b = b0; (b2, b1)
    are its boundary crossings (None when the line misses U).  All four
    filter verdicts are recorded so the report reads as a proof transcript;
    the candidate is eliminated by the first named filter that is False.
    """

    c: Rational
    w0: Rational
    b1: Optional[Surd]
    b2: Optional[Surd]
    passed_filters: tuple[tuple[str, bool], ...]

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.passed_filters)

    @property
    def eliminated_by(self) -> Optional[str]:
        for name, ok in self.passed_filters:
            if not ok:
                return name
        return None


@dataclass(frozen=True)
class FirstWallReport:
    """Outcome of the destabilizer enumeration for one (beta.H, m, n).

    b0 is the shared slope of every wall; w_f the lowest wall height allowed
    by the ch3 positivity bound; w_js the height at which the section-pair
    wall crosses b = b0.  c_min_exact is the exact, m-dependent lower bound
    for candidates; when it is at least the enumerated lower end -2 beta.H,
    the scan provably covers all candidates (asymptotic_regime).
    """

    b0: Rational
    w_f: Rational
    w_js: Rational
    empty_moduli: bool
    candidates: tuple[CandidateRecord, ...]
    unique: bool
    c_min_exact: Rational
    asymptotic_regime: bool

    @property
    def surviving(self) -> list[Rational]:
        return [rec.c for rec in self.candidates if rec.passed]


def first_wall(
    cc: CurveCharge, X: ThreefoldData, granularity: int = 1
) -> FirstWallReport:
    """Enumerate and filter the candidate destabilizers of the rank-zero class.

    Candidates are the values c = ch2.H of a rank-one subsheaf with
    vanishing ch1, ranging over the integers in [-2 beta.H, -beta.H]
    (`granularity` = k widens the grid to (1/k)Z).  Filters, in order:

    * w_range:      w_f <= w0(c) <= w_js for w0(c) = b0^2 + c/H^3;
    * b_range:      the wall's boundary crossings satisfy b1 > -1/(2H^3)
                    and b2 < -n + 1/(2H^3), by exact surd comparison;
    * ch3_combined: the two ch3 bounds for subsheaf and quotient are
                    simultaneously satisfiable, including the n-weighted
                    cross term;
    * ch3_quot:     the quotient keeps ch3 <= n^3 H^3/6, i.e. the subsheaf
                    bound leaves room for ch3 >= -m.

    unique is True exactly when the surviving set is {-beta.H}.  For
    beta.H < 0 no destabilizer of this shape exists and the moduli space is
    empty: the report carries empty_moduli and no candidates.
    """
    if granularity < 1:
        raise ValueError("granularity must be a positive integer")
    n, h3 = cc.n, X.h3
    betaH, m = cc.betaH, cc.m
    half = Fraction(1, 2 * h3)
    b0 = -Fraction(n, 2) - betaH / (n * h3)
    w_f = Fraction(n * n, 4) - betaH / h3 - 3 * m / (n * h3) - (betaH / (n * h3)) ** 2
    w_js = Fraction(n * n, 4) + (betaH / (n * h3)) ** 2
    c_min_exact = h3 * (w_f - b0 * b0)

    if betaH < 0:
        return FirstWallReport(
            b0=b0, w_f=w_f, w_js=w_js, empty_moduli=True, candidates=(),
            unique=False, c_min_exact=c_min_exact,
            asymptotic_regime=c_min_exact >= -2 * betaH,
        )

    b1_floor = -half            # b1 must exceed this
    b2_ceiling = -n + half      # b2 must stay below this
    records = []
    lo = math.ceil(-2 * betaH * granularity)
    hi = math.floor(-betaH * granularity)
    for numerator in range(lo, hi + 1):
        c = Fraction(numerator, granularity)
        w0 = b0 * b0 + c / h3
        ok_w = w_f <= w0 <= w_js

        line = WallLine(b0, c / h3)
        crossings = parabola_intersections(line)
        if crossings is None:
            b2 = b1 = None
            ok_b = False
        else:
            b2, b1 = crossings
            ok_b = surd_cmp(b1, b1_floor) > 0 and surd_cmp(b2, b2_ceiling) < 0

        lhs = -m - ch3_bound_sub(c, X) - n * (betaH + c)
        ok_combined = lhs <= ch3_bound_quot(-(betaH + c), X)

        ok_quot = -m <= ch3_bound_sub(c, X)

        records.append(
            CandidateRecord(
                c=c, w0=w0, b1=b1, b2=b2,
                passed_filters=(
                    ("w_range", ok_w),
                    ("b_range", ok_b),
                    ("ch3_combined", ok_combined),
                    ("ch3_quot", ok_quot),
                ),
            )
        )

    surviving = [rec.c for rec in records if rec.passed]
    return FirstWallReport(
        b0=b0, w_f=w_f, w_js=w_js, empty_moduli=False,
        candidates=tuple(records),
        unique=surviving == [-betaH],
        c_min_exact=c_min_exact,
        asymptotic_regime=c_min_exact >= -2 * betaH,
    )


def min_n_unique(cc: CurveCharge, X: ThreefoldData, n_max: int) -> Optional[int]:
    """Smallest n <= n_max with a unique first wall from n through n_max.

    The ``n`` field of ``cc`` is ignored; the scan substitutes each
    n in 1..n_max.  Returns None when even n_max itself is not unique.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    threshold = None
    for n in range(1, n_max + 1):
        if first_wall(replace(cc, n=n), X).unique:
            if threshold is None:
                threshold = n
        else:
            threshold = None
    return threshold


# ---------------------------------------------------------------------------
# JSON schema for reports (all rationals as "p/q" strings)


def _surd_from_json(obj) -> Optional[Surd]:
    if obj is None:
        return None
    if isinstance(obj, str):
        return Surd.from_rational(Fraction(obj))
    return Surd(Fraction(obj["a"]), Fraction(obj["b"]), Fraction(obj["D"]))


def report_to_jsonable(report: FirstWallReport, digits: Optional[int] = None) -> dict:
    """JSON-ready dict for a report; rationals as exact "p/q" strings.

    With ``digits`` given, rationals and surds render as fixed-point decimals
    instead; that form is display-only and does not round-trip.
    """
    from .numeric import surd_decimal_str

    if digits is None:
        fmt = str
        def fmt_surd(s):
            if s is None:
                return None
            if s.D == 0:
                return str(s.a)
            return {"a": str(s.a), "b": str(s.b), "D": str(s.D)}
    else:
        def fmt(x):
            return decimal_str(x, digits)
        def fmt_surd(s):
            return None if s is None else surd_decimal_str(s, digits)

    return {
        "b0": fmt(report.b0),
        "w_f": fmt(report.w_f),
        "w_js": fmt(report.w_js),
        "empty_moduli": report.empty_moduli,
        "unique": report.unique,
        "c_min_exact": fmt(report.c_min_exact),
        "asymptotic_regime": report.asymptotic_regime,
        "surviving": [fmt(c) for c in report.surviving],
        "candidates": [
            {
                "c": fmt(rec.c),
                "w0": fmt(rec.w0),
                "b1": fmt_surd(rec.b1),
                "b2": fmt_surd(rec.b2),
                "passed_filters": {name: ok for name, ok in rec.passed_filters},
                "passed": rec.passed,
                "eliminated_by": rec.eliminated_by,
            }
            for rec in report.candidates
        ],
    }


def report_from_jsonable(data: dict) -> FirstWallReport:
    candidates = tuple(
        CandidateRecord(
            c=Fraction(rec["c"]),
            w0=Fraction(rec["w0"]),
            b1=_surd_from_json(rec["b1"]),
            b2=_surd_from_json(rec["b2"]),
            passed_filters=tuple(
                (name, rec["passed_filters"][name]) for name in FILTER_NAMES
            ),
        )
        for rec in data["candidates"]
    )
    return FirstWallReport(
        b0=Fraction(data["b0"]),
        w_f=Fraction(data["w_f"]),
        w_js=Fraction(data["w_js"]),
        empty_moduli=data["empty_moduli"],
        candidates=candidates,
        unique=data["unique"],
        c_min_exact=Fraction(data["c_min_exact"]),
        asymptotic_regime=data["asymptotic_regime"],
    )


# ---------------------------------------------------------------------------
# deterministic SVG rendering of the (b, w) plane
#
# SVG user units are (b, -w): the vertical axis is flipped once, so a wall of
# slope s renders as a segment of SVG slope -s.  All coordinates are written
# with 6 fixed decimal digits; geometry assertions belong on the exact model,
# never on rendered output.

SVG_DECIMALS = 6


@dataclass(frozen=True)
class Viewport:
    b_min: Rational
    b_max: Rational
    w_min: Rational
    w_max: Rational
    width: int = 640
    height: int = 480

    def __post_init__(self) -> None:
        for name in ("b_min", "b_max", "w_min", "w_max"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.b_max <= self.b_min or self.w_max <= self.w_min:
            raise EmptyViewportError("viewport must have positive extent")


@dataclass(frozen=True)
class ParabolaItem:
    """The boundary parabola w = b^2/2."""


@dataclass(frozen=True)
class LineItem:
    line: Union[WallLine, VerticalWall]
    label: str = ""


@dataclass(frozen=True)
class PointItem:
    b: Rational
    w: Rational
    label: str = ""


@dataclass(frozen=True)
class LabelItem:
    b: Rational
    w: Rational
    text: str


SceneItem = Union[ParabolaItem, LineItem, PointItem, LabelItem]


def _fmt(x: RationalLike) -> str:
    return decimal_str(Fraction(x), SVG_DECIMALS)


def _xml_escape(text: str) -> str:
    return (
        text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
    )


def _clip_line(
    line: WallLine, vp: Viewport
) -> Optional[tuple[Fraction, Fraction, Fraction, Fraction]]:
    lo, hi = vp.b_min, vp.b_max
    if line.slope == 0:
        if not (vp.w_min <= line.x <= vp.w_max):
            return None
    else:
        at_wmin = (vp.w_min - line.x) / line.slope
        at_wmax = (vp.w_max - line.x) / line.slope
        lo = max(lo, min(at_wmin, at_wmax))
        hi = min(hi, max(at_wmin, at_wmax))
        if lo > hi:
            return None
    return (lo, line.w_at(lo), hi, line.w_at(hi))


def render_bw_plane(scene: Sequence[SceneItem], viewport: Viewport) -> str:
    """Deterministic SVG 1.1 document for a list of plane elements.

    Wall lines are clipped to the viewport exactly before formatting; the
    parabola is a single quadratic Bezier (exact for a parabola); points
    become circles and labels become text elements.
    """
    vp = viewport
    b_ext = vp.b_max - vp.b_min
    w_ext = vp.w_max - vp.w_min
    stroke = b_ext / 400
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        (
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'width="{vp.width}" height="{vp.height}" '
            f'viewBox="{_fmt(vp.b_min)} {_fmt(-vp.w_max)} {_fmt(b_ext)} {_fmt(w_ext)}" '
            f'preserveAspectRatio="none">'
        ),
        "<desc>tilt-stability parameter plane; user units are (b, -w)</desc>",
        (
            f'<rect x="{_fmt(vp.b_min)}" y="{_fmt(-vp.w_max)}" '
            f'width="{_fmt(b_ext)}" height="{_fmt(w_ext)}" fill="white"/>'
        ),
    ]

    def emit_line(x1, w1, x2, w2, cls):
        out.append(
            f'<line class="{cls}" x1="{_fmt(x1)}" y1="{_fmt(-w1)}" '
            f'x2="{_fmt(x2)}" y2="{_fmt(-w2)}" stroke="black" '
            f'stroke-width="{_fmt(stroke)}"/>'
        )

    # axes, when visible
    if vp.w_min <= 0 <= vp.w_max:
        emit_line(vp.b_min, Fraction(0), vp.b_max, Fraction(0), "axis")
    if vp.b_min <= 0 <= vp.b_max:
        emit_line(Fraction(0), vp.w_min, Fraction(0), vp.w_max, "axis")

    for item in scene:
        if isinstance(item, ParabolaItem):
            p, q = vp.b_min, vp.b_max
            # quadratic Bezier through (p, p^2/2), (q, q^2/2) with control
            # ((p+q)/2, pq/2) traces w = b^2/2 exactly
            out.append(
                '<path class="parabola" d="M {} {} Q {} {} {} {}" '
                'fill="none" stroke="black" stroke-width="{}"/>'.format(
                    _fmt(p), _fmt(-(p * p / 2)),
                    _fmt((p + q) / 2), _fmt(-(p * q / 2)),
                    _fmt(q), _fmt(-(q * q / 2)),
                    _fmt(stroke),
                )
            )
        elif isinstance(item, LineItem):
            if isinstance(item.line, VerticalWall):
                b = item.line.b
                if vp.b_min <= b <= vp.b_max:
                    emit_line(b, vp.w_min, b, vp.w_max, "wall")
            else:
                seg = _clip_line(item.line, vp)
                if seg is not None:
                    emit_line(seg[0], seg[1], seg[2], seg[3], "wall")
            if item.label:
                if isinstance(item.line, WallLine):
                    lx = vp.b_min + b_ext / 20
                    ly = -(item.line.w_at(lx)) - w_ext / 50
                else:
                    lx = item.line.b
                    ly = -vp.w_max + w_ext / 20
                out.append(
                    f'<text class="label" x="{_fmt(lx)}" y="{_fmt(ly)}" '
                    f'font-size="{_fmt(b_ext / 25)}">{_xml_escape(item.label)}</text>'
                )
        elif isinstance(item, PointItem):
            out.append(
                f'<circle class="pt" cx="{_fmt(item.b)}" cy="{_fmt(-item.w)}" '
                f'r="{_fmt(b_ext / 120)}" fill="black"/>'
            )
            if item.label:
                out.append(
                    f'<text class="label" x="{_fmt(item.b + b_ext / 60)}" '
                    f'y="{_fmt(-item.w - w_ext / 60)}" '
                    f'font-size="{_fmt(b_ext / 25)}">{_xml_escape(item.label)}</text>'
                )
        elif isinstance(item, LabelItem):
            out.append(
                f'<text class="label" x="{_fmt(item.b)}" y="{_fmt(-item.w)}" '
                f'font-size="{_fmt(b_ext / 25)}">{_xml_escape(item.text)}</text>'
            )
        else:
            raise TypeError(f"unknown scene item {item!r}")

    out.append("</svg>")
    return "\n".join(out) + "\n"


def first_wall_scene(
    report: FirstWallReport, cc: CurveCharge, X: ThreefoldData
) -> tuple[list[SceneItem], Viewport]:
    """Scene with the boundary parabola, every candidate wall and the two
    marked projection points, framed to show the whole geometry."""
    n, h3 = cc.n, X.h3
    scene: list[SceneItem] = [ParabolaItem()]
    for rec in report.candidates:
        scene.append(LineItem(WallLine(report.b0, rec.c / h3)))
    scene.append(PointItem(Fraction(-n), Fraction(n * n, 2), label="pi(O(-n))"))
    scene.append(PointItem(Fraction(0), -cc.betaH / h3, label="pi(v)"))
    viewport = Viewport(
        b_min=Fraction(-n - 1),
        b_max=Fraction(1),
        w_min=min(-cc.betaH / h3, Fraction(0)) - 1,
        w_max=Fraction(n * n, 2) + 1,
    )
    return scene, viewport
