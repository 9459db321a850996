"""Command-line front end: config ingestion, dispatch, JSON and SVG emission.

Exit codes: 0 success, 2 usage errors, 3 precondition violations
(e.g. parity failures), 4 inconsistent configuration.  All JSON output is
UTF-8 with sorted keys; identical config and flags produce byte-identical
output.  Every report carries a provenance block with the config hash and
the package version.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

from . import __version__
from .charges import Charge, CurveCharge, ThreefoldData
from .counting import (
    chi_vn,
    dt_from_mnop,
    e_n,
    mhat,
    tables_from_records,
    toda_sum,
    twist_curve_charge,
)
from .errors import PreconditionError
from .modular import (
    DiscriminantGroup,
    assemble_nl_series,
    goettsche_series,
    nl_table_from_records,
    s_matrix,
    series_to_jsonable,
    t_check,
    t_phase,
)
from .numeric import decimal_str
from .stability import StabilityParam
from .walls import (
    VerticalWall,
    bg_inequality_check,
    first_wall,
    first_wall_scene,
    li_region_contains,
    min_n_unique,
    render_bw_plane,
    report_to_jsonable,
    wall_between,
)


class ConfigError(ValueError):
    """Malformed or inconsistent configuration (exit code 4)."""


# ---------------------------------------------------------------------------
# configuration

_THREEFOLD_KEYS = {"h3", "c2H", "b2", "tors", "pic_rank1"}
_CHARGE_KEYS = {"betaH", "m", "n", "Q"}
_OPTION_KEYS = {"order", "n_max", "precision", "out"}


@dataclass(frozen=True)
class RunConfig:
    threefold: ThreefoldData
    charge: Optional[CurveCharge]
    options: dict
    sha256: str


def _parse_exact(value, *, key: str) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise ConfigError(f"{key} must be an integer or a 'p/q' string")
    try:
        return Fraction(value)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise ConfigError(f"cannot parse {key} = {value!r} as a rational") from exc


def load_config(path: str) -> RunConfig:
    try:
        with open(path, "rb") as handle:
            raw = handle.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        doc = tomllib.loads(raw.decode("utf-8"))
    except (tomllib.TOMLDecodeError, UnicodeDecodeError) as exc:
        raise ConfigError(f"cannot parse config {path}: {exc}") from exc

    unknown = set(doc) - {"threefold", "charge", "options"}
    if unknown:
        raise ConfigError(f"unknown config sections: {sorted(unknown)}")
    if "threefold" not in doc:
        raise ConfigError("config must have a [threefold] section")

    tf = doc["threefold"]
    unknown = set(tf) - _THREEFOLD_KEYS
    if unknown:
        raise ConfigError(f"unknown [threefold] keys: {sorted(unknown)}")
    for key in ("h3", "c2H"):
        if key not in tf:
            raise ConfigError(f"[threefold] needs key {key}")
    try:
        threefold = ThreefoldData(
            h3=int(tf["h3"]),
            c2H=int(tf["c2H"]),
            b2=int(tf.get("b2", 1)),
            n_tors=int(tf.get("tors", 1)),
            pic_rank1=bool(tf.get("pic_rank1", True)),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad [threefold] data: {exc}") from exc

    charge = None
    if "charge" in doc:
        ch = doc["charge"]
        unknown = set(ch) - _CHARGE_KEYS
        if unknown:
            raise ConfigError(f"unknown [charge] keys: {sorted(unknown)}")
        for key in ("betaH", "m", "n"):
            if key not in ch:
                raise ConfigError(f"[charge] needs key {key}")
        q_raw = ch.get("Q")
        if q_raw in (None, "auto"):
            Q = None
        else:
            Q = _parse_exact(q_raw, key="Q")
        try:
            charge = CurveCharge(
                betaH=_parse_exact(ch["betaH"], key="betaH"),
                m=_parse_exact(ch["m"], key="m"),
                n=int(ch["n"]),
                Q=Q,
            )
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad [charge] data: {exc}") from exc

    options = dict(doc.get("options", {}))
    unknown = set(options) - _OPTION_KEYS
    if unknown:
        raise ConfigError(f"unknown [options] keys: {sorted(unknown)}")

    return RunConfig(
        threefold=threefold,
        charge=charge,
        options=options,
        sha256=hashlib.sha256(raw).hexdigest(),
    )


def _require_charge(config: RunConfig) -> CurveCharge:
    if config.charge is None:
        raise ConfigError("this command needs a [charge] section in the config")
    return config.charge


# ---------------------------------------------------------------------------
# argument helpers


def _charge_arg(text: str) -> Charge:
    parts = [piece.strip() for piece in text.split(",")]
    if len(parts) < 4 or len(parts) > 6:
        raise argparse.ArgumentTypeError(
            "charge must be 'r,c1H2,c2H,c3' with optional ',c1sqH[,c1c2]'"
        )
    try:
        values = [Fraction(piece) for piece in parts]
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad charge component: {exc}") from exc
    extra = {}
    if len(values) >= 5:
        extra["c1sqH"] = values[4]
    if len(values) == 6:
        extra["c1c2"] = values[5]
    return Charge(values[0], values[1], values[2], values[3], **extra)


def _fraction_arg(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad rational {text!r}") from exc


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc


# ---------------------------------------------------------------------------
# emission


def _digits(args, config: RunConfig) -> Optional[int]:
    if args.decimal is None:
        return None
    if args.decimal >= 0:
        return args.decimal
    return int(config.options.get("precision", 6))


def _fmt_factory(digits: Optional[int]):
    if digits is None:
        return str
    return lambda x: decimal_str(x, digits)


def _emit(doc: dict, config: RunConfig, args) -> None:
    doc = dict(doc)
    doc["provenance"] = {
        "config_sha256": config.sha256,
        "version": __version__,
    }
    text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    out = getattr(args, "out", None) or config.options.get("out")
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _order(args, config: RunConfig) -> int:
    if getattr(args, "order", None) is not None:
        return args.order
    return int(config.options.get("order", 10))


# ---------------------------------------------------------------------------
# subcommands


def _cmd_first_wall(args, config: RunConfig) -> int:
    report = first_wall(_require_charge(config), config.threefold, args.granularity)
    _emit(report_to_jsonable(report, _digits(args, config)), config, args)
    return 0


def _cmd_min_n(args, config: RunConfig) -> int:
    n_max = args.n_max if args.n_max is not None else int(config.options.get("n_max", 200))
    result = min_n_unique(_require_charge(config), config.threefold, n_max)
    _emit({"min_n": result, "n_max": n_max}, config, args)
    return 0


def _cmd_wall(args, config: RunConfig) -> int:
    wall = wall_between(args.u, args.v, config.threefold)
    fmt = _fmt_factory(_digits(args, config))
    if isinstance(wall, VerticalWall):
        doc = {"type": "vertical", "b": fmt(wall.b)}
    else:
        doc = {"type": "line", "slope": fmt(wall.slope), "x": fmt(wall.x)}
    _emit(doc, config, args)
    return 0


def _cmd_bg_check(args, config: RunConfig) -> int:
    point = StabilityParam(args.b, args.w)
    ok = bg_inequality_check(args.charge, point, config.threefold)
    _emit({"satisfied": ok}, config, args)
    return 0


def _cmd_li_region(args, config: RunConfig) -> int:
    _emit({"inside": li_region_contains(StabilityParam(args.b, args.w))}, config, args)
    return 0


def _cmd_chi(args, config: RunConfig) -> int:
    fmt = _fmt_factory(_digits(args, config))
    _emit({"chi": fmt(chi_vn(_require_charge(config), config.threefold))}, config, args)
    return 0


def _cmd_en(args, config: RunConfig) -> int:
    _emit({"e_n": e_n(_require_charge(config), config.threefold)}, config, args)
    return 0


def _cmd_dt(args, config: RunConfig) -> int:
    value = dt_from_mnop(args.i_value, _require_charge(config), config.threefold)
    _emit({"omega": value}, config, args)
    return 0


def _cmd_toda(args, config: RunConfig) -> int:
    cc = _require_charge(config)
    X = config.threefold
    I_table, P_table = tables_from_records(_load_json(args.tables))
    total = toda_sum(cc, X, I_table, P_table)
    # side-by-side with the product formula, whose table index differs in
    # the sign of the charge; both numbers are reported, never reconciled
    product = dt_from_mnop(I_table.get(int(cc.betaH), int(cc.m)), cc, X)
    _emit({"toda_sum": total, "theorem2_product": product}, config, args)
    return 0


def _cmd_mhat(args, config: RunConfig) -> int:
    fmt = _fmt_factory(_digits(args, config))
    _emit({"mhat": fmt(mhat(_require_charge(config), config.threefold))}, config, args)
    return 0


def _cmd_twist(args, config: RunConfig) -> int:
    cc = twist_curve_charge(_require_charge(config), args.a, config.threefold)
    fmt = _fmt_factory(_digits(args, config))
    doc = {"betaH": fmt(cc.betaH), "m": fmt(cc.m), "n": cc.n, "Q": fmt(cc.Q)}
    _emit(doc, config, args)
    return 0


def _cmd_goettsche(args, config: RunConfig) -> int:
    series = goettsche_series(
        _require_charge(config), config.threefold, args.d, _order(args, config)
    )
    _emit(series_to_jsonable(series, _digits(args, config)), config, args)
    return 0


def _cmd_nl_series(args, config: RunConfig) -> int:
    cc = _require_charge(config)
    X = config.threefold
    table = nl_table_from_records(_load_json(args.nl))
    components = assemble_nl_series(table, cc, X, _order(args, config))
    digits = _digits(args, config)
    fmt = _fmt_factory(digits)
    doc = {
        "group_order": cc.n * X.h3,
        "weight": fmt(Fraction(-X.b2, 2) - 1),
        "components": [series_to_jsonable(s, digits) for s in components],
    }
    _emit(doc, config, args)
    return 0


def _cmd_t_check(args, config: RunConfig) -> int:
    cc = _require_charge(config)
    X = config.threefold
    table = nl_table_from_records(_load_json(args.nl))
    components = assemble_nl_series(table, cc, X, _order(args, config))
    phase = t_phase(cc, X)
    verdicts = [t_check(s, phase) for s in components]
    fmt = _fmt_factory(_digits(args, config))
    doc = {
        "phase": fmt(phase),
        "components_pass": verdicts,
        "all_pass": all(verdicts),
    }
    _emit(doc, config, args)
    return 0


def _cmd_s_matrix(args, config: RunConfig) -> int:
    if args.n_group is not None:
        N = args.n_group
    else:
        N = _require_charge(config).n * config.threefold.h3
    matrix = s_matrix(DiscriminantGroup(N))
    doc = {
        "N": N,
        "matrix": [[[z.real, z.imag] for z in row] for row in matrix],
    }
    _emit(doc, config, args)
    return 0


def _cmd_plot(args, config: RunConfig) -> int:
    cc = _require_charge(config)
    report = first_wall(cc, config.threefold)
    scene, viewport = first_wall_scene(report, cc, config.threefold)
    svg = render_bw_plane(scene, viewport)
    out = args.out or config.options.get("out")
    if not out:
        raise ConfigError("plot needs --out (or an 'out' option in the config)")
    with open(out, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(svg)
    return 0


# ---------------------------------------------------------------------------
# parser and dispatch


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tiltwall",
        description=(
            "Exact wall-and-chamber geometry for weak stability conditions, "
            "with counting and modular-series bookkeeping."
        ),
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        p.add_argument("--config", required=True, help="TOML config file")
        p.add_argument(
            "--decimal",
            nargs="?",
            type=int,
            const=-1,
            default=None,
            metavar="P",
            help="render rationals as decimals with P digits (default: config precision)",
        )
        p.add_argument("--out", help="write output to this file instead of stdout")
        return p

    p = add("first-wall", _cmd_first_wall, "destabilizer enumeration report")
    p.add_argument("--granularity", type=int, default=1,
                   help="widen the candidate grid to (1/K)Z")

    p = add("min-n", _cmd_min_n, "smallest n from which the first wall is unique")
    p.add_argument("--n-max", type=int, default=None)

    p = add("wall", _cmd_wall, "wall between two charges")
    p.add_argument("--u", type=_charge_arg, required=True, metavar="r,c1H2,c2H,c3")
    p.add_argument("--v", type=_charge_arg, required=True, metavar="r,c1H2,c2H,c3")

    p = add("bg-check", _cmd_bg_check, "ch3 positivity bound at a null-locus point")
    p.add_argument("--charge", type=_charge_arg, required=True, metavar="r,c1H2,c2H,c3")
    p.add_argument("--b", type=_fraction_arg, required=True)
    p.add_argument("--w", type=_fraction_arg, required=True)

    p = add("li-region", _cmd_li_region, "membership in the quintic positivity region")
    p.add_argument("--b", type=_fraction_arg, required=True)
    p.add_argument("--w", type=_fraction_arg, required=True)

    add("chi", _cmd_chi, "Euler characteristic of the twisted rank-one class")
    add("en", _cmd_en, "signed fibre multiplicity")

    p = add("dt", _cmd_dt, "rank-zero count from an ideal-sheaf count")
    p.add_argument("--i-value", type=int, required=True)

    p = add("toda", _cmd_toda, "cone-restricted double sum, with product comparison")
    p.add_argument("--tables", required=True, help="JSON invariant tables")

    add("mhat", _cmd_mhat, "twist-invariant normalized charge")

    p = add("twist", _cmd_twist, "twist the curve charge by exp(aH)")
    p.add_argument("--a", type=int, required=True)

    p = add("goettsche", _cmd_goettsche, "points-on-divisor generating series")
    p.add_argument("--d", type=_fraction_arg, default=Fraction(0))
    p.add_argument("--order", type=int, default=None)

    p = add("nl-series", _cmd_nl_series, "assembled generating vector")
    p.add_argument("--nl", required=True, help="JSON counting table")
    p.add_argument("--order", type=int, default=None)

    p = add("t-check", _cmd_t_check, "translation-phase support check")
    p.add_argument("--nl", required=True, help="JSON counting table")
    p.add_argument("--order", type=int, default=None)

    p = add("s-matrix", _cmd_s_matrix, "discrete Fourier matrix of the group")
    p.add_argument("--n-group", type=int, default=None)

    p = add("plot", _cmd_plot, "SVG diagram of the first-wall geometry")

    return parser


def cmd_dispatch(argv: Sequence[str]) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        config = load_config(args.config)
        return args.func(args, config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def main() -> None:
    sys.exit(cmd_dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
