"""Exact wall-and-chamber geometry for weak stability conditions on polarized
threefolds, with sheaf-counting bookkeeping and modular generating series.

Everything is computed in arbitrary-precision rational arithmetic (plus exact
quadratic surds where parabola intersections demand them); floating point
appears only in the discrete Fourier matrix and in rendering.
"""

__version__ = "0.1.0"

from .charges import (
    Charge,
    CurveCharge,
    ThreefoldData,
    chi_euler,
    class_v,
    class_vn,
    complement,
    delta_H,
    hodge_index_check,
    line_bundle_charge,
    resolve_Q,
    strong_bogomolov_check,
    structure_sheaf_charge,
    twist_by_O,
    twist_by_bH,
)
from .counting import (
    InvariantTable,
    chi_vn,
    dt_from_mnop,
    e_n,
    mhat,
    mock_depth,
    toda_sum,
    twist_curve_charge,
)
from .errors import PreconditionError
from .modular import (
    DiscriminantGroup,
    QSeries,
    assemble_nl_series,
    charge_from_NL,
    discriminant,
    discriminant_group,
    eta_inverse_power,
    goettsche_series,
    pole_order,
    s_matrix,
    t_check,
    t_phase,
)
from .numeric import (
    Rational,
    Surd,
    decimal_str,
    rational_sqrt,
    solve_quadratic,
    surd_cmp,
    surd_is_rational,
)
from .stability import (
    INFINITE_SLOPE,
    N_bw,
    StabilityParam,
    attractor_slope,
    heart_positive,
    mu_H,
    nu_H,
    nu_bw,
    pi_projection,
)
from .walls import (
    CandidateRecord,
    FirstWallReport,
    VerticalWall,
    WallLine,
    Viewport,
    bg_hypothesis_locus,
    bg_inequality_check,
    ch3_bound_quot,
    ch3_bound_sub,
    first_wall,
    li_region_contains,
    min_n_unique,
    parabola_intersections,
    render_bw_plane,
    wall_between,
)
