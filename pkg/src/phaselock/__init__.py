"""Numerical laboratory for the periodically driven overdamped junction equation.

The package connects three faces of one object:

- the circle flow  d(phi)/d(tau) = (-sin phi + b*omega + a*cos tau)/omega
  and its rotation number / Arnold tongues (`rotation`),
- the associated 2x2 linear system on the zeta-circle with two irregular
  singular points, its loop monodromy and trace invariants (`monodromy`),
- Bessel-built Painleve-3 transcendents, the isomonodromic Lax family they
  generate, and the infinite chains of adjacency points read off from the
  zeros of cylinder combinations (`painleve`, `lax`, `adjacency`).

`odeint` and `specfun` supply the integration and special-function layer;
`cli` exposes every experiment as a CSV/JSON artifact command.
"""

__version__ = "0.1.0"

from .adjacency import (
    AdjacencySeed,
    BoundaryPoint,
    ChainPoint,
    boundary_chain,
    chain,
    find_seed,
    omega_from_b2b3,
    seed_combo,
    seed_y0,
    symmetric_gauge,
    verify_point,
)
from .lax import (
    FamilyCoeffs,
    IsoFamily,
    PoleSystem,
    family_at,
    g3_over_g1,
    isomonodromy_drift,
    loop_monodromy,
    monodromy_matrix_drift,
    specialize_at_pole,
    t_equation,
    z_equation,
    zero_curvature_report,
    zero_curvature_residual,
)
from .monodromy import (
    DcheParams,
    MonodromyResult,
    dche_defaults,
    dche_residual,
    default_radius,
    eig_discriminant,
    monodromy_loop,
    system_coeff,
    triviality_residual,
)
from .odeint import Tolerances
from .painleve import (
    BesselP3Solution,
    P3Params,
    bessel_w,
    integrate_p3,
    params_from_b,
    pole_residue,
    p3_residual,
    p3_residual_report,
    satisfies_parameter_condition,
    special_solution_class,
    t_form_residual_report,
    y_of_t,
)
from .rotation import (
    BoundaryCurve,
    JosephsonParams,
    RotationEstimate,
    TongueGrid,
    phase_rhs,
    poincare_lift,
    rho_axis_analytic,
    rotation_number,
    scan_grid,
    trace_boundary,
)
from .specfun import BesselCombo, ZeroList, bessel_pair, find_zeros, u_eval

__all__ = [
    "__version__",
    "AdjacencySeed",
    "BesselCombo",
    "BesselP3Solution",
    "BoundaryCurve",
    "BoundaryPoint",
    "ChainPoint",
    "DcheParams",
    "FamilyCoeffs",
    "IsoFamily",
    "JosephsonParams",
    "MonodromyResult",
    "P3Params",
    "PoleSystem",
    "RotationEstimate",
    "Tolerances",
    "TongueGrid",
    "ZeroList",
    "bessel_pair",
    "bessel_w",
    "boundary_chain",
    "chain",
    "dche_defaults",
    "dche_residual",
    "default_radius",
    "eig_discriminant",
    "family_at",
    "find_seed",
    "find_zeros",
    "g3_over_g1",
    "integrate_p3",
    "isomonodromy_drift",
    "loop_monodromy",
    "monodromy_loop",
    "monodromy_matrix_drift",
    "omega_from_b2b3",
    "params_from_b",
    "phase_rhs",
    "poincare_lift",
    "pole_residue",
    "p3_residual",
    "p3_residual_report",
    "rho_axis_analytic",
    "rotation_number",
    "satisfies_parameter_condition",
    "scan_grid",
    "seed_combo",
    "seed_y0",
    "special_solution_class",
    "specialize_at_pole",
    "symmetric_gauge",
    "system_coeff",
    "t_equation",
    "t_form_residual_report",
    "trace_boundary",
    "triviality_residual",
    "u_eval",
    "verify_point",
    "y_of_t",
    "z_equation",
    "zero_curvature_report",
    "zero_curvature_residual",
]
