"""shiftcurv: shifted curvature functions, Minkowski-type integral formulas
and rigidity probes for hypersurfaces of hyperbolic space.

The hyperbolic ambient is modeled as the warped product dr^2 + sinh^2(r) g_S
with potential V = cosh(r); surfaces are star-shaped radial graphs, either
axisymmetric (any dimension) or fully general over S^2.
"""

from .symfun import (
    ConeReport,
    SymTable,
    cone_membership,
    elementary_symmetric,
    elementary_symmetric_list,
    elementary_symmetric_of_matrix,
    gauss_bonnet_bruteforce,
    gauss_bonnet_expand,
    generalized_delta,
    in_closed_cone,
    newton_maclaurin_gap,
    newton_tensor,
    shift_transform,
    sym_table,
)
from .surfaces import (
    AxisGrid,
    GeometryField,
    Geometry2Field,
    RadialProfile,
    SphereSpec,
    SurfaceGrid2,
    axis_grid,
    elliptic_point,
    geometry_from_profile,
    hessV_residual,
    mean_convexity_margin,
    parse_surface,
    perturbed_profile,
    sphere_profile,
    surface_grid2,
    table_profile,
    unit_sphere_area,
)
from .quadrature import (
    ConvergenceEstimate,
    convergence_order,
    enclosed_weighted_volume,
    pairwise_sum,
    surface_area,
    surface_integral,
)
from .identities import (
    ChiFamily,
    CurvatureExpr,
    IdentityReport,
    ResidualReport,
    Term,
    centered_metric,
    chi_family,
    constancy_residual,
    generalized_minkowski_check,
    heintze_karcher_check,
    minkowski_check,
    newton_maclaurin_field,
    proof_chain_audit,
    reports_to_csv,
    reports_to_json,
    support_gradient_check,
    theorem_residual,
    umbilicity,
    volume_identity_check,
    weighted_minkowski_check,
)
from .rigidity import (
    SolveConfig,
    SolveResult,
    SphereFit,
    classify_solution,
    continuation_sweep,
    perturbation_ensemble,
    solve_constant_equation,
)

__version__ = "0.1.0"
