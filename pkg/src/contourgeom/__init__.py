"""Curvature invariants of surfaces, their apparent contours, and the
cusp singularities of orthogonal projections."""

__version__ = "0.1.0"

from .jets import Jet1, Jet2, JetMap2, backend_name
from .surface import (
    AdaptedFrame,
    CurvatureData,
    SurfacePatch,
    TangentDirection,
    asymptotic_directions,
    curvature_data,
    fundamental_forms,
    mannheim_radius,
    monge_normal_form,
    normal_curvature,
)
from .projection import (
    ProjectionSetup,
    SingularityClass,
    ViewMap,
    build_projection,
    classify_singularity,
    normal_form_model,
    view_map,
)
from .contour import (
    CuspData,
    PlaneCurvePoint,
    SingularSetTrace,
    contour_curvature,
    contour_line,
    cuspidal_curvature,
    find_contour_cusps,
    trace_singular_set,
)
from .asymptotic import (
    AsymptoticCurve,
    AsymptoticInvariants,
    TangentialCurveGerm,
    asymptotic_invariants_closed_form,
    curve_curvature_torsion,
    normal_section,
    trace_asymptotic_curve,
    trace_tangential_curve,
    vertical_torsion,
)
from .identities import (
    EquivalenceVerdict,
    IdentityEntry,
    check_asymptotic_identities,
    check_cusp_formulas,
    check_mdk,
    check_theorem_equivalences,
    full_report,
    reconstruct_invariants,
)
from .catalog import catalog_surface, monge_patch, patch_from_spec, random_cubic_monge

__all__ = [name for name in dir() if not name.startswith("_")]
