"""Bell local polytopes, their facets, and quantum violations by qubit states."""

from .facets import (
    BellInequality,
    Catalog,
    CorrelatorForm,
    FacetClass,
    SymmetryOp,
    build_catalog,
    classify,
    evaluate,
    from_correlator_form,
    generalized_facet,
    is_positivity,
    load_catalog,
    named_inequality,
    symmetry_group,
    to_correlator_form,
)
from .optimize import (
    NoiseFamily,
    OptimizationResult,
    best_of,
    gghz_analytic,
    multistart_max,
    noise_threshold,
    qc_ratio,
    seesaw,
)
from .polytope import HPolytope, Halfspace, VPolytope, affine_dim, canonicalize, dd_convert, verify_facet
from .quantum import (
    DensityMatrix,
    Observable,
    PureState,
    SettingsAssignment,
    avg_bipartite_entropy,
    behavior_of,
    bell_expectation,
    tangle_gghz,
)
from .scenario import (
    BellScenario,
    Behavior,
    CapacityError,
    check_no_signaling,
    dimension,
    enumerate_vertices,
    project_to_parametrization,
)
from .states import make_state, sample_canonical_state

__version__ = "0.1.0"

__all__ = [
    "BellInequality",
    "BellScenario",
    "Behavior",
    "CapacityError",
    "Catalog",
    "CorrelatorForm",
    "DensityMatrix",
    "FacetClass",
    "HPolytope",
    "Halfspace",
    "NoiseFamily",
    "Observable",
    "OptimizationResult",
    "PureState",
    "SettingsAssignment",
    "SymmetryOp",
    "VPolytope",
    "affine_dim",
    "avg_bipartite_entropy",
    "behavior_of",
    "bell_expectation",
    "best_of",
    "build_catalog",
    "canonicalize",
    "check_no_signaling",
    "classify",
    "dd_convert",
    "dimension",
    "enumerate_vertices",
    "evaluate",
    "from_correlator_form",
    "generalized_facet",
    "gghz_analytic",
    "is_positivity",
    "load_catalog",
    "make_state",
    "multistart_max",
    "named_inequality",
    "noise_threshold",
    "project_to_parametrization",
    "qc_ratio",
    "sample_canonical_state",
    "seesaw",
    "symmetry_group",
    "tangle_gghz",
    "to_correlator_form",
    "verify_facet",
]
