"""cartankit: G-structure algebroids in canonical form, numerically.

A Cartan realization problem with structure group G is stored as the data
(c, R, F, psi) of its canonical-form algebroid A = X x (R^n + g) over an
open base X.  The package verifies the structure identities that make A a
Lie algebroid, probes its leaf foliation, integrates monodromy and
G-monodromy obstructions over leaves, decides metric completeness, and
carries the full extremal-Kahler surface classification as its flagship
worked example.
"""

from .algebra import (
    AlgebroidElement,
    BaseManifold,
    CartanModel,
    StructureGroup,
    directional_derivative,
)
from .errors import (
    CartanKitError,
    CentralityError,
    DimensionError,
    DomainError,
    FlowError,
    MetricTypeError,
    ProfileError,
    RepresentationError,
    SingularityError,
    StepSizeError,
    UnknownModelError,
)
from .foliation import LeafProbe, check_invariant, flow, isotropy_basis, probe
from .metric import (
    CompletenessVerdict,
    LeafEnd,
    LeafProfile,
    complete_solution_report,
    completeness_verdict,
    leaf_metric,
)
from .models import BUILTIN_MODELS, builtin_model, scale_curvature
from .monodromy import (
    DiskPatch,
    MonodromyProblem,
    MonodromyReport,
    Splitting,
    default_fiber_metric,
    g_monodromy,
    period,
    splitting_curvature,
)
from .quadrature import QuadratureResult, adaptive_quad2d
from .rationality import (
    DENOMINATOR_BOUND,
    QUALITY_MARGIN,
    RESIDUAL_TOL,
    RationalityVerdict,
    detect_rational,
)
from .verify import (
    GeometricType,
    check_anchor_morphism,
    check_bianchi,
    check_equivariance,
    check_jacobi,
    classify_type,
    jacobi_conditions,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # algebra
    "AlgebroidElement", "BaseManifold", "CartanModel", "StructureGroup",
    "directional_derivative",
    # errors
    "CartanKitError", "CentralityError", "DimensionError", "DomainError",
    "FlowError", "MetricTypeError", "ProfileError", "RepresentationError",
    "SingularityError", "StepSizeError", "UnknownModelError",
    # foliation
    "LeafProbe", "check_invariant", "flow", "isotropy_basis", "probe",
    # metric
    "CompletenessVerdict", "LeafEnd", "LeafProfile",
    "complete_solution_report", "completeness_verdict", "leaf_metric",
    # models
    "BUILTIN_MODELS", "builtin_model", "scale_curvature",
    # monodromy
    "DiskPatch", "MonodromyProblem", "MonodromyReport", "Splitting",
    "default_fiber_metric", "g_monodromy", "period", "splitting_curvature",
    # quadrature
    "QuadratureResult", "adaptive_quad2d",
    # rationality
    "DENOMINATOR_BOUND", "QUALITY_MARGIN", "RESIDUAL_TOL",
    "RationalityVerdict", "detect_rational",
    # verify
    "GeometricType", "check_anchor_morphism", "check_bianchi",
    "check_equivariance", "check_jacobi",
    "classify_type", "jacobi_conditions",
]
