"""Exception types shared across the package.

Every operational failure mode gets its own class so callers (and the CLI,
which maps them to exit code 2) can tell configuration mistakes apart from
genuine mathematical verdicts.
"""


class CartanKitError(Exception):
    """Base class for all package-specific errors."""


class UnknownModelError(CartanKitError, KeyError):
    """Requested builtin model name does not exist."""


class DimensionError(CartanKitError, ValueError):
    """Arguments have incompatible shapes for the model at hand."""


class DomainError(CartanKitError, ValueError):
    """A base point (or a flow through it) left the model's domain."""


class RepresentationError(CartanKitError, ValueError):
    """A matrix that should lie in the structure algebra's span does not."""


class StepSizeError(CartanKitError, ArithmeticError):
    """Finite-difference step too small: Richardson levels disagree."""


class FlowError(CartanKitError, RuntimeError):
    """The ODE integrator failed to advance (step underflow etc.)."""


class SingularityError(CartanKitError, ValueError):
    """Splitting construction hit a rank-drop point of the anchor."""


class CentralityError(CartanKitError, ValueError):
    """Splitting curvature is not central along the patch, so periods
    against a flat frame are meaningless."""


class MetricTypeError(CartanKitError, TypeError):
    """Operation requires a metric-type model (orthogonal structure group
    and vanishing torsion)."""


class ProfileError(CartanKitError, ValueError):
    """Leaf profile data is inconsistent (endpoint kinds, interval order)."""
