"""Exception types shared across the package."""


class ContractError(ValueError):
    """An operation was called outside its documented preconditions."""


class DomainEvalError(ValueError):
    """A field primitive is not smooth / not defined at the requested point."""


class DegeneratePatchError(ValueError):
    """The parametrization fails to be an immersion at the queried point."""


class PlanarPointError(ValueError):
    """Second fundamental form vanishes: every direction is asymptotic."""


class ParabolicPointError(ValueError):
    """Gaussian curvature vanishes where a negatively curved point is required."""


class NotApplicableError(ValueError):
    """A formula does not apply in this configuration; the message says what to use."""


class SingularMapError(ValueError):
    """A jet map with singular linear part cannot be inverted."""


class HigherDegeneracyError(ValueError):
    """Curve data degenerates beyond what the invariant is defined for."""


class TracingError(RuntimeError):
    """Numerical continuation failed; carries partial results when possible."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial
