"""Exception types shared across the package."""


class GzError(Exception):
    """Base class for all gztoda errors."""


class ConfigurationError(GzError):
    """Mismatched or invalid construction parameters (N, hbar, indices)."""


class SingularityError(GzError):
    """Evaluation requested on the singular set (coinciding same-level entries)."""


class PoleError(GzError):
    """A gamma-function factor was evaluated at a pole."""


class DomainError(GzError):
    """Argument outside the domain of validity of an operation."""


class DegenerateParameterError(GzError):
    """Special-function parameters hit a degenerate configuration."""


class DegenerateInputError(GzError):
    """Orbit coordinates on the excluded set (coinciding roots or vanishing Q)."""


class ContourError(GzError):
    """Integration contour violates the required ordering or encloses no poles."""


class CostGuardError(GzError):
    """Requested computation exceeds the configured combinatorial budget."""


class UsageError(GzError):
    """Invalid command-line configuration."""


class AccuracyWarning(UserWarning):
    """Estimated quadrature error exceeds the requested tolerance."""
