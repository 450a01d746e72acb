"""Exception hierarchy shared by every module."""


class PseudospectraError(Exception):
    """Base class for all library errors."""


class InputDomainError(PseudospectraError, ValueError):
    """Malformed matrix input: wrong shape or non-finite entries."""


class ResourceLimitError(PseudospectraError):
    """A grid computation would exceed the configured work budget."""


class LevelNotPresentError(PseudospectraError, ValueError):
    """The requested level lies outside the range of sampled values."""


class SeedOutsideLevelSetError(PseudospectraError, ValueError):
    pass


class MergedComponentsError(PseudospectraError, ValueError):
    """Two eigenvalue components have merged, so per-eigenvalue radii are undefined."""


class SingularMatrixError(PseudospectraError, ValueError):
    pass


class OrthogonalPairError(PseudospectraError, ValueError):
    """Left and right eigenvectors are (numerically) orthogonal."""


class RepeatedEigenvalueError(PseudospectraError, ValueError):
    pass


class UnsupportedStructureError(PseudospectraError, TypeError):
    """No analytic Jordan structure is available for this input."""


class DecoupleFirstError(PseudospectraError, ValueError):
    """A bidiagonal matrix with a zero superdiagonal entry must be decoupled first."""
