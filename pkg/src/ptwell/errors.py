"""Exception taxonomy for the ptwell solvers."""


class PtwellError(Exception):
    """Base class for all ptwell errors."""


class InvalidModelError(PtwellError, ValueError):
    """Model parameters or configuration outside the admissible domain."""


class SingularPointError(PtwellError, ValueError):
    """Evaluation requested at the removable singularity kappa = 0."""


class BracketingError(PtwellError):
    """A root bracket is missing a sign change or is degenerate."""


class ConvergenceError(PtwellError):
    """An iterative refinement exhausted its budget without converging."""


class LevelJumpError(ConvergenceError):
    """Shooting converged, but to an eigenvalue far from the seed level."""


class ClusterError(PtwellError):
    """A suspicious root cluster could not be classified consistently."""


class ContourError(PtwellError):
    """Argument-principle contour failed (zero on contour or sample budget)."""


class NullspaceError(PtwellError):
    """Matching matrix has no one-dimensional nullspace at the given kappa."""

    def __init__(self, message, rank=None):
        super().__init__(message)
        self.rank = rank


class ConventionError(PtwellError):
    """Wavefunction violates the symmetric/antisymmetric phase convention."""


class InsufficientDataError(PtwellError):
    """Not enough extrema or levels for the requested statistic."""
