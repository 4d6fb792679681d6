"""ptwell: bound states of a hard-wall box with a conjugate pair of point wells.

A solver library and CLI for the spectrum of the one-dimensional
Schroedinger problem on (-1, 1) with Dirichlet walls and two point
interactions of complex-conjugate strengths -omega^2 -+ i eta placed at
x = -+a.  Provides the secular function and its zeros (real spectrum),
argument-principle zero counting in the complex plane (symmetry-breaking
census), eigenfunction reconstruction, an independent shooting-method
oracle, and envelope/gap analyses.
"""

from .errors import (
    BracketingError,
    ClusterError,
    ContourError,
    ConvergenceError,
    ConventionError,
    InsufficientDataError,
    InvalidModelError,
    LevelJumpError,
    NullspaceError,
    PtwellError,
    SingularPointError,
)
from .secular import (
    MatchingMatrix,
    SecularValue,
    WellParameters,
    entire_secular,
    make_parameters,
    matching_matrix,
    mu,
    nu,
    secular,
    secular_closed_form,
    secular_det,
    secular_imaginary_axis,
)
from .realroots import (
    EigenvalueRecord,
    ScanConfig,
    SpectrumReport,
    SuspiciousSite,
    compute_spectrum,
    refine_root,
    resolve_cluster,
    scan_brackets,
)
from .complexroots import (
    BreakingReport,
    ComplexRegion,
    ZeroCount,
    breaking_search,
    locate_complex_zero,
    winding_count,
)
from .wavefunction import (
    ParityParts,
    Wavefunction,
    build_wavefunction,
    norms,
    nullspace_coeffs,
    parity_decompose,
)
from .oracle import (
    ConvergenceStudy,
    RegularizedProblem,
    convergence_study,
    integrate_ode,
    shoot_eigenvalue,
)
from .analysis import (
    FIGURE_PARAMETERS,
    BeatStats,
    EnvelopeTrace,
    FigureDataset,
    GapStatistics,
    beat_period,
    figure_data,
    gap_statistics,
    trace_envelope,
)

__version__ = "0.1.0"
