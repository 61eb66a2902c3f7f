"""Positive-definite kernels on free-semigroup truncations.

The pipeline: validate a truncated kernel, test one-step shift dominance,
build its Kolmogorov space and compressed shifts, decide boundary
shift-consistency, dilate to a truncated row isometry with orthogonal
ranges, and evaluate the induced global kernel extension with
interior-preservation, dominance, and boundary-agreement certificates.
"""

from .words import EMPTY, Word, WordSet, enumerate_words, lambda_count, reverse_word
from .numerics import (
    DEFAULT_TOL,
    ToleranceConfig,
    check_psd,
    gram_solve,
    psd_factor,
    psd_sqrt,
)
from .kernel import (
    DominanceReport,
    TruncatedKernel,
    check_dominance,
    gram,
    shifted_kernel,
    validate_kernel,
)
from .kolmogorov import (
    InteriorDensity,
    KolmogorovSpace,
    ShiftSystem,
    build_space,
    compressed_shifts,
    graded_projector,
    interior_density,
)
from .consistency import (
    ConsistencyReport,
    Violation,
    check_row_contraction,
    solve_boundary_shifts,
)
from .dilation import (
    ExtensionReport,
    TruncatedDilation,
    build_dilation,
    extend_kernel,
    verify_extension,
)
from .hausdorff import (
    AtomicMeasure,
    check_complete_monotone,
    hankel_kernel,
    moments,
)
from . import errors, fixtures

__version__ = "0.1.0"

__all__ = [
    "EMPTY",
    "Word",
    "WordSet",
    "enumerate_words",
    "lambda_count",
    "reverse_word",
    "DEFAULT_TOL",
    "ToleranceConfig",
    "check_psd",
    "gram_solve",
    "psd_factor",
    "psd_sqrt",
    "DominanceReport",
    "TruncatedKernel",
    "check_dominance",
    "gram",
    "shifted_kernel",
    "validate_kernel",
    "InteriorDensity",
    "KolmogorovSpace",
    "ShiftSystem",
    "build_space",
    "compressed_shifts",
    "graded_projector",
    "interior_density",
    "ConsistencyReport",
    "Violation",
    "check_row_contraction",
    "solve_boundary_shifts",
    "ExtensionReport",
    "TruncatedDilation",
    "build_dilation",
    "extend_kernel",
    "verify_extension",
    "AtomicMeasure",
    "check_complete_monotone",
    "hankel_kernel",
    "moments",
    "errors",
    "fixtures",
]
