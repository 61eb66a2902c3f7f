"""Exception types shared across the package."""


class FskError(Exception):
    """Base class for all package-specific errors."""


class NonHermitianInput(FskError):
    """A matrix claimed Hermitian deviates from its adjoint beyond tolerance."""


class NotPositiveSemidefinite(FskError):
    """A matrix required to be PSD has an eigenvalue below -psd_tol * scale."""


class MissingEntry(FskError):
    """A kernel entry map lacks a required (row, col) word pair."""

    def __init__(self, row, col):
        super().__init__(f"missing kernel block for pair ({row}, {col})")
        self.row = row
        self.col = col


class ShapeMismatch(FskError):
    """A kernel block does not have the declared coefficient dimensions."""


class SymmetryViolation(FskError):
    """Kernel entries fail Hermitian symmetry K(b,a) = K(a,b)^*."""

    def __init__(self, row, col, deviation):
        super().__init__(
            f"blocks at ({row}, {col}) / ({col}, {row}) are not mutually "
            f"adjoint, max deviation {deviation:.3e}"
        )
        self.row = row
        self.col = col
        self.deviation = deviation


class WordOutOfRange(FskError):
    """A word lies outside the index set of the kernel or dilation."""


class WellDefinednessFailure(FskError):
    """The compressed-shift extension is inconsistent on dependent columns."""

    def __init__(self, letter, residual):
        super().__init__(
            f"shift for letter {letter} is not well defined on the interior "
            f"span, residual {residual:.3e} (dominance must be failing)"
        )
        self.letter = letter
        self.residual = residual


class IdentityMismatch(FskError):
    """A verified operator identity failed beyond tolerance."""

    def __init__(self, label, location, magnitude):
        super().__init__(f"{label} fails at {location} with deviation {magnitude:.3e}")
        self.label = label
        self.location = location
        self.magnitude = magnitude


class ContractivityFailure(FskError):
    """An operator tuple required to be a column contraction is not one."""

    def __init__(self, lambda_max):
        super().__init__(f"column operator has lambda_max = {lambda_max:.12g} > 1")
        self.lambda_max = lambda_max


class InputFormatError(FskError):
    """A problem document violates the JSON input schema."""
