"""Exception hierarchy for tomokit"""


class TomokitError(Exception):
    """Base class for every error raised by tomokit"""


class NormalizationError(TomokitError):
    """A density, Wigner function or tomogram does not integrate to one"""

    def __init__(self, message, integral=None):
        super().__init__(message)
        self.integral = integral


class DensityError(TomokitError):
    """A grid flagged as a classical density takes negative values"""

    def __init__(self, message, min_value=None):
        super().__init__(message)
        self.min_value = min_value


class DomainError(TomokitError):
    """Operands live on incompatible or unsupported windows"""


class TruncationError(TomokitError):
    """A transform pushed mass outside the sampling window"""

    def __init__(self, message, lost_mass=None):
        super().__init__(message)
        self.lost_mass = lost_mass


class FrameError(TomokitError):
    """A reference frame is degenerate or unavailable"""


class CoverageError(TomokitError):
    """Sampled frames do not cover the half circle of rotation angles"""

    def __init__(self, message, max_gap=None):
        super().__init__(message)
        self.max_gap = max_gap


class CorrelationError(TomokitError):
    """Position-momentum correlation coefficient is not strictly inside (-1, 1)"""


class HermiticityError(TomokitError):
    """An operator or density matrix is not Hermitian within tolerance"""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class AdmissibilityError(TomokitError):
    """A state was placed where its admissibility class is not allowed"""


class ScaleError(TomokitError):
    """Scaling parameters are zero or mismatched in mode count"""


class InputFormatError(TomokitError):
    """An input file or command-line value could not be parsed"""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
