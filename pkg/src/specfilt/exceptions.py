"""Exception hierarchy shared by the library and the command line front end."""


class SpectralError(Exception):
    """Base class for all errors raised by specfilt."""


class ConfigError(SpectralError, ValueError):
    """An experiment configuration failed to parse or validate."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class NumericalError(SpectralError, ArithmeticError):
    """A numerical step produced an unusable result."""


class QuadratureError(NumericalError):
    """Composite quadrature did not reach the requested accuracy."""

    def __init__(self, index, estimate: float, tol: float):
        self.index = index
        self.estimate = estimate
        super().__init__(
            f"quadrature did not converge for index {index}: "
            f"error estimate {estimate:.3e} > {tol:.1e}"
        )


class SingularFactorError(NumericalError):
    """A factor matrix of a filter operator is singular."""

    def __init__(self, factor_index: int):
        self.factor_index = factor_index
        super().__init__(f"factor {factor_index} is singular")


class PoleProximityError(NumericalError):
    """A transfer function was evaluated at (or numerically on) a pole."""


class InstabilityError(NumericalError):
    """Time-domain integration blew up."""


class CalibrationError(SpectralError):
    """A calibration root search had no sign change in its bracket."""
