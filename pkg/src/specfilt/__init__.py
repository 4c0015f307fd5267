"""Continuous-time linear filters in the spectral (orthogonal expansion) domain."""

from .basis import BasisSpec, Extension, basis_matrix, reconstruct
from .blocks import (
    BlockKind,
    BlockMatrix,
    derivative_matrix,
    indicator_gain_matrix,
    integral_matrix,
    shift_matrix,
)
from .exceptions import CalibrationError, ConfigError, NumericalError, SpectralError
from .filters import Family, FilterDesign, PassKind, ntf_factored, phase_delay, group_delay
from .modeling import ErrorReport, ExperimentConfig, NoiseSpec, Tone, run
from .signals import SpectralVec, spectral_cos, spectral_sin, spectral_white_noise

__version__ = "0.1.0"

__all__ = [
    "BasisSpec", "Extension", "basis_matrix", "reconstruct",
    "BlockKind", "BlockMatrix", "derivative_matrix", "indicator_gain_matrix",
    "integral_matrix", "shift_matrix",
    "CalibrationError", "ConfigError", "NumericalError", "SpectralError",
    "Family", "FilterDesign", "PassKind", "ntf_factored", "phase_delay", "group_delay",
    "ErrorReport", "ExperimentConfig", "NoiseSpec", "Tone", "run",
    "SpectralVec", "spectral_cos", "spectral_sin", "spectral_white_noise",
]
