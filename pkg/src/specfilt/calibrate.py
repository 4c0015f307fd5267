"""Recover an unstated cutoff frequency from a-priori error values.

Two bracketed root searches:

1. the phase delay tau for which the a-priori noise error on [0, T - tau]
   equals the anchor value;
2. the cutoff for which the design's phase delay at the signal frequency
   equals that tau.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.integrate import quad
from scipy.optimize import bisect

from .blocks import indicator_gain_matrix
from .exceptions import CalibrationError
from .filters import FilterDesign, phase_delay
from .modeling import NoiseSpec, quadratic_form

#: A-priori errors of the third-order Butterworth filter with the default
#: deterministic noise, T = 1, keyed by truncation order.
BW3_APRIORI_ANCHORS = {128: 0.242112, 256: 0.242318, 512: 0.242319, 1024: 0.242319}

CUTOFF_BRACKET = (10 * math.pi, 78 * math.pi)


@dataclass(frozen=True)
class CalibrationResult:
    anchor: float
    L: int | None
    tau: float
    tau_residual: float
    cutoff: float
    cutoff_residual: float


def apriori_spectral(tau: float, noise: NoiseSpec, T: float, L: int) -> float:
    """sqrt(V^T A V) with A the indicator of [0, T - tau], truncated to L."""
    V = noise.spectral(T, L).coeffs
    return float(np.sqrt(quadratic_form(V, indicator_gain_matrix(T, L, T - tau).data)))


class SpectralApriori:
    """Fast tau -> sqrt(V^T A(T - tau) V) for a fixed V.

    Uses the structure of the indicator-gain entries: the off-diagonal block
    is sum_ij V_i V_j K_ij (i s_i c_j - j c_i s_j) with the index-only kernel
    K_ij = 2 / ((i^2 - j^2) pi), which equals 2 a^T K b for a = V i s and
    b = V c because K is antisymmetric.  K is built once, so each evaluation
    is one matrix-vector product instead of a fresh L x L trigonometric
    matrix.
    """

    def __init__(self, V: np.ndarray, T: float):
        self.V = np.asarray(V, dtype=float)
        self.T = T
        i = np.arange(1, self.V.size, dtype=float)
        self.i = i
        with np.errstate(divide="ignore"):
            K = 2.0 / ((i[:, None] ** 2 - i[None, :] ** 2) * math.pi)
        np.fill_diagonal(K, 0.0)
        self.K = K

    def __call__(self, tau: float) -> float:
        V, T, i = self.V, self.T, self.i
        c = T - tau
        arg = i * math.pi * c / T
        s, co = np.sin(arg), np.cos(arg)
        v0, v = V[0], V[1:]
        value = (
            v0 * v0 * c / T
            + 2.0 * v0 * math.sqrt(2.0) * np.sum(v * s / (i * math.pi))
            + np.sum(v * v * (c / T + np.sin(2.0 * arg) / (2.0 * i * math.pi)))
            + 2.0 * (v * i * s) @ (self.K @ (v * co))
        )
        return math.sqrt(float(quadratic_form(np.array([1.0]), np.array([[value]]))))


def apriori_continuous(tau: float, noise: NoiseSpec, T: float) -> float:
    """||v||_{L2[0, T - tau]} by adaptive quadrature of the closed-form noise."""
    omega = max((tone.omega for tone in noise.tones), default=1.0)
    limit = int(omega * T / math.pi) + 50
    val, _ = quad(lambda t: float(noise(t)) ** 2, 0.0, T - tau, limit=limit, epsabs=1e-14, epsrel=1e-13)
    return math.sqrt(max(val, 0.0))


def _bisect(f, a, b, what: str, xtol: float = 1e-15):
    fa, fb = f(a), f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if np.sign(fa) == np.sign(fb):
        raise CalibrationError(f"no sign change for {what} on [{a:.6g}, {b:.6g}]: f={fa:.3e}, {fb:.3e}")
    return bisect(f, a, b, xtol=xtol, maxiter=500)


def calibrate_delay(
    anchor: float,
    noise: NoiseSpec | None = None,
    T: float = 1.0,
    L: int | None = None,
) -> tuple[float, float]:
    """Phase delay reproducing the a-priori error ``anchor``; returns (tau, residual).

    With ``L`` the truncated spectral form is used (matching how the anchor
    was computed at that truncation order); without it, the exact integral.
    """
    noise = NoiseSpec() if noise is None else noise
    if L is None:
        e0 = lambda tau: apriori_continuous(tau, noise, T)  # noqa: E731
    else:
        e0 = SpectralApriori(noise.spectral(T, L).coeffs, T)
    upper = e0(0.0)
    if abs(upper - anchor) <= 1e-12 * max(1.0, anchor):
        return 0.0, abs(upper - anchor)
    tau = _bisect(lambda tau: e0(tau) - anchor, 0.0, 0.5 * T, "phase delay")
    return tau, abs(e0(tau) - anchor)


def calibrate_cutoff(
    tau: float,
    design: FilterDesign,
    omega: float = 10 * math.pi,
    bracket: tuple[float, float] = CUTOFF_BRACKET,
) -> tuple[float, float]:
    """Cutoff giving ``design`` the phase delay ``tau`` at ``omega``; returns (cutoff, residual)."""
    f = lambda wc: phase_delay(replace(design, cutoff=wc), omega) - tau  # noqa: E731
    wc = _bisect(f, bracket[0], bracket[1], "cutoff", xtol=1e-13 * bracket[1])
    return wc, abs(f(wc))


def calibrate(
    anchor: float,
    design: FilterDesign,
    L: int | None = None,
    noise: NoiseSpec | None = None,
    T: float = 1.0,
    omega: float = 10 * math.pi,
    bracket: tuple[float, float] = CUTOFF_BRACKET,
) -> CalibrationResult:
    tau, tau_res = calibrate_delay(anchor, noise, T, L)
    wc, wc_res = calibrate_cutoff(tau, design, omega, bracket)
    return CalibrationResult(anchor, L, tau, tau_res, wc, wc_res)
