"""Time-domain reference for the spectral pipeline.

Each design is realized in controllable canonical form from its (scaled)
pole set and integrated from zero state by classical RK4.  Nothing here
uses the cosine-basis matrices, so agreement with :mod:`specfilt.modeling`
is an end-to-end check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import simpson
from scipy.interpolate import CubicSpline

from .basis import BasisSpec, reconstruct, reconstruct_uniform
from .exceptions import InstabilityError
from .filters import FilterDesign, PassKind
from .modeling import ExperimentConfig, NoiseKind, simulate

BLOWUP = 1e12
#: Default RK4 step as a fraction of T.
DEFAULT_STEP = 2.5e-5


@dataclass(frozen=True, eq=False)
class StateSpace:
    """x' = A x + B g,  y = C x + D g."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: float

    @property
    def order(self) -> int:
        return self.A.shape[0]

    @classmethod
    def identity(cls, gain: float = 1.0) -> "StateSpace":
        return cls(np.zeros((0, 0)), np.zeros(0), np.zeros(0), gain)

    @classmethod
    def from_design(cls, design: FilterDesign) -> "StateSpace":
        poles = design.scaled_poles
        den = _expand(poles)  # monic, lowest degree first
        n = poles.size
        num = np.zeros(n + 1)
        if design.kind is PassKind.LOWPASS:
            num[0] = design.gain * design.cutoff**n
        else:
            num[n] = design.gain / np.prod(-design.poles).real
        return cls.from_polynomials(num, den)

    @classmethod
    def from_polynomials(cls, num, den) -> "StateSpace":
        """Controllable canonical realization of num/den (coefficients lowest degree first)."""
        den = np.asarray(den, dtype=float)
        num = np.asarray(num, dtype=float)
        n = den.size - 1
        if den[-1] != 1.0:
            num, den = num / den[-1], den / den[-1]
        num = np.concatenate([num, np.zeros(n + 1 - num.size)])
        A = np.zeros((n, n))
        A[:-1, 1:] = np.eye(n - 1)
        A[-1, :] = -den[:-1]
        B = np.zeros(n)
        B[-1] = 1.0
        D = num[n]
        C = num[:n] - den[:n] * D
        return cls(A, B, C, float(D))


def _expand(roots) -> np.ndarray:
    """Monic polynomial with the given roots, lowest degree first, conjugate pairs multiplied out."""
    coeffs = np.array([1.0 + 0j])
    for r in roots:
        coeffs = np.concatenate([[0.0], coeffs]) - r * np.concatenate([coeffs, [0.0]])
    scale = np.abs(coeffs).max()
    if np.abs(coeffs.imag).max() > 1e-10 * scale:
        raise ArithmeticError("pole set is not closed under conjugation")
    return coeffs.real


def rk4_step_map(ss: StateSpace, h: float):
    """One classical RK4 step of x' = A x + B g written as a linear map.

    Returns ``(Phi, b0, bm, b1)`` with
    x_next = Phi x + b0 g(t) + bm g(t + h/2) + b1 g(t + h), identical in
    exact arithmetic to evaluating the four stages.
    """
    n = ss.order
    A, B = ss.A, ss.B
    # stage coefficients over the columns [x (n) | g(t) | g(t+h/2) | g(t+h)]
    x_part = np.hstack([np.eye(n), np.zeros((n, 3))])
    k1 = np.hstack([A, B[:, None], np.zeros((n, 2))])
    mid_in = np.hstack([np.zeros((n, n + 1)), B[:, None], np.zeros((n, 1))])
    end_in = np.hstack([np.zeros((n, n + 2)), B[:, None]])
    k2 = A @ (x_part + 0.5 * h * k1) + mid_in
    k3 = A @ (x_part + 0.5 * h * k2) + mid_in
    k4 = A @ (x_part + h * k3) + end_in
    step = x_part + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    return step[:, :n], step[:, n], step[:, n + 1], step[:, n + 2]


def ode_filter(system, g: Callable, T: float, step: float) -> tuple[np.ndarray, np.ndarray]:
    """Output samples y(t_k) on t_k = k*h, h ~ ``step``, by RK4 from zero state."""
    ss = system if isinstance(system, StateSpace) else StateSpace.from_design(system)
    N = max(1, int(round(T / step)))
    h = T / N
    t = np.linspace(0.0, T, N + 1)
    g_nodes = np.asarray(g(t), dtype=float)
    if ss.order == 0:
        return t, ss.D * g_nodes
    g_mid = np.asarray(g(t[:-1] + 0.5 * h), dtype=float)
    Phi, b0, bm, b1 = rk4_step_map(ss, h)
    forcing = np.outer(g_nodes[:-1], b0) + np.outer(g_mid, bm) + np.outer(g_nodes[1:], b1)
    x = np.zeros(ss.order)
    states = np.empty((N + 1, ss.order))
    states[0] = x
    for k in range(N):
        x = Phi @ x + forcing[k]
        states[k + 1] = x
        if k % 256 == 0 and not np.all(np.abs(x) < BLOWUP):
            raise InstabilityError(f"state exceeded {BLOWUP:g} at t={t[k + 1]:.6g}")
    if not np.all(np.abs(states) < BLOWUP):
        raise InstabilityError(f"state exceeded {BLOWUP:g}")
    return t, states @ ss.C + ss.D * g_nodes


@dataclass(frozen=True)
class Discrepancy:
    L: int
    tau: float
    l2_full: float
    sup_full: float
    l2_shifted: float
    sup_shifted: float


def _l2(t, values) -> float:
    return math.sqrt(max(simpson(values**2, x=t), 0.0))


def compare(spectral_x, spectral_x_star, T: float, tau: float, t: np.ndarray, y: np.ndarray) -> Discrepancy:
    """Gaps between reconstructed spectral outputs and sampled time-domain outputs."""
    spec = BasisSpec(T, len(spectral_x))
    N = t.size - 1
    uniform = N >= spec.L and t[0] == 0.0 and np.allclose(t, np.linspace(0.0, T, N + 1), rtol=0, atol=1e-12 * T)
    shifted_t = t[t <= T - tau]
    if uniform:
        d = reconstruct_uniform(spec, spectral_x, N) - y
        xs = reconstruct_uniform(spec, spectral_x_star, N)[: shifted_t.size]
    else:
        d = reconstruct(spec, spectral_x, t) - y
        xs = reconstruct(spec, spectral_x_star, shifted_t)
    ds = xs - CubicSpline(t, y)(shifted_t + tau)
    return Discrepancy(
        L=spec.L,
        tau=tau,
        l2_full=_l2(t, d),
        sup_full=float(np.abs(d).max()),
        l2_shifted=_l2(shifted_t, ds) if shifted_t.size > 2 else 0.0,
        sup_shifted=float(np.abs(ds).max()),
    )


def cross_validate(config: ExperimentConfig, step: float | None = None, ode_output=None) -> Discrepancy:
    """Run the spectral pipeline and the RK4 oracle on the same deterministic input.

    ``ode_output`` may pass a precomputed ``(t, y)`` pair, which is
    independent of L and can be shared across truncation orders.
    """
    if config.noise.kind is NoiseKind.RANDOM:
        raise ValueError("cross-validation needs a deterministic input")
    step = DEFAULT_STEP * config.T if step is None else step
    res = simulate(config)
    if ode_output is None:
        ode_output = ode_filter(config.design, config.input_function, config.T, step)
    t, y = ode_output
    return compare(res["x"], res["x*"], config.T, res["tau"], t, y)
