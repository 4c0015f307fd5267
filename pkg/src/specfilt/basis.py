"""Orthonormal cosine basis on [0, T].

    q(0, t) = 1/sqrt(T),   q(i, t) = sqrt(2/T) cos(i pi t / T),  i >= 1

Outside [0, T] the basis is either continued by the same formula
(``Extension.NATURAL``) or set to zero (``Extension.ZERO``).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.fft import dct

from .exceptions import QuadratureError

#: Nodes per Gauss-Legendre panel.
GL_ORDER = 20
#: Coefficient accuracy target for :func:`project_quadrature`.
PROJECTION_TOL = 1e-10


class Extension(enum.Enum):
    NATURAL = "natural"
    ZERO = "zero"


@dataclass(frozen=True)
class BasisSpec:
    T: float = 1.0
    L: int = 128
    extension: Extension = Extension.NATURAL

    def __post_init__(self):
        if not (self.T > 0 and math.isfinite(self.T)):
            raise ValueError(f"T must be positive and finite, got {self.T}")
        if int(self.L) != self.L or self.L < 1:
            raise ValueError(f"L must be a positive integer, got {self.L}")

    def matrix(self, t) -> np.ndarray:
        """Basis values q(i, t_k) as an (L, len(t)) array."""
        return basis_matrix(self.T, self.L, t, self.extension)


def basis_matrix(T: float, L: int, t, extension: Extension = Extension.NATURAL) -> np.ndarray:
    t = np.atleast_1d(np.asarray(t, dtype=float))
    i = np.arange(L, dtype=float)[:, None]
    Q = math.sqrt(2.0 / T) * np.cos(i * (math.pi / T) * t[None, :])
    Q[0, :] = 1.0 / math.sqrt(T)
    if extension is Extension.ZERO:
        Q[:, (t < 0.0) | (t > T)] = 0.0
    return Q


def basis_eval(spec: BasisSpec, i: int, t):
    """Evaluate q(i, t); ``t`` may be a scalar or an array."""
    if not 0 <= i < spec.L:
        raise IndexError(f"basis index {i} out of range [0, {spec.L})")
    scalar = np.ndim(t) == 0
    out = basis_matrix(spec.T, i + 1, t, spec.extension)[i]
    return float(out[0]) if scalar else out


def reconstruct(spec: BasisSpec, coeffs, grid) -> np.ndarray:
    """Time samples of sum_i coeffs[i] q(i, t) on ``grid``."""
    coeffs = np.asarray(getattr(coeffs, "coeffs", coeffs), dtype=float)
    if coeffs.shape != (spec.L,):
        raise ValueError(f"expected {spec.L} coefficients, got shape {coeffs.shape}")
    grid = np.asarray(grid, dtype=float)
    if not np.all(np.isfinite(grid)):
        raise ValueError("grid contains non-finite points")
    out = np.empty(grid.size)
    flat = grid.ravel()
    # chunk over time to bound the size of the basis matrix
    step = max(1, 2_000_000 // spec.L)
    for k in range(0, flat.size, step):
        out[k:k + step] = coeffs @ basis_matrix(spec.T, spec.L, flat[k:k + step], spec.extension)
    return out.reshape(grid.shape)


def reconstruct_uniform(spec: BasisSpec, coeffs, N: int) -> np.ndarray:
    """Samples at t_k = k T / N, k = 0..N, via a type-I DCT.

    Same values as ``reconstruct`` on ``np.linspace(0, T, N + 1)`` but
    O(N log N); needs N >= L.
    """
    coeffs = np.asarray(getattr(coeffs, "coeffs", coeffs), dtype=float)
    if coeffs.shape != (spec.L,):
        raise ValueError(f"expected {spec.L} coefficients, got shape {coeffs.shape}")
    if N < spec.L:
        raise ValueError(f"need N >= L, got N={N}, L={spec.L}")
    x = np.zeros(N + 1)
    # DCT-I: y_k = x_0 + (-1)^k x_N + 2 sum_{0<n<N} x_n cos(pi k n / N)
    x[0] = coeffs[0] / math.sqrt(spec.T)
    x[1:spec.L] = 0.5 * math.sqrt(2.0 / spec.T) * coeffs[1:]
    return dct(x, type=1)


@lru_cache(maxsize=None)
def _legendre(order: int):
    return np.polynomial.legendre.leggauss(order)


def gauss_legendre(a: float, b: float, panels: int, order: int = GL_ORDER):
    """Nodes and weights of composite Gauss-Legendre on [a, b]."""
    x, w = _legendre(order)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def panels_for(freq: float, a: float, b: float, minimum: int = 8) -> int:
    """Panel count giving at least one panel per oscillation period of ``freq``."""
    periods = abs(freq) * (b - a) / (2.0 * math.pi)
    return max(minimum, int(math.ceil(periods)) + 1)


def _project(T, L, f, panels, extension):
    nodes, weights = gauss_legendre(0.0, T, panels)
    fw = np.asarray(f(nodes), dtype=float)
    if fw.shape != nodes.shape:
        fw = np.array([f(t) for t in nodes], dtype=float)
    fw = fw * weights
    out = np.empty(L)
    step = 128
    for i0 in range(0, L, step):
        i1 = min(L, i0 + step)
        out[i0:i1] = basis_matrix(T, i1, nodes, extension)[i0:i1] @ fw
    return out


def project_quadrature(
    spec: BasisSpec,
    f: Callable,
    omega_max: float = 0.0,
    tol: float = PROJECTION_TOL,
) -> np.ndarray:
    """Coefficients int_0^T q(i, t) f(t) dt for i < L by composite Gauss-Legendre.

    ``omega_max`` is the highest angular frequency present in ``f``; the panel
    count is sized so the product with the highest basis function is resolved.
    The result is compared against a run on twice as many panels and a
    :class:`QuadratureError` names the worst index if they disagree by more
    than ``tol``.
    """
    freq = (spec.L - 1) * math.pi / spec.T + abs(omega_max)
    panels = panels_for(freq, 0.0, spec.T)
    coarse = _project(spec.T, spec.L, f, panels, spec.extension)
    fine = _project(spec.T, spec.L, f, 2 * panels, spec.extension)
    diff = np.abs(fine - coarse)
    worst = int(np.argmax(diff))
    if not np.isfinite(diff[worst]) or diff[worst] > tol:
        raise QuadratureError(worst, float(diff[worst]), tol)
    return fine
