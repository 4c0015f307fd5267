"""Truncated two-dimensional transfer functions of the elementary blocks.

All matrices are over the cosine basis of :mod:`specfilt.basis` and are
returned dense, L x L.  Diagonal entries and the i = 0 / j = 0 border have
their own closed forms; the generic off-diagonal formula is only evaluated
where i != j and i, j >= 1.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .basis import Extension, basis_matrix, gauss_legendre, panels_for

SQRT2 = math.sqrt(2.0)


class BlockKind(enum.Enum):
    DERIVATIVE = "derivative"
    INTEGRAL = "integral"
    INDICATOR_GAIN = "gain"
    SHIFT_NATURAL = "shift"
    SHIFT_ZERO_POS = "shift-zero-pos"
    SHIFT_ZERO_NEG = "shift-zero-neg"
    IDENTITY = "identity"
    COMPOSITE = "composite"


@dataclass(frozen=True, eq=False)
class BlockMatrix:
    data: np.ndarray
    T: float
    kind: BlockKind
    param: float | None = None
    label: str = field(default="")

    def __post_init__(self):
        data = np.asarray(self.data, dtype=float)
        if data.ndim != 2 or data.shape[0] != data.shape[1]:
            raise ValueError(f"block matrix must be square, got {data.shape}")
        if not np.all(np.isfinite(data)):
            raise ValueError("block matrix has non-finite entries")
        data.flags.writeable = False
        object.__setattr__(self, "data", data)

    @property
    def L(self) -> int:
        return self.data.shape[0]

    def __matmul__(self, other):
        if isinstance(other, BlockMatrix):
            return BlockMatrix(self.data @ other.data, self.T, BlockKind.COMPOSITE)
        return self.data @ np.asarray(getattr(other, "coeffs", other))

    def __array__(self, dtype=None, copy=None):
        return self.data if dtype is None else self.data.astype(dtype)


def _check(T, L):
    if not T > 0:
        raise ValueError(f"T must be positive, got {T}")
    if int(L) != L or L < 1:
        raise ValueError(f"L must be a positive integer, got {L}")


def _grids(L):
    """Index grids I, J, parity sign (-1)^(i+j), and the generic-entry mask."""
    k = np.arange(L)
    I, J = np.meshgrid(k, k, indexing="ij")
    sign = np.where((I + J) % 2 == 0, 1.0, -1.0)
    mask = (I != J) & (I > 0) & (J > 0)
    return I.astype(float), J.astype(float), sign, mask


def _alt(k):
    """(-1)^k for an integer array."""
    return np.where(k % 2 == 0, 1.0, -1.0)


def identity(T: float, L: int) -> BlockMatrix:
    _check(T, L)
    return BlockMatrix(np.eye(L), T, BlockKind.IDENTITY)


def derivative_matrix(T: float, L: int) -> BlockMatrix:
    """Matrix P of the derivative block."""
    _check(T, L)
    I, J, sign, mask = _grids(L)
    P = np.zeros((L, L))
    with np.errstate(divide="ignore", invalid="ignore"):
        generic = 2.0 * (I**2 - sign * J**2) / (T * (I**2 - J**2))
    P[mask] = generic[mask]
    d = np.arange(1, L)
    P[d, d] = 2.0 / T
    P[0, 0] = 1.0 / T
    P[0, 1:] = _alt(d) * SQRT2 / T
    P[1:, 0] = SQRT2 / T
    return BlockMatrix(P, T, BlockKind.DERIVATIVE)


def integral_matrix(T: float, L: int) -> BlockMatrix:
    """Matrix P^{-1} of the integral block."""
    _check(T, L)
    I, J, sign, mask = _grids(L)
    Pi = np.zeros((L, L))
    with np.errstate(divide="ignore", invalid="ignore"):
        generic = 2.0 * T * (sign - 1.0) / ((I**2 - J**2) * math.pi**2)
    Pi[mask] = generic[mask]
    d = np.arange(1, L)
    Pi[0, 0] = T / 2.0
    Pi[0, 1:] = SQRT2 * T * (1.0 - _alt(d)) / (d**2 * math.pi**2)
    Pi[1:, 0] = -Pi[0, 1:]
    return BlockMatrix(Pi, T, BlockKind.INTEGRAL)


def indicator_gain_matrix(T: float, L: int, c: float) -> BlockMatrix:
    """Matrix A of the proportional block with gain equal to the indicator of [0, c]."""
    _check(T, L)
    if not 0.0 <= c <= T:
        raise ValueError(f"cut point c={c} outside [0, {T}]")
    I, J, _, mask = _grids(L)
    si, ci = np.sin(I * math.pi * c / T), np.cos(I * math.pi * c / T)
    sj, cj = np.sin(J * math.pi * c / T), np.cos(J * math.pi * c / T)
    A = np.zeros((L, L))
    with np.errstate(divide="ignore", invalid="ignore"):
        generic = 2.0 / ((I**2 - J**2) * math.pi) * (I * si * cj - J * ci * sj)
    A[mask] = generic[mask]
    d = np.arange(1, L)
    A[d, d] = c / T + np.sin(2.0 * d * math.pi * c / T) / (2.0 * d * math.pi)
    A[0, 0] = c / T
    A[0, 1:] = SQRT2 * np.sin(d * math.pi * c / T) / (d * math.pi)
    # mirror the upper triangle so the result is symmetric bit for bit
    upper = np.triu(A)
    A = upper + np.triu(A, 1).T
    return BlockMatrix(A, T, BlockKind.INDICATOR_GAIN, c)


def shift_matrix_natural(T: float, L: int, tau: float) -> BlockMatrix:
    """Matrix S of the time shift by ``tau`` with the basis continued by its own formula.

    ``tau > 0`` is an advance, ``tau < 0`` a delay.
    """
    _check(T, L)
    if not abs(tau) < T:
        raise ValueError(f"|tau|={abs(tau)} must be < T={T}")
    I, J, sign, mask = _grids(L)
    S = np.zeros((L, L))
    with np.errstate(divide="ignore", invalid="ignore"):
        generic = 2.0 * J * (1.0 - sign) / ((I**2 - J**2) * math.pi) * np.sin(J * math.pi * tau / T)
    S[mask] = generic[mask]
    d = np.arange(1, L)
    S[d, d] = np.cos(d * math.pi * tau / T)
    S[0, 0] = 1.0
    S[0, 1:] = SQRT2 * (_alt(d) - 1.0) / (d * math.pi) * np.sin(d * math.pi * tau / T)
    return BlockMatrix(S, T, BlockKind.SHIFT_NATURAL, tau)


def shift_matrix_zero_ext(T: float, L: int, tau: float) -> BlockMatrix:
    """Matrix of the time shift by ``tau`` with the basis extended by zero outside [0, T]."""
    _check(T, L)
    if tau == 0.0:
        raise ValueError("tau = 0 is the identity; use identity(T, L)")
    if not abs(tau) < T:
        raise ValueError(f"|tau|={abs(tau)} must be < T={T}")
    I, J, sign, mask = _grids(L)
    d = np.arange(1, L)
    si = np.sin(I * math.pi * tau / T)
    sj = np.sin(J * math.pi * tau / T)
    sd = np.sin(d * math.pi * tau / T)
    S = np.zeros((L, L))
    with np.errstate(divide="ignore", invalid="ignore"):
        if tau > 0:
            generic = 2.0 / ((I**2 - J**2) * math.pi) * (J * sj - I * sign * si)
        else:
            generic = 2.0 / ((I**2 - J**2) * math.pi) * (I * si - J * sign * sj)
    S[mask] = generic[mask]
    if tau > 0:
        r = (T - tau) / T
        S[0, 0] = r
        S[0, 1:] = -SQRT2 / (d * math.pi) * sd
        S[1:, 0] = SQRT2 / (d * math.pi) * np.sin(d * math.pi * (T - tau) / T)
        S[d, d] = r * np.cos(d * math.pi * tau / T) - sd / (d * math.pi)
        kind = BlockKind.SHIFT_ZERO_POS
    else:
        r = (T + tau) / T
        S[0, 0] = r
        S[0, 1:] = SQRT2 / (d * math.pi) * np.sin(d * math.pi * (T + tau) / T)
        S[1:, 0] = SQRT2 / (d * math.pi) * sd
        S[d, d] = r * np.cos(d * math.pi * tau / T) + sd / (d * math.pi)
        kind = BlockKind.SHIFT_ZERO_NEG
    return BlockMatrix(S, T, kind, tau)


def shift_matrix(T: float, L: int, tau: float, extension: Extension = Extension.NATURAL) -> BlockMatrix:
    """Shift matrix for either extension mode; zero shift gives the identity."""
    if tau == 0.0:
        return identity(T, L)
    if extension is Extension.NATURAL:
        return shift_matrix_natural(T, L, tau)
    return shift_matrix_zero_ext(T, L, tau)


# -- quadrature oracle ------------------------------------------------------

def _basis_derivative(T, L, t):
    k = np.arange(L, dtype=float)[:, None]
    return -math.sqrt(2.0 / T) * (k * math.pi / T) * np.sin(k * math.pi * t[None, :] / T)


def _running_integral(T, L, t):
    """int_0^t q(j, s) ds for every node t, by Gauss-Legendre on [0, t]."""
    panels = panels_for((L - 1) * math.pi / T, 0.0, T, minimum=2)
    x, w = gauss_legendre(0.0, 1.0, panels)
    out = np.empty((L, t.size))
    for k, tk in enumerate(t):
        out[:, k] = basis_matrix(T, L, tk * x) @ (tk * w)
    return out


def oracle_matrix(kind: BlockKind | str, T: float, L: int, param: float | None = None) -> np.ndarray:
    """Every element of a block matrix by quadrature of its defining integral."""
    kind = BlockKind(kind)
    freq = 2 * (L - 1) * math.pi / T
    a, b = 0.0, T
    if kind is BlockKind.INDICATOR_GAIN:
        b = param
    elif kind in (BlockKind.SHIFT_ZERO_POS, BlockKind.SHIFT_ZERO_NEG):
        a, b = max(0.0, -param), min(T, T - param)
    if b <= a:
        return np.zeros((L, L))
    nodes, weights = gauss_legendre(a, b, 2 * panels_for(freq, a, b))
    left = basis_matrix(T, L, nodes) * weights[None, :]

    if kind is BlockKind.DERIVATIVE:
        q0 = basis_matrix(T, L, np.array([0.0]))[:, 0]
        return np.outer(q0, q0) + left @ _basis_derivative(T, L, nodes).T
    if kind is BlockKind.INTEGRAL:
        return left @ _running_integral(T, L, nodes).T
    if kind is BlockKind.INDICATOR_GAIN:
        return left @ basis_matrix(T, L, nodes).T
    if kind is BlockKind.SHIFT_NATURAL:
        return left @ basis_matrix(T, L, nodes + param, Extension.NATURAL).T
    if kind in (BlockKind.SHIFT_ZERO_POS, BlockKind.SHIFT_ZERO_NEG):
        return left @ basis_matrix(T, L, nodes + param, Extension.ZERO).T
    if kind is BlockKind.IDENTITY:
        return left @ basis_matrix(T, L, nodes).T
    raise ValueError(f"no defining integral for {kind}")


def matrix_element_oracle(kind, T: float, i: int, j: int, param: float | None = None) -> float:
    """Single element (i, j) of a block matrix by quadrature."""
    if i < 0 or j < 0:
        raise IndexError("indices must be nonnegative")
    return float(oracle_matrix(kind, T, max(i, j) + 1, param)[i, j])
