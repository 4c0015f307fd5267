"""Spectral characteristics (cosine-basis coefficient vectors) of test signals."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np

#: Relative tolerance for detecting the resonant index i*pi == T*omega.
RESONANCE_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class SpectralVec:
    coeffs: np.ndarray
    T: float = 1.0
    label: str = ""

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float)
        if c.ndim != 1 or c.size < 1:
            raise ValueError(f"coefficients must be a non-empty vector, got shape {c.shape}")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @property
    def L(self) -> int:
        return self.coeffs.size

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def __len__(self):
        return self.L

    def __array__(self, dtype=None, copy=None):
        return self.coeffs if dtype is None else self.coeffs.astype(dtype)


def _resonant(i: np.ndarray, T: float, omega: float) -> np.ndarray:
    target = T * omega
    return np.abs(i * math.pi - target) <= RESONANCE_RTOL * np.maximum(i * math.pi, target)


def _check(omega, T, L):
    if not omega > 0:
        raise ValueError(f"omega must be positive, got {omega}")
    if not T > 0:
        raise ValueError(f"T must be positive, got {T}")
    if int(L) != L or L < 1:
        raise ValueError(f"L must be a positive integer, got {L}")


def spectral_sin(omega: float, T: float, L: int) -> SpectralVec:
    """Coefficients of sin(omega t) on [0, T]."""
    _check(omega, T, L)
    F = np.zeros(L)
    F[0] = (1.0 - math.cos(T * omega)) / (math.sqrt(T) * omega)
    i = np.arange(1, L, dtype=float)
    res = _resonant(i, T, omega)
    den = np.where(res, 1.0, i**2 * math.pi**2 - T**2 * omega**2)
    alt = np.where(np.arange(1, L) % 2 == 0, 1.0, -1.0)
    F[1:] = np.where(res, 0.0, T * math.sqrt(2 * T) * omega * (alt * math.cos(T * omega) - 1.0) / den)
    return SpectralVec(F, T, f"sin({omega:g}t)")


def spectral_cos(omega: float, T: float, L: int) -> SpectralVec:
    """Coefficients of cos(omega t) on [0, T]."""
    _check(omega, T, L)
    F = np.zeros(L)
    F[0] = math.sin(T * omega) / (math.sqrt(T) * omega)
    i = np.arange(1, L, dtype=float)
    res = _resonant(i, T, omega)
    den = np.where(res, 1.0, i**2 * math.pi**2 - T**2 * omega**2)
    alt = np.where(np.arange(1, L) % 2 == 0, -1.0, 1.0)  # (-1)^(i+1)
    F[1:] = np.where(res, math.sqrt(T / 2), T * math.sqrt(2 * T) * alt * omega * math.sin(T * omega) / den)
    return SpectralVec(F, T, f"cos({omega:g}t)")


def _rng(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, index])))


def spectral_white_noise(sigma: float, L: int, seed: int, index: int = 0, T: float = 1.0) -> SpectralVec:
    """sigma times a vector of i.i.d. standard normals.

    The stream is keyed by ``(seed, index)`` alone, and coefficient i is the
    i-th draw of that stream, so a shorter vector is a prefix of a longer one.
    """
    if sigma < 0:
        raise ValueError(f"sigma must be nonnegative, got {sigma}")
    q = _rng(seed, index).standard_normal(L)
    return SpectralVec(sigma * q, T, f"noise[{seed},{index}]")


@lru_cache(maxsize=4)
def _noise_batch(seed: int, L: int, start: int, count: int) -> np.ndarray:
    Q = np.empty((L, count))
    for k in range(count):
        Q[:, k] = _rng(seed, start + k).standard_normal(L)
    Q.flags.writeable = False
    return Q


def white_noise_batch(L: int, seed: int, count: int, start: int = 0) -> np.ndarray:
    """Unit-intensity noise vectors for realizations ``start .. start+count-1`` as columns."""
    return _noise_batch(int(seed), int(L), int(start), int(count))


def combine(terms: Iterable[tuple[float, SpectralVec]], label: str = "") -> SpectralVec:
    """Linear combination sum_k a_k F_k of vectors sharing (T, L)."""
    terms = list(terms)
    if not terms:
        raise ValueError("combine needs at least one term")
    T, L = terms[0][1].T, terms[0][1].L
    out = np.zeros(L)
    for a, vec in terms:
        if vec.L != L or vec.T != T:
            raise ValueError(f"shape mismatch: ({vec.T}, {vec.L}) vs ({T}, {L})")
        out += a * vec.coeffs
    return SpectralVec(out, T, label)
