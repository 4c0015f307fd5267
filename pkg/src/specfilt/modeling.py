"""Filtering experiments in the spectral domain.

Input G = U + V, output X = W G, delay-compensated output X* = S X where S
shifts by the phase delay tau at the signal frequency, and errors measured on
[0, T - tau] through the indicator-gain matrix A:

    error          sqrt((X* - U)^T A (X* - U))
    apriori        sqrt(V^T A V)
    apriori_upper  sqrt(V^T V)
"""

from __future__ import annotations

import enum
import math
import multiprocessing
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .basis import Extension
from .blocks import BlockMatrix, derivative_matrix, indicator_gain_matrix, integral_matrix, shift_matrix
from .exceptions import NumericalError
from .filters import FactoredOperator, FilterDesign, Operand, PreparedOperator, ntf_factored, phase_delay
from .signals import (
    SpectralVec,
    combine,
    spectral_cos,
    spectral_sin,
    spectral_white_noise,
    white_noise_batch,
)

#: Quadratic forms below this are a numerical failure; above it negatives clamp to zero.
NEGATIVE_QF_TOL = -1e-12
#: Realizations per Monte Carlo work chunk.
MC_CHUNK = 1000


@dataclass(frozen=True)
class Tone:
    kind: str
    omega: float

    def __post_init__(self):
        if self.kind not in ("sin", "cos"):
            raise ValueError(f"tone kind must be 'sin' or 'cos', got {self.kind!r}")
        if not self.omega > 0:
            raise ValueError(f"tone frequency must be positive, got {self.omega}")

    def spectral(self, T: float, L: int) -> SpectralVec:
        fn = spectral_sin if self.kind == "sin" else spectral_cos
        return fn(self.omega, T, L)

    def __call__(self, t):
        fn = np.sin if self.kind == "sin" else np.cos
        return fn(self.omega * np.asarray(t, dtype=float))


class NoiseKind(enum.Enum):
    DETERMINISTIC = "deterministic"
    RANDOM = "random"
    NONE = "none"


@dataclass(frozen=True)
class NoiseSpec:
    kind: NoiseKind = NoiseKind.DETERMINISTIC
    sigma: float = 0.2
    tones: tuple = (
        Tone("sin", 78 * math.pi),
        Tone("cos", 95 * math.pi),
        Tone("sin", 112 * math.pi),
    )

    def __post_init__(self):
        object.__setattr__(self, "kind", NoiseKind(self.kind))
        object.__setattr__(self, "tones", tuple(self.tones))
        if not self.sigma >= 0:
            raise ValueError(f"sigma must be nonnegative, got {self.sigma}")

    @classmethod
    def random(cls, sigma: float = 0.01) -> "NoiseSpec":
        return cls(NoiseKind.RANDOM, sigma, ())

    @classmethod
    def none(cls) -> "NoiseSpec":
        return cls(NoiseKind.NONE, 0.0, ())

    def spectral(self, T: float, L: int) -> SpectralVec:
        """Deterministic noise vector; zero for ``NONE``."""
        if self.kind is NoiseKind.RANDOM:
            raise ValueError("random noise has no single spectral vector; use run_monte_carlo")
        if self.kind is NoiseKind.NONE or not self.tones:
            return SpectralVec(np.zeros(L), T, "v")
        v = combine([(1.0, tone.spectral(T, L)) for tone in self.tones])
        return SpectralVec(self.sigma * v.coeffs, T, "v")

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind is NoiseKind.RANDOM:
            raise ValueError("white noise is not pointwise evaluable")
        out = np.zeros_like(t)
        for tone in self.tones:
            out = out + tone(t)
        return self.sigma * out


@dataclass(frozen=True)
class ExperimentConfig:
    design: FilterDesign
    T: float = 1.0
    L: int = 128
    signal: Tone = Tone("sin", 10 * math.pi)
    noise: NoiseSpec = field(default_factory=NoiseSpec)
    M: int = 10_000
    seed: int = 0
    shift_mode: Extension = Extension.NATURAL

    def __post_init__(self):
        object.__setattr__(self, "shift_mode", Extension(self.shift_mode))
        if not self.T > 0:
            raise ValueError(f"T must be positive, got {self.T}")
        if int(self.L) != self.L or self.L < 1:
            raise ValueError(f"L must be a positive integer, got {self.L}")
        if int(self.M) != self.M or self.M < 1:
            raise ValueError(f"M must be a positive integer, got {self.M}")

    def input_function(self, t):
        """g(t) = u(t) + v(t) for deterministic noise."""
        return self.signal(t) + self.noise(t)


@dataclass(frozen=True)
class ErrorReport:
    """Errors of one experiment cell.

    For Monte Carlo runs each value is the mean over ``M`` realizations and the
    ``*_std`` fields hold the biased standard deviation; deterministic runs
    have ``M == 1`` and zero deviations.
    """

    error: float
    apriori: float
    apriori_upper: float
    tau: float
    L: int
    M: int = 1
    error_std: float = 0.0
    apriori_std: float = 0.0
    apriori_upper_std: float = 0.0


@lru_cache(maxsize=8)
def _base_block(T: float, L: int, inverse: bool) -> BlockMatrix:
    return integral_matrix(T, L) if inverse else derivative_matrix(T, L)


def blocks_for(op: FactoredOperator) -> BlockMatrix:
    """Cached P (or P^-1 for high-pass operands) matching the operator's basis."""
    return _base_block(op.T, op.L, op.operand is Operand.SCALED_INV_P)


def apply_filter(op: FactoredOperator, G: SpectralVec, blocks=None) -> SpectralVec:
    """X = W G by sequential factor solves."""
    if G.L != op.L:
        raise ValueError(f"input has L={G.L}, operator has L={op.L}")
    X = PreparedOperator(op, blocks if blocks is not None else blocks_for(op)).apply(G.coeffs)
    return SpectralVec(X, G.T, "x")


def compensate_delay(S: BlockMatrix, X: SpectralVec) -> SpectralVec:
    """X* = S X."""
    if S.L != X.L:
        raise ValueError(f"shift matrix is {S.L}x{S.L}, vector has L={X.L}")
    return SpectralVec(S.data @ X.coeffs, X.T, "x*")


def quadratic_form(D: np.ndarray, A: np.ndarray) -> np.ndarray:
    """D^T (A D), column-wise for a matrix D; small negatives are clamped to zero."""
    D = np.asarray(D, dtype=float)
    A = np.asarray(A, dtype=float)
    if D.ndim == 1:
        value = np.array(D @ (A @ D))
    else:
        value = np.einsum("im,im->m", D, A @ D)
    if np.any(value < NEGATIVE_QF_TOL):
        raise NumericalError(f"negative quadratic form {value.min():.3e}")
    return np.maximum(value, 0.0)


def error_metric(X_star: SpectralVec, U: SpectralVec, A: BlockMatrix) -> float:
    """sqrt((X* - U)^T A (X* - U))."""
    if X_star.L != U.L or A.L != U.L:
        raise ValueError("shape mismatch between X*, U and A")
    return float(np.sqrt(quadratic_form(X_star.coeffs - U.coeffs, A.data)))


def apriori_errors(V: SpectralVec, A: BlockMatrix) -> tuple[float, float]:
    """(sqrt(V^T A V), sqrt(V^T V))."""
    if A.L != V.L:
        raise ValueError("shape mismatch between V and A")
    return float(np.sqrt(quadratic_form(V.coeffs, A.data))), V.norm()


@dataclass
class _Setup:
    U: SpectralVec
    op: PreparedOperator
    S: BlockMatrix
    A: BlockMatrix
    tau: float


def _setup(config: ExperimentConfig) -> _Setup:
    T, L = config.T, config.L
    tau = phase_delay(config.design, config.signal.omega)
    if not 0.0 <= tau < T:
        raise NumericalError(f"phase delay {tau} outside [0, T) cannot be compensated")
    op = ntf_factored(config.design, T, L)
    return _Setup(
        U=config.signal.spectral(T, L),
        op=PreparedOperator(op, blocks_for(op)),
        S=shift_matrix(T, L, tau, config.shift_mode),
        A=indicator_gain_matrix(T, L, T - tau),
        tau=tau,
    )


def simulate(config: ExperimentConfig, realization: int = 0) -> dict:
    """Spectral vectors U, V, G, X and X* of one run.

    For random noise V is the realization with index ``realization``.
    """
    s = _setup(config)
    if config.noise.kind is NoiseKind.RANDOM:
        V = spectral_white_noise(config.noise.sigma, config.L, config.seed, realization, config.T)
    else:
        V = config.noise.spectral(config.T, config.L)
    G = combine([(1.0, s.U), (1.0, V)], "g")
    X = SpectralVec(s.op.apply(G.coeffs), config.T, "x")
    return {"u": s.U, "v": V, "g": G, "x": X, "x*": compensate_delay(s.S, X), "tau": s.tau}


def run_deterministic(config: ExperimentConfig) -> ErrorReport:
    if config.noise.kind is NoiseKind.RANDOM:
        raise ValueError("run_deterministic needs deterministic (or no) noise")
    s = _setup(config)
    V = config.noise.spectral(config.T, config.L)
    G = combine([(1.0, s.U), (1.0, V)], "g")
    X = SpectralVec(s.op.apply(G.coeffs), config.T, "x")
    err = error_metric(compensate_delay(s.S, X), s.U, s.A)
    e0, e0_plus = apriori_errors(V, s.A)
    return ErrorReport(err, e0, e0_plus, s.tau, config.L)


def _mc_chunk(s: _Setup, config: ExperimentConfig, start: int, count: int):
    Q = white_noise_batch(config.L, config.seed, count, start)
    V = config.noise.sigma * Q
    X = s.op.apply(s.U.coeffs[:, None] + V)
    D = s.S.data @ X - s.U.coeffs[:, None]
    err = np.sqrt(quadratic_form(D, s.A.data))
    e0 = np.sqrt(quadratic_form(V, s.A.data))
    e0_plus = np.sqrt(np.einsum("im,im->m", V, V))
    return err, e0, e0_plus


@lru_cache(maxsize=2)
def _cached_setup(config: ExperimentConfig) -> _Setup:
    return _setup(config)


def _mc_worker(config: ExperimentConfig, start: int, count: int):
    return _mc_chunk(_cached_setup(config), config, start, count)


def monte_carlo_samples(config: ExperimentConfig, threads: int = 1):
    """Per-realization (error, apriori, apriori_upper) arrays, ordered by realization index.

    ``threads > 1`` spreads the chunks of MC_CHUNK realizations over that
    many worker processes.
    """
    if config.noise.kind is not NoiseKind.RANDOM:
        raise ValueError("run_monte_carlo needs random noise")
    s = _setup(config)
    jobs = [(k, min(MC_CHUNK, config.M - k)) for k in range(0, config.M, MC_CHUNK)]
    workers = min(int(threads), len(jobs))
    if workers > 1:
        # Separate processes rather than threads: some OpenBLAS builds are not
        # reentrant and corrupt memory under concurrent calls.
        ctx = multiprocessing.get_context("spawn")
        with ProcessPoolExecutor(workers, mp_context=ctx) as pool:
            parts = list(pool.map(_mc_worker, [config] * len(jobs), *zip(*jobs)))
    else:
        parts = [_mc_chunk(s, config, *j) for j in jobs]
    err, e0, e0_plus = (np.concatenate(p) for p in zip(*parts))
    return err, e0, e0_plus, s.tau


def run_monte_carlo(config: ExperimentConfig, threads: int = 1) -> ErrorReport:
    """Means and biased standard deviations over ``config.M`` noise realizations.

    Realization j uses the noise stream keyed by ``(config.seed, j)``, so the
    same realizations are reused for every design and the result does not
    depend on the number of workers.
    """
    err, e0, e0_plus, tau = monte_carlo_samples(config, threads)
    return ErrorReport(
        error=float(err.mean()),
        apriori=float(e0.mean()),
        apriori_upper=float(e0_plus.mean()),
        tau=tau,
        L=config.L,
        M=config.M,
        error_std=float(err.std()),
        apriori_std=float(e0.std()),
        apriori_upper_std=float(e0_plus.std()),
    )


def run(config: ExperimentConfig, threads: int = 1) -> ErrorReport:
    if config.noise.kind is NoiseKind.RANDOM:
        return run_monte_carlo(config, threads)
    return run_deterministic(config)
