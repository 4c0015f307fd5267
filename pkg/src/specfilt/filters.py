"""Butterworth, Linkwitz-Riley and Chebyshev I/II filters.

Poles and gains are those of the unit-cutoff low-pass prototype

    H(s) = gain / prod_k (s - s_k)

and a design with cutoff ``wc`` is evaluated as H(s/wc) (low-pass) or
H(wc/s) (high-pass).  The matching operator over the cosine basis is
W(P/wc) or W(wc P^-1), kept as a list of real linear and quadratic factors.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.linalg as sla

from .blocks import BlockKind, BlockMatrix, derivative_matrix, integral_matrix
from .exceptions import PoleProximityError, SingularFactorError


class Family(enum.Enum):
    BUTTERWORTH = "bw"
    LINKWITZ_RILEY = "lr"
    CHEBYSHEV1 = "ci"
    CHEBYSHEV2 = "cii"


class PassKind(enum.Enum):
    LOWPASS = "lowpass"
    HIGHPASS = "highpass"


def butterworth_ab(n: int) -> tuple[np.ndarray, np.ndarray]:
    """A_k = sin((2k-1)pi/2n), B_k = cos((2k-1)pi/2n) for k = 1..n."""
    if n < 1:
        raise ValueError(f"order must be >= 1, got {n}")
    theta = (-math.pi + 2.0 * math.pi * np.arange(1, n + 1)) / (2 * n)
    return np.sin(theta), np.cos(theta)


def butterworth_poles(n: int) -> np.ndarray:
    A, B = butterworth_ab(n)
    return -A + 1j * B


@dataclass(frozen=True)
class ChebyshevParams:
    lam: float
    alpha: float
    beta: float
    gamma: float


def chebyshev_params(n: int, eps: float) -> ChebyshevParams:
    if n < 1:
        raise ValueError(f"order must be >= 1, got {n}")
    if not eps > 0:
        raise ValueError(f"ripple factor must be positive, got {eps}")
    lam = math.asinh(1.0 / eps) / n
    return ChebyshevParams(lam, math.sinh(lam), math.cosh(lam), 2.0 ** (n - 1) * eps)


def chebyshev1_poles(n: int, eps: float) -> tuple[np.ndarray, float]:
    """Type I poles on the ellipse with semi-axes alpha (real) and beta (imaginary), and gamma."""
    p = chebyshev_params(n, eps)
    A, B = butterworth_ab(n)
    return -p.alpha * A + 1j * p.beta * B, p.gamma


def chebyshev2_poles(n: int, eps: float) -> tuple[np.ndarray, float]:
    """Type II poles, the reciprocals of the Type I poles, and gamma."""
    poles, gamma = chebyshev1_poles(n, eps)
    return 1.0 / poles, gamma


def chebyshev_t(n: int, z):
    """Chebyshev polynomial T_n(z) by the three-term recurrence (complex z allowed)."""
    z = np.asarray(z, dtype=complex)
    t0, t1 = np.ones_like(z), z
    if n == 0:
        return t0
    for _ in range(n - 1):
        t0, t1 = t1, 2 * z * t1 - t0
    return t1


@dataclass(frozen=True)
class FilterDesign:
    family: Family
    order: int
    ripple: float = 0.1
    cutoff: float = 1.0
    kind: PassKind = PassKind.LOWPASS

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        object.__setattr__(self, "kind", PassKind(self.kind))
        if int(self.order) != self.order or self.order < 1:
            raise ValueError(f"order must be a positive integer, got {self.order}")
        if self.family is Family.LINKWITZ_RILEY and self.order % 2:
            raise ValueError(f"Linkwitz-Riley order must be even, got {self.order}")
        if self.family in (Family.CHEBYSHEV1, Family.CHEBYSHEV2) and not self.ripple > 0:
            raise ValueError(f"ripple factor must be positive, got {self.ripple}")
        if not (self.cutoff > 0 and math.isfinite(self.cutoff)):
            raise ValueError(f"cutoff must be positive, got {self.cutoff}")

    @property
    def base_order(self) -> int:
        """Order of the pole set before Linkwitz-Riley squaring."""
        return self.order // 2 if self.family is Family.LINKWITZ_RILEY else self.order

    @cached_property
    def _base(self) -> tuple[np.ndarray, float]:
        m = self.base_order
        if self.family in (Family.BUTTERWORTH, Family.LINKWITZ_RILEY):
            return butterworth_poles(m), 1.0
        if self.family is Family.CHEBYSHEV1:
            poles, gamma = chebyshev1_poles(m, self.ripple)
            return poles, 1.0 / gamma
        poles, gamma = chebyshev2_poles(m, self.ripple)
        return poles, gamma

    @property
    def poles(self) -> np.ndarray:
        """Prototype (unit cutoff, low-pass) poles, with multiplicity."""
        poles = self._base[0]
        if self.family is Family.LINKWITZ_RILEY:
            poles = np.concatenate([poles, poles])
        return poles

    @property
    def gain(self) -> float:
        """Numerator constant of the prototype over its monic denominator."""
        return self._base[1]

    @property
    def scaled_poles(self) -> np.ndarray:
        """Poles of the cutoff-scaled (and, for high-pass, inverted) transfer function."""
        if self.kind is PassKind.LOWPASS:
            return self.cutoff * self.poles
        return self.cutoff / self.poles

    @property
    def chebyshev(self) -> ChebyshevParams | None:
        if self.family in (Family.CHEBYSHEV1, Family.CHEBYSHEV2):
            return chebyshev_params(self.order, self.ripple)
        return None

    def characteristic(self, z):
        """Prototype denominator prod_k (z - s_k)."""
        z = np.asarray(z, dtype=complex)
        out = np.ones_like(z)
        for p in self.poles:
            out = out * (z - p)
        return out

    def _argument(self, s):
        if self.kind is PassKind.LOWPASS:
            return s / self.cutoff
        return self.cutoff / s


def transfer_eval(design: FilterDesign, s):
    """Evaluate the cutoff-scaled transfer function at complex ``s``."""
    s = np.asarray(s, dtype=complex)
    if design.kind is PassKind.HIGHPASS and np.any(s == 0):
        raise PoleProximityError("high-pass transfer function evaluated at s = 0")
    den = design.characteristic(design._argument(s))
    if np.any(np.abs(den) < 1e-30):
        raise PoleProximityError(f"|denominator| < 1e-30 at s={s}")
    out = design.gain / den
    return complex(out) if out.ndim == 0 else out


def _factor_args(design: FilterDesign, omega: float) -> np.ndarray:
    """Arguments of each factor (z - s_k) at z = argument(i omega); each lies in (-pi/2, pi/2)."""
    z = design._argument(1j * omega)
    return np.angle(z - design.poles)


def phase(design: FilterDesign, omega: float) -> float:
    """Continuous (unwrapped) arg H(i omega), summed factor by factor."""
    return -float(np.sum(_factor_args(design, omega)))


def phase_delay(design: FilterDesign, omega: float) -> float:
    """tau_phi = -arg H(i omega) / omega."""
    if not omega > 0:
        raise ValueError(f"signal frequency must be positive, got {omega}")
    tau = -phase(design, omega) / omega
    if not math.isfinite(tau):
        raise PoleProximityError(f"phase delay undefined at omega={omega}")
    return tau


def group_delay(design: FilterDesign, omega: float) -> float:
    """tau_g = -d arg H(i omega)/d omega, differentiated analytically per pole."""
    if omega < 0:
        raise ValueError(f"frequency must be nonnegative, got {omega}")
    a = design.poles.real
    b = design.poles.imag
    wc = design.cutoff
    if design.kind is PassKind.LOWPASS:
        y = omega / wc - b
        dy = 1.0 / wc
    else:
        if omega == 0:
            raise ValueError("high-pass group delay undefined at omega = 0")
        y = -wc / omega - b
        dy = wc / omega**2
    return float(np.sum(-a * dy / (a**2 + y**2)))


def group_delay_fd(design: FilterDesign, omega: float, rel_step: float = 1e-6) -> float:
    """Central finite difference of the unwrapped phase."""
    h = rel_step * max(abs(omega), 1.0)
    return -(phase(design, omega + h) - phase(design, omega - h)) / (2 * h)


# -- operators over the cosine basis ---------------------------------------

class Operand(enum.Enum):
    P = "P"
    SCALED_P = "P/wc"
    SCALED_INV_P = "wc*P^-1"


@dataclass(frozen=True)
class Factor:
    """X + a E for ``coeffs == (a,)``, X^2 + a X + b E for ``coeffs == (a, b)``."""

    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) not in (1, 2):
            raise ValueError("factor must be linear or quadratic")
        if not all(np.isfinite(c) for c in self.coeffs):
            raise ValueError("factor coefficients must be finite")

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    def matrix(self, X: np.ndarray) -> np.ndarray:
        E = np.eye(X.shape[0], dtype=X.dtype)
        if self.degree == 1:
            return X + self.coeffs[0] * E
        a, b = self.coeffs
        return X @ X + a * X + b * E

    def __call__(self, z):
        if self.degree == 1:
            return z + self.coeffs[0]
        return z * z + self.coeffs[0] * z + self.coeffs[1]


@dataclass(frozen=True)
class FactoredOperator:
    """W = gain * prod(numerator)(X) * prod(denominator)(X)^-1 with X the operand matrix."""

    gain: float
    denominator: tuple
    numerator: tuple = ()
    operand: Operand = Operand.P
    cutoff: float = 1.0
    T: float = 1.0
    L: int = 128

    @property
    def degree(self) -> int:
        return sum(f.degree for f in self.denominator)

    def base_block(self) -> BlockMatrix:
        if self.operand is Operand.SCALED_INV_P:
            return integral_matrix(self.T, self.L)
        return derivative_matrix(self.T, self.L)

    def operand_matrix(self, blocks: BlockMatrix | np.ndarray | None = None) -> np.ndarray:
        """X built from ``blocks`` (P, or P^-1 for high-pass); built fresh when omitted."""
        base = self.base_block() if blocks is None else blocks
        if isinstance(base, BlockMatrix):
            expected = BlockKind.INTEGRAL if self.operand is Operand.SCALED_INV_P else BlockKind.DERIVATIVE
            if base.kind not in (expected, BlockKind.COMPOSITE):
                raise ValueError(f"operand {self.operand.value} needs a {expected.value} block, got {base.kind.value}")
        M = np.asarray(base, dtype=float)
        if M.shape != (self.L, self.L):
            raise ValueError(f"block is {M.shape}, operator expects L={self.L}")
        if self.operand is Operand.SCALED_P:
            return M / self.cutoff
        if self.operand is Operand.SCALED_INV_P:
            return self.cutoff * M
        return M


def identity_operator(T: float, L: int) -> FactoredOperator:
    return FactoredOperator(1.0, (), (), Operand.P, 1.0, T, L)


def _real_factors(design: FilterDesign) -> list[Factor]:
    """Quadratic factors by ascending k, then the real factor for odd order."""
    m = design.base_order
    A, _ = butterworth_ab(m)
    factors = []
    if design.family in (Family.BUTTERWORTH, Family.LINKWITZ_RILEY):
        factors = [Factor((2 * A[k], 1.0)) for k in range(m // 2)]
        if m % 2:
            factors.append(Factor((1.0,)))
    else:
        p = chebyshev_params(m, design.ripple)
        _, B = butterworth_ab(m)
        rho2 = (p.alpha * A) ** 2 + (p.beta * B) ** 2
        if design.family is Family.CHEBYSHEV1:
            factors = [Factor((2 * p.alpha * A[k], rho2[k])) for k in range(m // 2)]
            if m % 2:
                factors.append(Factor((p.alpha,)))
        else:
            factors = [Factor((2 * p.alpha * A[k] / rho2[k], 1.0 / rho2[k])) for k in range(m // 2)]
            if m % 2:
                factors.append(Factor((1.0 / p.alpha,)))
    if design.family is Family.LINKWITZ_RILEY:
        factors = factors + factors
    return factors


def ntf_factored(design: FilterDesign, T: float = 1.0, L: int = 128) -> FactoredOperator:
    """Real factored form of the design's operator over the cosine basis of size L."""
    operand = Operand.SCALED_P if design.kind is PassKind.LOWPASS else Operand.SCALED_INV_P
    return FactoredOperator(
        gain=design.gain,
        denominator=tuple(_real_factors(design)),
        operand=operand,
        cutoff=design.cutoff,
        T=T,
        L=L,
    )


class PreparedOperator:
    """LU factorizations of every denominator factor, ready for repeated solves."""

    def __init__(self, op: FactoredOperator, blocks=None):
        self.op = op
        X = op.operand_matrix(blocks)
        self._numerator = [f.matrix(X) for f in op.numerator]
        self._lu = []
        for k, f in enumerate(op.denominator):
            with warnings.catch_warnings():
                # singularity is reported below with the factor index
                warnings.simplefilter("ignore", sla.LinAlgWarning)
                lu, piv = sla.lu_factor(f.matrix(X), check_finite=False)
            d = np.abs(np.diag(lu))
            if not np.all(np.isfinite(d)) or d.min() <= np.finfo(float).eps * d.max():
                raise SingularFactorError(k)
            self._lu.append((lu, piv))

    def apply(self, G: np.ndarray) -> np.ndarray:
        """W @ G for a vector or a matrix of column vectors."""
        X = np.asarray(G, dtype=float)
        for N in self._numerator:
            X = N @ X
        for lu in self._lu:
            X = sla.lu_solve(lu, X, check_finite=False)
        return self.op.gain * X


def ntf_materialize(op: FactoredOperator, blocks=None) -> BlockMatrix:
    """Dense L x L matrix of the operator."""
    W = PreparedOperator(op, blocks).apply(np.eye(op.L))
    return BlockMatrix(W, op.T, BlockKind.COMPOSITE, label="W")


def ntf_complex_materialize(design: FilterDesign, T: float = 1.0, L: int = 128, blocks=None) -> np.ndarray:
    """Operator from the complex linear factors (X - s_k E)^-1, solved in complex arithmetic.

    Independent of the real-quadratic factor list; used as a two-form check.
    """
    X = ntf_factored(design, T, L).operand_matrix(blocks).astype(complex)
    E = np.eye(L, dtype=complex)
    W = E.copy()
    for p in design.poles:
        W = np.linalg.solve(X - p * E, W)
    W = design.gain * W
    if np.abs(W.imag).max() > 1e-8 * max(1.0, np.abs(W.real).max()):
        raise ArithmeticError("complex factor product has a non-negligible imaginary part")
    return W.real
