"""Problem definition, standing-assumption checks and derived scalars.

The scalar problem is the one-dimensional stochastic Hamiltonian boundary
value problem perturbed only in ``H22``::

    dx = [H21 x + (1 - lam) H22 y + H23 z] dt + [H31 x + H32 y + H33 z] dB
   -dy = [H11 x + H12 y + H13 z] dt - z dB,      x(0) = 0,  y(T) = 0

with spectral parameter ``rho = 1 - lam``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from ._backend import core
from .errors import (
    DegenerateCoefficients,
    InadmissibleRho,
    InvalidCoefficients,
    StructureViolation,
)

COEFFICIENT_KEYS = ("H11", "H12", "H13", "H21", "H22", "H23", "H31", "H32", "H33")


@dataclass(frozen=True)
class Coefficients:
    H11: float
    H12: float
    H13: float
    H21: float
    H22: float
    H23: float
    H31: float
    H32: float
    H33: float
    T: float

    def __post_init__(self):
        for key in COEFFICIENT_KEYS + ("T",):
            value = getattr(self, key)
            if not math.isfinite(value):
                raise InvalidCoefficients(f"{key} must be finite, got {value!r}")
        if not self.T > 0:
            raise InvalidCoefficients(f"T must be positive, got {self.T!r}")

    @classmethod
    def from_mapping(cls, values) -> "Coefficients":
        """Build from any mapping; absent ``H`` entries default to zero."""
        kwargs = {key: float(values.get(key, 0.0)) for key in COEFFICIENT_KEYS}
        return cls(T=float(values["T"]), **kwargs)

    def replace(self, **changes) -> "Coefficients":
        data = {key: getattr(self, key) for key in COEFFICIENT_KEYS + ("T",)}
        data.update(changes)
        return Coefficients(**data)

    @property
    def c0(self) -> float:
        """``H33 * H13^2``, the rho-independent part of ``q``."""
        return self.H33 * self.H13 * self.H13


@dataclass(frozen=True)
class SpectralParameter:
    rho: float
    lam: float

    @classmethod
    def from_rho(cls, rho: float) -> "SpectralParameter":
        return cls(rho=rho, lam=1.0 - rho)

    @classmethod
    def from_lambda(cls, lam: float) -> "SpectralParameter":
        return cls(rho=1.0 - lam, lam=lam)


@dataclass(frozen=True)
class MonotonicityReport:
    alpha: float
    eigenvalues: tuple[float, float, float]  # descending
    passes: bool


@dataclass(frozen=True)
class ReducedParams:
    p: float
    p_tilde: float
    r: float
    q_tilde: float
    rho0: float
    rho_star: float
    rho_max: float
    T: float


def symmetric_eigvals(S) -> tuple[float, float, float]:
    """Eigenvalues of a real symmetric 3x3 matrix, descending.

    Trigonometric solution of the characteristic cubic: shift by the mean
    eigenvalue, scale to a traceless matrix ``B`` with ``det(B)/2 = cos(3phi)``.
    Near a repeated eigenvalue ``acos`` amplifies rounding, so the pair that
    nearly coincides is accurate only to about ``sqrt(eps)`` times the scale.
    """
    a11, a12, a13 = S[0][0], S[0][1], S[0][2]
    a22, a23, a33 = S[1][1], S[1][2], S[2][2]
    off = a12 * a12 + a13 * a13 + a23 * a23
    if off == 0.0:
        return tuple(sorted((a11, a22, a33), reverse=True))
    mean = (a11 + a22 + a33) / 3.0
    b11, b22, b33 = a11 - mean, a22 - mean, a33 - mean
    scale = math.sqrt((b11 * b11 + b22 * b22 + b33 * b33 + 2.0 * off) / 6.0)
    b11, b22, b33 = b11 / scale, b22 / scale, b33 / scale
    b12, b13, b23 = a12 / scale, a13 / scale, a23 / scale
    det = (
        b11 * (b22 * b33 - b23 * b23)
        - b12 * (b12 * b33 - b23 * b13)
        + b13 * (b12 * b23 - b22 * b13)
    )
    half = min(1.0, max(-1.0, det / 2.0))
    phi = math.acos(half) / 3.0
    top = mean + 2.0 * scale * math.cos(phi)
    bottom = mean + 2.0 * scale * math.cos(phi + 2.0 * math.pi / 3.0)
    middle = 3.0 * mean - top - bottom
    return top, middle, bottom


def monotonicity_matrix(c: Coefficients) -> list[list[float]]:
    return [
        [-c.H11, -c.H12, -c.H13],
        [c.H21, c.H22, c.H23],
        [c.H31, c.H32, c.H33],
    ]


def validate_monotonicity(c: Coefficients) -> MonotonicityReport:
    """Largest ``alpha`` with ``sym(M) <= -alpha I`` for the monotonicity matrix ``M``."""
    M = monotonicity_matrix(c)
    S = [[0.5 * (M[i][j] + M[j][i]) for j in range(3)] for i in range(3)]
    eigs = symmetric_eigvals(S)
    alpha = -eigs[0]
    return MonotonicityReport(alpha=alpha, eigenvalues=eigs, passes=alpha > 0)


def validate_structure(c: Coefficients, tol: float = 1e-12) -> None:
    """Raise :class:`StructureViolation` unless ``H23 = -H33*H13`` (relative ``tol``)."""
    if tol < 0:
        raise ValueError("tol must be non-negative")
    product = c.H33 * c.H13
    residual = abs(c.H23 + product)
    if residual > tol * (1.0 + abs(product)):
        raise StructureViolation(residual)


def reduced_params(c: Coefficients) -> ReducedParams:
    if c.H11 == 0.0:
        raise DegenerateCoefficients("H11 must be nonzero")
    if c.H22 == 0.0:
        raise DegenerateCoefficients("H22 must be nonzero")
    p_tilde = 2.0 * c.H21 + c.H13 * c.H13
    rho0 = c.c0 / c.H22
    rho_star = p_tilde * p_tilde / (4.0 * c.H11 * c.H22)
    return ReducedParams(
        p=-p_tilde,
        p_tilde=p_tilde,
        r=-c.H11,
        q_tilde=c.H11,
        rho0=rho0,
        rho_star=rho_star,
        rho_max=rho0 + rho_star,
        T=c.T,
    )


def coefficients_at(P: ReducedParams, c: Coefficients, rho: float) -> tuple[float, float]:
    """``(q(rho), r_tilde(rho))`` with ``r_tilde = -q``."""
    q = -(rho * c.H22 - c.c0)
    return q, -q


def omega_theta(P: ReducedParams, c: Coefficients, rho: float) -> tuple[float, float]:
    """Frequency ``sqrt(rq - p^2/4)`` and phase ``arctan(p / sqrt(4rq - p^2))``.

    Raises :class:`InadmissibleRho` for ``rho >= rho_max`` or whenever the
    discriminant ``4rq - p^2`` is not positive.
    """
    if not rho < P.rho_max:
        raise InadmissibleRho(rho, P.rho_max)
    omega, theta = core.omega_theta(P.r, P.p, c.H22, c.c0, rho)
    if math.isnan(omega):
        raise InadmissibleRho(rho, P.rho_max)
    return omega, theta


def dual_hamiltonian(c: Coefficients, rho: float) -> list[list[float]]:
    """Legendre-dual Hamiltonian of the rho-perturbed system (symmetric 3x3)."""
    if c.H33 == 0.0:
        raise DegenerateCoefficients("H33 must be nonzero")
    inv = 1.0 / c.H33
    a11 = inv * c.H32 * c.H32 - rho * c.H22
    a12 = inv * c.H32 * c.H31 - c.H21
    a13 = -inv * c.H32
    a22 = inv * c.H31 * c.H31
    a23 = -inv * c.H31
    a33 = inv
    return [[a11, a12, a13], [a12, a22, a23], [a13, a23, a33]]


def dual_solution_map(c: Coefficients, x_t: float, y_t: float, z_t: float):
    """Map a dual-system state ``(x~, y~, z~)`` back to ``(x, y, z)``."""
    if c.H33 == 0.0:
        raise DegenerateCoefficients("H33 must be nonzero")
    inv = 1.0 / c.H33
    z = -inv * c.H32 * x_t - inv * c.H31 * y_t + inv * z_t
    return y_t, x_t, z
