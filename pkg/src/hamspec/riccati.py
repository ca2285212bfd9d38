"""Tangent-form solutions of the primal and dual Riccati terminal-value problems.

Both equations are written as ``k' = q k^2 + p k + r`` with ``k(T) = 0``:

* primal:  ``(q, p, r) = (q(rho), p, -H11)``
* dual:    ``(q, p, r) = (H11, -p, -q(rho))``

On ``rho < rho_max`` both share the frequency ``omega`` and phase ``theta``
from :func:`hamspec.model.omega_theta`, and blow up after the durations
``(pi/2 + theta)/omega`` and ``(pi/2 - theta)/omega`` respectively.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import OutsideDomain
from .model import Coefficients, ReducedParams, coefficients_at, omega_theta

HALF_PI = 0.5 * math.pi


class Kind(enum.Enum):
    PRIMAL = "primal"
    DUAL = "dual"


@dataclass(frozen=True)
class RiccatiCoeffs:
    q: float
    p: float
    r: float
    kind: Kind = Kind.PRIMAL

    def rhs(self, k: float) -> float:
        return (self.q * k + self.p) * k + self.r


@dataclass(frozen=True)
class BlowUp:
    t_star: float
    delta: float
    omega: float
    theta: float


def primal_coeffs(P: ReducedParams, c: Coefficients, rho: float) -> RiccatiCoeffs:
    q, _ = coefficients_at(P, c, rho)
    return RiccatiCoeffs(q=q, p=P.p, r=P.r, kind=Kind.PRIMAL)


def dual_coeffs(P: ReducedParams, c: Coefficients, rho: float) -> RiccatiCoeffs:
    _, r_tilde = coefficients_at(P, c, rho)
    return RiccatiCoeffs(q=P.q_tilde, p=P.p_tilde, r=r_tilde, kind=Kind.DUAL)


def blowup_primal(P: ReducedParams, c: Coefficients, rho: float) -> BlowUp:
    omega, theta = omega_theta(P, c, rho)
    delta = (HALF_PI + theta) / omega
    return BlowUp(t_star=P.T - delta, delta=delta, omega=omega, theta=theta)


def blowup_dual(P: ReducedParams, c: Coefficients, rho: float) -> BlowUp:
    omega, theta = omega_theta(P, c, rho)
    delta = (HALF_PI - theta) / omega
    return BlowUp(t_star=P.T - delta, delta=delta, omega=omega, theta=theta)


def deltas(P: ReducedParams, c: Coefficients, rho: float) -> tuple[float, float]:
    """Primal and dual blow-up durations; they sum to ``pi/omega``."""
    return blowup_primal(P, c, rho).delta, blowup_dual(P, c, rho).delta


def _check_domain(t: float, b: BlowUp, T: float) -> None:
    if not (b.t_star < t <= T):
        raise OutsideDomain(f"t={t!r} not in ({b.t_star!r}, {T!r}]")


def k_closed(P: ReducedParams, c: Coefficients, rho: float, t: float) -> float:
    """Primal solution ``k(t)`` on ``(t_rho, T]``."""
    b = blowup_primal(P, c, rho)
    _check_domain(t, b, P.T)
    q, _ = coefficients_at(P, c, rho)
    root = 2.0 * b.omega  # sqrt(4rq - p^2)
    arg = b.omega * (P.T - t) + math.atan(-P.p / root)
    return -root / (2.0 * q) * math.tan(arg) - P.p / (2.0 * q)


def k_tilde_closed(P: ReducedParams, c: Coefficients, rho: float, t: float) -> float:
    """Dual solution ``k~(t)`` on ``(t~_rho, T]``."""
    b = blowup_dual(P, c, rho)
    _check_domain(t, b, P.T)
    qt, pt = P.q_tilde, P.p_tilde
    root = 2.0 * b.omega
    arg = 0.5 * root * (t - P.T) + math.atan(pt / root)
    return root / (2.0 * qt) * math.tan(arg) - pt / (2.0 * qt)


def phase_residuals(P: ReducedParams, c: Coefficients, rho: float) -> tuple[float, float]:
    """Plug both blow-up times back into their defining phase equations."""
    q, r_tilde = coefficients_at(P, c, rho)
    rq = P.r * q
    root = math.sqrt(4.0 * rq - P.p * P.p)
    bp = blowup_primal(P, c, rho)
    bd = blowup_dual(P, c, rho)
    primal = math.sqrt(rq - P.p * P.p / 4.0) * (P.T - bp.t_star) + math.atan(-P.p / root) - HALF_PI
    qr = P.q_tilde * r_tilde
    root_t = math.sqrt(4.0 * qr - P.p_tilde * P.p_tilde)
    dual = (
        math.sqrt(qr - P.p_tilde * P.p_tilde / 4.0) * (bd.t_star - P.T)
        + math.atan(P.p_tilde / root_t)
        + HALF_PI
    )
    return abs(primal), abs(dual)
