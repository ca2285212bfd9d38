"""Numerical oracle for the Riccati terminal-value problems.

Nothing here touches the tangent forms: blow-up times come from integrating
``k' = q k^2 + p k + r`` backward from ``k(T) = 0`` with an adaptive
Dormand-Prince 5(4) pair, switching to ``w = 1/k`` near the pole and locating
the zero of ``w`` on the dense output.  The only exception is
:func:`crosscheck`, whose purpose is comparing the two routes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from ._backend import core
from .errors import (
    BlowUpBeforeTEnd,
    InsufficientSamples,
    MaxStepsExceeded,
    NoBlowUpWithinHorizon,
    StepUnderflow,
)
from .model import Coefficients, ReducedParams
from .riccati import RiccatiCoeffs, blowup_dual, blowup_primal, dual_coeffs, primal_coeffs


@dataclass(frozen=True)
class IntegratorOptions:
    """Oracle settings.  ``horizon`` and ``refine_tol`` default to ``50 T``
    and ``1e-10 T`` when left as ``None``."""

    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    k_switch: float = 1e3
    horizon: float | None = None
    max_steps: int = 10**7
    refine_tol: float | None = None

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("tolerances must be positive")
        if not self.k_switch > 1:
            raise ValueError("k_switch must exceed 1")
        if self.horizon is not None and not self.horizon > 0:
            raise ValueError("horizon must be positive")
        if self.refine_tol is not None and not self.refine_tol > 0:
            raise ValueError("refine_tol must be positive")
        if self.max_steps < 1:
            raise ValueError("max_steps must be at least 1")

    def resolved(self, T: float) -> "IntegratorOptions":
        return replace(
            self,
            horizon=50.0 * T if self.horizon is None else self.horizon,
            refine_tol=1e-10 * T if self.refine_tol is None else self.refine_tol,
        )


@dataclass(frozen=True)
class BlowUpEstimate:
    t_star: float
    uncertainty: float
    chart_switches: int
    steps: int


@dataclass
class Trajectory:
    """Backward solution samples with dense output.

    ``t`` is decreasing from ``T``; ``k`` holds the solution values.
    """

    T: float
    t: np.ndarray
    k: np.ndarray
    _steps: list = field(default_factory=list, repr=False)

    def __len__(self):
        return len(self.t)

    def pairs(self) -> list[tuple[float, float]]:
        return list(zip(self.t.tolist(), self.k.tolist()))

    def __call__(self, t: float) -> float:
        """Dense-output value ``k(t)`` anywhere on the integrated span."""
        s = self.T - t
        if not self._steps:
            raise ValueError("trajectory carries no dense output")
        starts = [rec[0] for rec in self._steps]
        i = int(np.searchsorted(starts, s, side="right")) - 1
        i = min(max(i, 0), len(self._steps) - 1)
        s0, h, chart, *coef = self._steps[i]
        if not (-1e-12 * max(1.0, abs(s)) <= s - s0 <= h * (1 + 1e-12)):
            raise ValueError(f"t={t!r} outside the integrated span")
        y = core.dense_eval(*coef, (s - s0) / h)
        return y if chart == 0 else 1.0 / y


def _march(rc: RiccatiCoeffs, s_end: float, opts: IntegratorOptions, keep_steps: bool):
    return core.march(
        rc.q, rc.p, rc.r, s_end,
        opts.rel_tol, opts.abs_tol, opts.k_switch,
        opts.max_steps, opts.refine_tol, keep_steps,
    )


def _raise_for(status: int, s: float, steps: int):
    if status == core.UNDERFLOW:
        raise StepUnderflow(f"step size underflow at s={s!r}")
    if status == core.MAX_STEPS:
        raise MaxStepsExceeded(f"gave up after {steps} steps at s={s!r}")


def _build_trajectory(T: float, records) -> Trajectory:
    ts = [T]
    ks = [0.0]
    for s0, h, ch, c0, c1, c2, c3, c4 in records:
        y1 = c0 + c1  # dense polynomial at theta = 1
        ts.append(T - (s0 + h))
        ks.append(y1 if ch == 0 else 1.0 / y1)
    return Trajectory(T=T, t=np.array(ts), k=np.array(ks), _steps=list(records))


def integrate_backward(
    rc: RiccatiCoeffs,
    T: float,
    t_end: float,
    opts: IntegratorOptions = IntegratorOptions(),
    samples: int | None = None,
) -> Trajectory:
    """Integrate from ``k(T) = 0`` down to ``t_end``.

    Without ``samples`` the trajectory holds one sample per accepted step;
    with ``samples = m`` it holds ``m`` points spaced uniformly on
    ``[t_end, T]`` taken from the dense output.
    """
    if t_end > T:
        raise ValueError("t_end must not exceed T")
    opts = opts.resolved(T)
    if t_end == T:
        return Trajectory(T=T, t=np.array([T]), k=np.array([0.0]))
    status, s, _, _, steps, _, records, s_lo, s_hi = _march(rc, T - t_end, opts, True)
    if status == core.CROSSED:
        partial = _build_trajectory(T, records[:-1])
        raise BlowUpBeforeTEnd(T - 0.5 * (s_lo + s_hi), partial)
    _raise_for(status, s, steps)
    traj = _build_trajectory(T, records)
    if samples is None:
        return traj
    if samples < 2:
        raise ValueError("samples must be at least 2")
    grid = np.linspace(T, t_end, samples)
    values = np.array([traj(t) for t in grid])
    return Trajectory(T=T, t=grid, k=values, _steps=traj._steps)


def detect_blowup(
    rc: RiccatiCoeffs, T: float, opts: IntegratorOptions = IntegratorOptions()
) -> BlowUpEstimate:
    """Locate the first pole of the backward solution within ``opts.horizon``."""
    opts = opts.resolved(T)
    status, s, _, _, steps, switches, _, s_lo, s_hi = _march(rc, opts.horizon, opts, False)
    if status == core.REACHED_END:
        raise NoBlowUpWithinHorizon(f"no pole within horizon {opts.horizon!r} of T")
    _raise_for(status, s, steps)
    return BlowUpEstimate(
        t_star=T - 0.5 * (s_lo + s_hi),
        uncertainty=0.5 * (s_hi - s_lo),
        chart_switches=switches,
        steps=steps,
    )


def _fd_weights(x0: float, xs) -> list[float]:
    # derivative weights of the Lagrange interpolant through xs, evaluated at x0
    weights = []
    for j, xj in enumerate(xs):
        others = [x for m, x in enumerate(xs) if m != j]
        denom = math.prod(xj - x for x in others)
        total = 0.0
        for i in range(len(others)):
            total += math.prod(x0 - x for m, x in enumerate(others) if m != i)
        weights.append(total / denom)
    return weights


def residual_scan(trajectory, rc: RiccatiCoeffs) -> float:
    """Largest normalised ODE residual over interior samples.

    The slope at each interior sample is the derivative of the interpolant
    through five neighbouring samples (off-centre next to the ends; three
    when fewer than five samples exist), compared with
    ``q k^2 + p k + r`` and scaled by ``1 + |q| k^2``.  Accepts a
    :class:`Trajectory` or any sequence of ``(t, k)`` pairs.
    """
    if isinstance(trajectory, Trajectory):
        ts, ks = trajectory.t.tolist(), trajectory.k.tolist()
    else:
        ts = [float(t) for t, _ in trajectory]
        ks = [float(k) for _, k in trajectory]
    m = len(ts)
    if m < 3:
        raise InsufficientSamples(f"need at least 3 samples, got {m}")
    worst = 0.0
    for i in range(1, m - 1):
        if m < 5:
            lo, hi = i - 1, i + 2
        else:
            lo = min(max(i - 2, 0), m - 5)
            hi = lo + 5
        xs = ts[lo:hi]
        w = _fd_weights(ts[i], xs)
        slope = sum(wj * kj for wj, kj in zip(w, ks[lo:hi]))
        k = ks[i]
        worst = max(worst, abs(slope - rc.rhs(k)) / (1.0 + abs(rc.q) * k * k))
    return worst


@dataclass(frozen=True)
class CrosscheckReport:
    rho: float
    primal_closed: float
    primal_oracle: float
    dual_closed: float
    dual_oracle: float
    primal_gap: float
    dual_gap: float
    primal_tol: float
    dual_tol: float

    @property
    def passed(self) -> bool:
        return self.primal_gap <= self.primal_tol and self.dual_gap <= self.dual_tol


def crosscheck(
    P: ReducedParams,
    c: Coefficients,
    rho: float,
    opts: IntegratorOptions = IntegratorOptions(),
) -> CrosscheckReport:
    """Compare closed-form and integrated blow-up times at ``rho``.

    The search horizon is widened to four times the longer closed-form
    duration when that exceeds ``opts.horizon``; the located pole itself
    never sees the closed form.
    """
    bp = blowup_primal(P, c, rho)
    bd = blowup_dual(P, c, rho)
    opts = opts.resolved(c.T)
    need = 4.0 * max(bp.delta, bd.delta)
    if opts.horizon < need:
        opts = replace(opts, horizon=need)
    ep = detect_blowup(primal_coeffs(P, c, rho), c.T, opts)
    ed = detect_blowup(dual_coeffs(P, c, rho), c.T, opts)
    return CrosscheckReport(
        rho=rho,
        primal_closed=bp.t_star,
        primal_oracle=ep.t_star,
        dual_closed=bd.t_star,
        dual_oracle=ed.t_star,
        primal_gap=abs(ep.t_star - bp.t_star),
        dual_gap=abs(ed.t_star - bd.t_star),
        primal_tol=1e-6 * (1.0 + bp.delta),
        dual_tol=1e-6 * (1.0 + bd.delta),
    )
