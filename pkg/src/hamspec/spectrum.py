"""Eigenvalues from the counting equation, plus asymptotic and period checks.

The n-th eigenvalue is ``lam_n = 1 - rho_n`` where ``rho_n`` is the unique
root of::

    F_n(rho) = n*Delta(rho) + (n-1)*Delta~(rho) - T
             = ((2n-1)*pi/2 + theta(rho)) / omega(rho) - T

``F_n`` is strictly increasing in ``rho`` on ``(-inf, rho_max)``.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from ._backend import core
from .errors import (
    BracketExpansionFailed,
    EmptyInput,
    InadmissibleRho,
    InvalidSign,
    RootOutOfClosedFormRange,
    SolveError,
)
from .model import Coefficients, ReducedParams, coefficients_at, omega_theta
from .riccati import deltas

STATUS_OK = "ok"
STATUS_OUT_OF_RANGE = "out_of_range"
STATUS_BRACKET_FAILED = "bracket_failed"

LOOSE_BRACKET_FROM = 10
RATIO_LIMIT_FROM = 50
MAX_DOUBLINGS = 200
MAX_BISECTIONS = 2000

PERIOD_CAVEAT = (
    "Holds only for sufficiently large n. The thresholds bound the statistic "
    "period of the eigenfunctions; no period is computed from sample paths."
)


@dataclass(frozen=True)
class EigenvalueRecord:
    n: int
    rho_n: float
    lambda_n: float
    delta: float
    delta_tilde: float
    counting_residual: float
    chain_residual: float
    ratio: float
    iterations: int
    status: str = STATUS_OK

    @property
    def ok(self) -> bool:
        return self.status == STATUS_OK

    @classmethod
    def failed(cls, n: int, status: str) -> "EigenvalueRecord":
        nan = math.nan
        return cls(n, nan, nan, nan, nan, nan, nan, nan, 0, status)


@dataclass(frozen=True)
class AsymptoticsReport:
    lower_bound: float
    upper_bound: float
    ratios: list[tuple[int, float]]
    omega_brackets_ok: bool
    bounds_ok_from: int | None


@dataclass(frozen=True)
class PeriodVerdict:
    lam: float
    n_less_than: int | None
    n_greater_than: int | None
    caveat: str = PERIOD_CAVEAT


def counting_value(P: ReducedParams, c: Coefficients, n: int, rho: float) -> float:
    if not rho < P.rho_max:
        raise InadmissibleRho(rho, P.rho_max)
    value = core.counting(n, c.T, P.r, P.p, c.H22, c.c0, rho)
    if math.isnan(value):
        raise InadmissibleRho(rho, P.rho_max)
    return value


def solve_rho(
    P: ReducedParams,
    c: Coefficients,
    n: int,
    tol_rho: float = 1e-12,
    tol_f: float | None = None,
) -> tuple[float, int]:
    """Root ``rho_n`` of ``F_n`` by bracket expansion and bisection.

    Returns ``(rho_n, bisection_iterations)``.
    """
    if n < 1:
        raise ValueError("n must be a positive integer")
    if tol_f is None:
        tol_f = 1e-10 * c.T
    scale = 1.0 + abs(P.rho_max)
    hi = P.rho_max - 1e-9 * scale
    f_hi = counting_value(P, c, n, hi)
    if f_hi < 0.0:
        raise RootOutOfClosedFormRange(n, f_hi)
    if f_hi == 0.0:
        return hi, 0
    for k in range(MAX_DOUBLINGS):
        lo = hi - 2.0**k * scale
        f_lo = counting_value(P, c, n, lo)
        if f_lo < 0.0:
            break
        if f_lo == 0.0:
            return lo, 0
    else:
        raise BracketExpansionFailed(f"no sign change for n={n} after {MAX_DOUBLINGS} doublings")
    rho, _, iterations = core.bisect_counting(
        n, c.T, P.r, P.p, c.H22, c.c0, lo, hi, tol_rho, tol_f, MAX_BISECTIONS
    )
    return rho, iterations


def chain_times(P: ReducedParams, c: Coefficients, n: int, rho: float) -> list[float]:
    """Interleaved blow-up chain ``t^0 = T > t^1 > ... > t^(2n-1)``."""
    d, dt = deltas(P, c, rho)
    T = c.T
    out = []
    for j in range(1, n + 1):
        out.append(T - (j - 1) * d - (j - 1) * dt)
        out.append(T - j * d - (j - 1) * dt)
    return out


def eigenvalue(P: ReducedParams, c: Coefficients, n: int, **solver_kw) -> EigenvalueRecord:
    rho, iterations = solve_rho(P, c, n, **solver_kw)
    d, dt = deltas(P, c, rho)
    lam = 1.0 - rho
    chain = chain_times(P, c, n, rho)
    return EigenvalueRecord(
        n=n,
        rho_n=rho,
        lambda_n=lam,
        delta=d,
        delta_tilde=dt,
        counting_residual=abs(counting_value(P, c, n, rho)),
        chain_residual=abs(chain[-1]),
        ratio=lam / (n * n),
        iterations=iterations,
    )


def _sweep_one(P, c, n):
    try:
        return eigenvalue(P, c, n)
    except RootOutOfClosedFormRange:
        return EigenvalueRecord.failed(n, STATUS_OUT_OF_RANGE)
    except SolveError:
        return EigenvalueRecord.failed(n, STATUS_BRACKET_FAILED)


def spectrum_sweep(
    P: ReducedParams, c: Coefficients, n_max: int, workers: int = 1
) -> list[EigenvalueRecord]:
    """Records for ``n = 1..n_max`` in index order; failures carry a status."""
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    indices = range(1, n_max + 1)
    if workers <= 1:
        return [_sweep_one(P, c, n) for n in indices]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        # map() yields in submission order regardless of completion order
        return list(pool.map(lambda n: _sweep_one(P, c, n), indices))


def growth_bounds(c: Coefficients) -> tuple[float, float]:
    """Lower/upper limits for ``lam_n / n^2``; their ratio is exactly 8."""
    denom = -c.H11 * c.H22 * c.T * c.T
    return math.pi**2 / (2.0 * denom), 4.0 * math.pi**2 / denom


def lambda_expansion_residual(P: ReducedParams, c: Coefficients, rec: EigenvalueRecord) -> float:
    """Residual of ``rq(rho_n) - p^2/4`` against its expansion in ``lam_n``."""
    q, _ = coefficients_at(P, c, rec.rho_n)
    rq = P.r * q
    lhs = rq - P.p * P.p / 4.0
    rhs = (
        (-c.H11 * c.H22) * rec.lambda_n
        + c.H11 * c.H22
        - c.H11 * c.H33 * c.H13 * c.H13
        - P.p_tilde * P.p_tilde / 4.0
    )
    return abs(lhs - rhs) / (1.0 + abs(rq))


def omega_bracket_ok(P: ReducedParams, c: Coefficients, rec: EigenvalueRecord, loose: bool = False) -> bool:
    """``(n-1)pi/T <= omega(rho_n) <= n pi/T`` (``(2n-1)pi/T`` when ``loose``)."""
    omega, _ = omega_theta(P, c, rec.rho_n)
    slack = 1e-12 * omega
    upper = (2 * rec.n - 1 if loose else rec.n) * math.pi / c.T
    lower = (rec.n - 1) * math.pi / c.T
    return lower - slack <= omega <= upper + slack


def asymptotics(P: ReducedParams, c: Coefficients, records) -> AsymptoticsReport:
    records = [rec for rec in records if rec.ok]
    if not records:
        raise EmptyInput("no successful eigenvalue records")
    lower, upper = growth_bounds(c)
    ratios = [(rec.n, rec.ratio) for rec in records]
    brackets = all(
        omega_bracket_ok(P, c, rec)
        and (rec.n < LOOSE_BRACKET_FROM or omega_bracket_ok(P, c, rec, loose=True))
        for rec in records
    )
    ok_from = None
    for n, ratio in reversed(ratios):
        if not lower <= ratio <= upper:
            break
        ok_from = n
    return AsymptoticsReport(
        lower_bound=lower,
        upper_bound=upper,
        ratios=ratios,
        omega_brackets_ok=brackets,
        bounds_ok_from=ok_from,
    )


def period_classify(P: ReducedParams, c: Coefficients, lam: float) -> PeriodVerdict:
    """Index thresholds bounding the statistic period of an eigenvalue.

    ``n_less_than`` is the smallest ``n`` with ``lam < n^2 * lower`` and
    ``n_greater_than`` the largest with ``lam > n^2 * upper`` (``None`` if
    no ``n >= 1`` qualifies).
    """
    if not -c.H11 * c.H22 > 0:
        raise InvalidSign("-H11*H22 must be positive")
    lower, upper = growth_bounds(c)

    n_less = 1 if lam < lower else max(1, math.ceil(math.sqrt(lam / lower)))
    while not lam < n_less * n_less * lower:
        n_less += 1
    while n_less > 1 and lam < (n_less - 1) ** 2 * lower:
        n_less -= 1

    n_greater = None
    if lam > upper:
        m = math.floor(math.sqrt(lam / upper))
        while m >= 1 and not lam > m * m * upper:
            m -= 1
        while lam > (m + 1) ** 2 * upper:
            m += 1
        n_greater = m if m >= 1 else None
    return PeriodVerdict(lam=lam, n_less_than=n_less, n_greater_than=n_greater)
