"""Spectral solver for one-dimensional stochastic Hamiltonian boundary-value problems.

Eigenvalues come from the blow-up times of a primal/dual pair of Riccati
terminal-value problems; an independent ODE integrator cross-checks them.
"""
__version__ = "0.1.0"

from ._backend import BACKEND
from .errors import *  # noqa: F401,F403
from .model import (
    Coefficients,
    MonotonicityReport,
    ReducedParams,
    SpectralParameter,
    coefficients_at,
    dual_hamiltonian,
    dual_solution_map,
    omega_theta,
    reduced_params,
    validate_monotonicity,
    validate_structure,
)
from .oracle import (
    BlowUpEstimate,
    IntegratorOptions,
    Trajectory,
    crosscheck,
    detect_blowup,
    integrate_backward,
    residual_scan,
)
from .riccati import (
    BlowUp,
    Kind,
    RiccatiCoeffs,
    blowup_dual,
    blowup_primal,
    deltas,
    dual_coeffs,
    k_closed,
    k_tilde_closed,
    primal_coeffs,
)
from .spectrum import (
    AsymptoticsReport,
    EigenvalueRecord,
    PeriodVerdict,
    asymptotics,
    chain_times,
    counting_value,
    eigenvalue,
    period_classify,
    solve_rho,
    spectrum_sweep,
)
