import math

import numpy as np
import pytest

from hamspec.errors import InadmissibleRho, OutsideDomain
from hamspec.model import reduced_params
from hamspec.riccati import (
    blowup_dual,
    blowup_primal,
    deltas,
    dual_coeffs,
    k_closed,
    k_tilde_closed,
    phase_residuals,
    primal_coeffs,
)

from conftest import INSTANCE_A, INSTANCE_B, random_instances
from oracles import scipy_pole

PI = math.pi


def admissible_cases():
    cases = []
    for c in [INSTANCE_A, INSTANCE_B] + random_instances(6, seed=5):
        P = reduced_params(c)
        for gap in np.logspace(-2, 2, 5):
            cases.append((c, P, P.rho_max - gap))
    return cases


CASES = admissible_cases()


class TestClosedForms:
    def test_k_examples(self, inst_a):
        c, P = inst_a
        assert k_closed(P, c, -1.0, c.T) == 0.0
        assert k_closed(P, c, -1.0, c.T - PI / 4) == pytest.approx(1.0, abs=1e-15)
        with pytest.raises(OutsideDomain):
            k_closed(P, c, -1.0, c.T - PI / 2)

    def test_k_tilde_examples(self, inst_a, inst_b):
        c, P = inst_a
        assert k_tilde_closed(P, c, -1.0, c.T) == 0.0
        assert k_tilde_closed(P, c, -1.0, c.T - PI / 4) == pytest.approx(-1.0, abs=1e-15)
        c, P = inst_b
        assert k_tilde_closed(P, c, 0.0, c.T) == pytest.approx(0.0, abs=1e-15)

    def test_inadmissible(self, inst_a):
        c, P = inst_a
        for fn in (k_closed, k_tilde_closed):
            with pytest.raises(InadmissibleRho):
                fn(P, c, 0.0, c.T)
        with pytest.raises(InadmissibleRho):
            deltas(P, c, 1.0)

    def test_terminal_conditions(self):
        for c, P, rho in CASES:
            tol = 1e-13 * (1 + abs(P.p / (2 * primal_coeffs(P, c, rho).q)))
            assert abs(k_closed(P, c, rho, c.T)) <= tol
            assert abs(k_tilde_closed(P, c, rho, c.T)) <= tol

    @pytest.mark.parametrize("kind", ["primal", "dual"])
    def test_ode_residual(self, kind):
        for c, P, rho in CASES:
            if kind == "primal":
                b, rc, fn = blowup_primal(P, c, rho), primal_coeffs(P, c, rho), k_closed
            else:
                b, rc, fn = blowup_dual(P, c, rho), dual_coeffs(P, c, rho), k_tilde_closed
            h = 1e-6 * c.T
            ts = np.linspace(b.t_star + 0.05 * b.delta, c.T, 51)[1:]
            for t in ts:
                t = min(t, c.T - h)
                k = fn(P, c, rho, t)
                slope = (fn(P, c, rho, t + h) - fn(P, c, rho, t - h)) / (2 * h)
                assert abs(slope - rc.rhs(k)) <= 1e-6 * (1 + abs(rc.q) * k * k)

    def test_pole_divergence(self, inst_a, inst_b):
        for c, P, rho in [(*inst_a, -1.0), (*inst_b, 0.0)]:
            b = blowup_primal(P, c, rho)
            vals = [abs(k_closed(P, c, rho, b.t_star + eps * b.delta)) for eps in (1e-2, 1e-3, 1e-4)]
            for eps, v in zip((1e-2, 1e-3, 1e-4), vals):
                assert v >= 1 / (10 * eps)
            assert vals[0] < vals[1] < vals[2]


class TestBlowUp:
    def test_instance_a(self, inst_a):
        c, P = inst_a
        b = blowup_primal(P, c, -1.0)
        assert b.delta == pytest.approx(PI / 2, rel=1e-15)
        assert b.t_star == pytest.approx(PI / 2, rel=1e-15)
        assert blowup_primal(P, c, -4.0).delta == pytest.approx(PI / 4, rel=1e-15)
        assert blowup_dual(P, c, -1.0).delta == pytest.approx(PI / 2, rel=1e-15)
        assert blowup_dual(P, c, -100.0).delta == pytest.approx(PI / 20, rel=1e-15)

    def test_instance_b_against_scipy(self, inst_b):
        # frozen from tests/oracles.scipy_pole and direct evaluation of omega, theta
        c, P = inst_b
        bp, bd = blowup_primal(P, c, 0.0), blowup_dual(P, c, 0.0)
        assert bp.delta == pytest.approx(2.2718069047227214, rel=1e-13)
        assert bd.delta == pytest.approx(5.9962579404875305, rel=1e-13)
        rp, rd = primal_coeffs(P, c, 0.0), dual_coeffs(P, c, 0.0)
        assert scipy_pole(rp.q, rp.p, rp.r, c.T) == pytest.approx(bp.t_star, abs=1e-7)
        assert scipy_pole(rd.q, rd.p, rd.r, c.T) == pytest.approx(bd.t_star, abs=1e-7)

    def test_t_star_consistency(self):
        for c, P, rho in CASES:
            for b in (blowup_primal(P, c, rho), blowup_dual(P, c, rho)):
                assert b.delta > 0 and b.t_star == c.T - b.delta

    def test_phase_back_substitution(self):
        for c, P, rho in CASES:
            rp, rd = phase_residuals(P, c, rho)
            assert rp <= 1e-12 and rd <= 1e-12

    def test_sum_identity(self):
        for c, P, rho in CASES:
            d, dt = deltas(P, c, rho)
            omega = blowup_primal(P, c, rho).omega
            assert abs(d + dt - PI / omega) <= 1e-12 * (1 + PI / omega)

    def test_sum_instance_b(self, inst_b):
        c, P = inst_b
        d, dt = deltas(P, c, 0.0)
        assert d + dt == pytest.approx(PI / 0.3799671038392666, rel=1e-14)

    def test_symmetric_when_p_zero(self, inst_a):
        c, P = inst_a
        for rho in -np.logspace(-3, 5, 30):
            d, dt = deltas(P, c, rho)
            assert d == dt

    def test_durations_increase_with_rho(self):
        for c in [INSTANCE_A, INSTANCE_B] + random_instances(5, seed=2):
            P = reduced_params(c)
            grid = P.rho_max - np.logspace(3, -3, 200)
            d = np.array([deltas(P, c, r) for r in grid])
            assert np.all(np.diff(d[:, 0]) > 0) and np.all(np.diff(d[:, 1]) > 0)

    def test_limit_rho_to_minus_infinity(self):
        for c in [INSTANCE_A, INSTANCE_B]:
            P = reduced_params(c)
            scale = abs(c.H22 * c.H11)
            d = [blowup_primal(P, c, -(10.0**k) * scale).delta for k in range(1, 9)]
            assert all(a > b for a, b in zip(d, d[1:]))
            assert d[-1] <= 1e-3 * c.T
