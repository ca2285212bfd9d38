"""Acceptance gate.

Each test records one PASS/FAIL line in ``conftest.ACCEPTANCE_LINES``; the
lines are printed as a block at the end of the pytest run.  Tolerances and
runtime budgets are fixed here and must not be relaxed.
"""
import math
import time

import numpy as np
import pytest

from hamspec import cli
from hamspec.model import reduced_params
from hamspec.oracle import crosscheck
from hamspec.riccati import (
    blowup_dual,
    blowup_primal,
    deltas,
    dual_coeffs,
    k_closed,
    k_tilde_closed,
    primal_coeffs,
)
from hamspec.spectrum import (
    counting_value,
    eigenvalue,
    omega_bracket_ok,
    period_classify,
    spectrum_sweep,
    growth_bounds,
)

from conftest import ACCEPTANCE_LINES, FIXTURES, INSTANCE_A, INSTANCE_B, random_instances

N_MAX = 400


def record(label, ok, detail):
    ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {label}: {detail}")
    assert ok, detail


@pytest.fixture(scope="module")
def sweeps():
    out = {}
    for name, c in (("A", INSTANCE_A), ("B", INSTANCE_B)):
        P = reduced_params(c)
        start = time.perf_counter()
        recs = spectrum_sweep(P, c, N_MAX)
        out[name] = (c, P, recs, time.perf_counter() - start)
    return out


def test_ac1_instance_a_closed_form():
    c = INSTANCE_A
    start = time.perf_counter()
    P = reduced_params(c)
    worst = max(
        abs(eigenvalue(P, c, n).lambda_n - (1.0 + (2 * n - 1) ** 2 / 4.0)) for n in range(1, 51)
    )
    elapsed = time.perf_counter() - start
    record(
        "AC1 Instance A eigenvalues n=1..50",
        worst <= 1e-8 and elapsed < 1.0,
        f"max |err| = {worst:.2e} (tol 1e-8), {elapsed:.3f}s (budget 1s)",
    )


def _extra_rhos(P):
    # ten admissible points spread from far below rho_max to close to it
    scale = 1.0 + abs(P.rho_max)
    return [P.rho_max - g * scale for g in np.logspace(2, -2, 10)]


def test_ac2_oracle_agreement():
    start = time.perf_counter()
    instances = [INSTANCE_A, INSTANCE_B] + random_instances(20, seed=7, need_indices=(1, 5, 20))
    checked = 0
    worst = 0.0
    failures = []
    for c in instances:
        P = reduced_params(c)
        rhos = [eigenvalue(P, c, n).rho_n for n in (1, 5, 20)] + _extra_rhos(P)
        for rho in rhos:
            rep = crosscheck(P, c, rho)
            checked += 1
            worst = max(worst, rep.primal_gap / rep.primal_tol, rep.dual_gap / rep.dual_tol)
            if not rep.passed:
                failures.append((c, rho))
    elapsed = time.perf_counter() - start
    record(
        "AC2 oracle agreement",
        not failures and checked == 22 * 13 and elapsed < 30.0,
        f"{checked} points, worst gap/tol = {worst:.2e}, {len(failures)} failures, "
        f"{elapsed:.2f}s (budget 30s)",
    )


def test_ac3_residuals(sweeps):
    worst_f = worst_chain = 0.0
    bad = 0
    elapsed = 0.0
    for c, P, recs, dt in sweeps.values():
        elapsed += dt
        for rec in recs:
            if not rec.ok:
                continue
            worst_f = max(worst_f, rec.counting_residual / c.T)
            worst_chain = max(worst_chain, rec.chain_residual / c.T)
            bad += rec.counting_residual > 1e-10 * c.T or rec.chain_residual > 1e-8 * c.T
    record(
        "AC3 counting and chain residuals n<=400",
        bad == 0 and elapsed < 10.0,
        f"max |F|/T = {worst_f:.2e} (tol 1e-10), max |t^(2n-1)|/T = {worst_chain:.2e} "
        f"(tol 1e-8), {elapsed:.2f}s (budget 10s)",
    )


def test_ac4_bounds(sweeps):
    outside = []
    info = []
    for name, (c, P, recs, _) in sweeps.items():
        lower, upper = growth_bounds(c)
        lo, hi = lower * (1 - 1e-3), upper * (1 + 1e-3)
        for rec in recs:
            if rec.n >= 10 and not (rec.ok and lo <= rec.ratio <= hi):
                outside.append((name, rec.n))
        limit = math.pi**2 / (-c.H11 * c.H22 * c.T**2)
        dev = max(abs(r.ratio / limit - 1.0) for r in recs if r.n >= 200)
        info.append(f"{name} limit dev {dev:.2%}")
    record(
        "AC4 ratio bracket n=10..400",
        not outside,
        f"{len(outside)} ratios outside bracket; informational: {', '.join(info)} (2% target)",
    )


def test_ac5_omega_bracket(sweeps):
    checked = bad = 0
    for c, P, recs, _ in sweeps.values():
        for rec in recs:
            if rec.ok:
                checked += 1
                bad += not omega_bracket_ok(P, c, rec)
    record("AC5 omega bracket", bad == 0 and checked > 0, f"{checked} records, {bad} violations")


def test_ac6_duration_monotonicity():
    failures = []
    for name, c in (("A", INSTANCE_A), ("B", INSTANCE_B)):
        P = reduced_params(c)
        grid = P.rho_max - np.logspace(3, -3, 200)
        assert np.all(np.diff(grid) > 0)
        d, dt = np.array([deltas(P, c, float(rho)) for rho in grid]).T
        if not (np.all(np.diff(d) > 0) and np.all(np.diff(dt) > 0)):
            failures.append(name)
    P = reduced_params(INSTANCE_A)
    far = blowup_primal(P, INSTANCE_A, -1e6).delta
    limit_ok = far <= 1e-2 * INSTANCE_A.T
    record(
        "AC6 blow-up durations increasing, vanishing limit",
        not failures and limit_ok,
        f"non-monotone on {failures or 'none'}; Delta(-1e6) = {far:.3e} "
        f"(<= {1e-2 * INSTANCE_A.T:.3e})",
    )


def _fd_residual(fn, P, c, rho, rc, t_star, m=50):
    """Worst normalised residual of a closed form at ``m`` interior points.

    The slope at each point comes from a centred five-point stencil whose
    step is a small fraction of the distance to the nearer end of
    ``(t_star, T]``, so the check probes the formula, not the grid.
    """
    worst = 0.0
    for t in np.linspace(t_star, c.T, m + 2)[1:-1]:
        t = float(t)
        h = 1e-3 * min(c.T - t, t - t_star)
        f = [fn(P, c, rho, t + j * h) for j in (-2, -1, 1, 2)]
        slope = (f[0] - 8.0 * f[1] + 8.0 * f[2] - f[3]) / (12.0 * h)
        k = fn(P, c, rho, t)
        worst = max(worst, abs(slope - rc.rhs(k)) / (1.0 + abs(rc.q) * k * k))
    return worst


def test_ac7_riccati_residual():
    pairs = []
    for c in (INSTANCE_A, INSTANCE_B):
        P = reduced_params(c)
        pairs += [(c, P.rho_max - g * (1 + abs(P.rho_max))) for g in (0.01, 0.1, 1.0, 10.0, 100.0)]
    for c in random_instances(5, seed=11):
        P = reduced_params(c)
        pairs += [(c, P.rho_max - g * (1 + abs(P.rho_max))) for g in (0.1, 2.0)]
    assert len(pairs) == 20
    worst = 0.0
    for c, rho in pairs:
        P = reduced_params(c)
        bp, bd = blowup_primal(P, c, rho), blowup_dual(P, c, rho)
        worst = max(
            worst,
            _fd_residual(k_closed, P, c, rho, primal_coeffs(P, c, rho), bp.t_star),
            _fd_residual(k_tilde_closed, P, c, rho, dual_coeffs(P, c, rho), bd.t_star),
        )
    record("AC7 Riccati residual", worst <= 1e-6, f"20 pairs x 50 points, max residual {worst:.2e}")


def test_ac8_period_classifier():
    c = INSTANCE_A
    P = reduced_params(c)
    wrong = []
    for n in (10, 20, 50):
        v = period_classify(P, c, eigenvalue(P, c, n).lambda_n)
        if not (v.n_greater_than is not None and v.n_greater_than < n < v.n_less_than):
            wrong.append((n, v.n_greater_than, v.n_less_than))
    v = period_classify(P, c, 100.0)
    exact = (v.n_greater_than, v.n_less_than) == (4, 15)
    record(
        "AC8 period classifier",
        not wrong and exact,
        f"bracket failures {wrong or 'none'}; lambda=100 -> ({v.n_greater_than}, {v.n_less_than})",
    )


def test_ac9_cli_contract(capsys, tmp_path):
    start = time.perf_counter()
    out = tmp_path / "eigs.csv"
    code = cli.main(["eigs", str(FIXTURES / "instance_a.cfg"), "--n-max", "5", "--format", "csv",
                     "--out", str(out)])
    golden = out.read_bytes() == (FIXTURES / "golden" / "eigs_instance_a_n5.csv").read_bytes()
    codes = {}
    for cfg, cmd, expected in (
        ("instance_a.cfg", ["check"], 0),
        ("nonmonotone.cfg", ["check"], 1),
        ("out_of_range.cfg", ["eigs", "--n-max", "1"], 2),
        ("malformed.cfg", ["check"], 3),
    ):
        try:
            got = cli.main([cmd[0], str(FIXTURES / cfg)] + cmd[1:])
        except SystemExit as exc:
            got = exc.code
        codes[cfg] = (got, expected)
    capsys.readouterr()
    elapsed = time.perf_counter() - start
    codes_ok = all(g == e for g, e in codes.values())
    record(
        "AC9 CLI contract",
        code == 0 and golden and codes_ok and elapsed < 1.0,
        f"golden {'identical' if golden else 'DIFFERS'}, exit codes "
        f"{[g for g, _ in codes.values()]} (want [0, 1, 2, 3]), {elapsed:.3f}s (budget 1s)",
    )
