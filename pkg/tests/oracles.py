"""Independent reference computations used only by the tests.

None of these import the code paths they check.
"""
import numpy as np
from scipy.integrate import solve_ivp


def instance_a_lambda(n):
    # sqrt(-rho_n) = (2n-1)/2 when T = pi, H11 = 1, H22 = -1, everything else 0
    return 1.0 + (2 * n - 1) ** 2 / 4.0


def charpoly_eigvals(S, lo=-100.0, hi=100.0, grid=20001):
    """Roots of det(S - x I) by sign scan plus bisection; descending."""
    S = np.asarray(S, dtype=float)

    def f(x):
        return np.linalg.det(S - x * np.eye(3))

    xs = np.linspace(lo, hi, grid)
    vals = [f(x) for x in xs]
    roots = []
    for a, b, fa, fb in zip(xs[:-1], xs[1:], vals[:-1], vals[1:]):
        if fa == 0.0:
            roots.append(a)
            continue
        if fa * fb < 0:
            for _ in range(200):
                m = 0.5 * (a + b)
                fm = f(m)
                if fa * fm <= 0:
                    b = m
                else:
                    a, fa = m, fm
            roots.append(0.5 * (a + b))
    return sorted(roots, reverse=True)


def scipy_pole(q, p, r, T, span=200.0, big=1e9):
    """Blow-up time of k' = qk^2+pk+r, k(T)=0, via scipy's DOP853 and a |k| event."""

    def event(t, k):
        return abs(k[0]) - big

    event.terminal = True
    sol = solve_ivp(lambda t, k: [q * k[0] ** 2 + p * k[0] + r], [T, T - span], [0.0],
                    method="DOP853", rtol=1e-13, atol=1e-14, events=event)
    if not len(sol.t_events[0]):
        return None
    # |k| = big sits about 1/(|q| big) away from the pole
    return sol.t_events[0][0] - 1.0 / (abs(q) * big)


def brute_counting_root(n, T, F, lo, hi):
    """Plain float bisection of an increasing function F on [lo, hi]."""
    for _ in range(400):
        m = 0.5 * (lo + hi)
        if m in (lo, hi):
            break
        if F(m) < 0:
            lo = m
        else:
            hi = m
    return 0.5 * (lo + hi)
