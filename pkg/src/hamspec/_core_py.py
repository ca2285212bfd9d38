"""Pure-Python hot kernels.

Mirrors ``_core.pyx`` operation for operation so both backends produce
bit-identical floats.  Keep the two files in lockstep.

All kernels work on raw scalars.  ``q(rho) = -(rho*H22 - c0)`` with
``c0 = H33*H13*H13`` precomputed by the caller.
"""
from math import atan, isfinite, nan, sqrt

NAME = "python"

# march() status codes
REACHED_END = 0
CROSSED = 1
UNDERFLOW = 2
MAX_STEPS = 3

# Dormand-Prince 5(4) tableau
C2 = 1.0 / 5.0
C3 = 3.0 / 10.0
C4 = 4.0 / 5.0
C5 = 8.0 / 9.0
A21 = 1.0 / 5.0
A31 = 3.0 / 40.0
A32 = 9.0 / 40.0
A41 = 44.0 / 45.0
A42 = -56.0 / 15.0
A43 = 32.0 / 9.0
A51 = 19372.0 / 6561.0
A52 = -25360.0 / 2187.0
A53 = 64448.0 / 6561.0
A54 = -212.0 / 729.0
A61 = 9017.0 / 3168.0
A62 = -355.0 / 33.0
A63 = 46732.0 / 5247.0
A64 = 49.0 / 176.0
A65 = -5103.0 / 18656.0
A71 = 35.0 / 384.0
A73 = 500.0 / 1113.0
A74 = 125.0 / 192.0
A75 = -2187.0 / 6784.0
A76 = 11.0 / 84.0
E1 = 71.0 / 57600.0
E3 = -71.0 / 16695.0
E4 = 71.0 / 1920.0
E5 = -17253.0 / 339200.0
E6 = 22.0 / 525.0
E7 = -1.0 / 40.0
# dense output
D1 = -12715105075.0 / 11282082432.0
D3 = 87487479700.0 / 32700410799.0
D4 = -10690763975.0 / 1880347072.0
D5 = 701980252875.0 / 199316789632.0
D6 = -1453857185.0 / 822651844.0
D7 = 69997945.0 / 29380423.0

# PI controller (Hairer's DOPRI5 defaults)
SAFE = 0.9
BETA = 0.04
EXPO1 = 0.2 - BETA * 0.75
FAC_MIN = 0.2
FAC_MAX = 10.0
EPS = 2.220446049250313e-16


def omega_theta(r, p, H22, c0, rho):
    """Return ``(omega, theta)``; ``(nan, nan)`` when ``4rq - p^2 <= 0``."""
    q = -(rho * H22 - c0)
    disc = 4.0 * r * q - p * p
    if not disc > 0.0:
        return nan, nan
    root = sqrt(disc)
    return 0.5 * root, atan(p / root)


def counting(n, T, r, p, H22, c0, rho):
    """``F_n(rho) = ((2n-1)*pi/2 + theta)/omega - T``."""
    q = -(rho * H22 - c0)
    disc = 4.0 * r * q - p * p
    if not disc > 0.0:
        return nan
    root = sqrt(disc)
    return ((2 * n - 1) * 1.5707963267948966 + atan(p / root)) / (0.5 * root) - T


def bisect_counting(n, T, r, p, H22, c0, lo, hi, tol_rho, tol_f, max_iter):
    """Bisect ``F_n`` on ``[lo, hi]`` with ``F_n(lo) < 0 < F_n(hi)``.

    Returns ``(rho, F_n(rho), iterations)``.  Stops early once the bracket
    cannot be split further in double precision.
    """
    it = 0
    mid = lo
    fm = nan
    while it < max_iter:
        mid = lo + 0.5 * (hi - lo)
        fm = counting(n, T, r, p, H22, c0, mid)
        it += 1
        if abs(fm) <= tol_f and hi - lo <= tol_rho * (1.0 + abs(mid)):
            break
        if mid <= lo or mid >= hi:
            break
        if fm < 0.0:
            lo = mid
        else:
            hi = mid
    return mid, fm, it


def _rhs(chart, y, q, p, r):
    # s = T - t runs forward; k-chart: dk/ds = -(q k^2 + p k + r)
    if chart == 0:
        return -((q * y + p) * y + r)
    # w = 1/k: dw/ds = q + p w + r w^2
    return q + (p + r * y) * y


def dense_eval(c0, c1, c2, c3, c4, th):
    th1 = 1.0 - th
    return c0 + th * (c1 + th1 * (c2 + th * (c3 + th1 * c4)))


def march(q, p, r, s_end, rel_tol, abs_tol, k_switch, max_steps, refine_tol, keep_steps):
    """Integrate ``k' = q k^2 + p k + r`` backward from ``k(T) = 0``.

    Works in ``s = T - t`` with a two-chart state: ``k`` while ``|k| <
    k_switch`` and ``w = 1/k`` past it (back to ``k`` once ``|w| >=
    2/k_switch``).  A sign change of ``w`` is a pole; it is bracketed on
    the dense output to width ``refine_tol``.

    Returns ``(status, s, y, chart, steps, switches, records, s_lo, s_hi)``.
    ``records`` holds ``(s0, h, chart, c0, c1, c2, c3, c4)`` per accepted
    step when ``keep_steps`` is true, else is empty.
    """
    records = []
    s = 0.0
    y = 0.0
    chart = 0
    steps = 0
    switches = 0
    s_lo = nan
    s_hi = nan
    w_back = 2.0 / k_switch
    if s_end <= 0.0:
        return REACHED_END, s, y, chart, steps, switches, records, s_lo, s_hi

    # initial step, Hairer's heuristic specialised to a scalar
    k1 = _rhs(chart, y, q, p, r)
    sc = abs_tol + rel_tol * abs(y)
    d0 = abs(y) / sc
    d1 = abs(k1) / sc
    if d0 < 1e-5 or d1 < 1e-5:
        h0 = 1e-6
    else:
        h0 = 0.01 * d0 / d1
    h0 = min(h0, s_end)
    y1 = y + h0 * k1
    f1 = _rhs(chart, y1, q, p, r)
    d2 = abs(f1 - k1) / sc / h0
    dm = max(d1, d2)
    if dm <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / dm) ** 0.2
    h = min(100.0 * h0, h1, s_end)

    facold = 1e-4
    last = False
    while True:
        if steps >= max_steps:
            return MAX_STEPS, s, y, chart, steps, switches, records, s_lo, s_hi
        if h <= 16.0 * EPS * abs(s) or h < 1e-300:
            return UNDERFLOW, s, y, chart, steps, switches, records, s_lo, s_hi
        if s + h >= s_end:
            h = s_end - s
            last = True
        steps += 1

        k2 = _rhs(chart, y + h * (A21 * k1), q, p, r)
        k3 = _rhs(chart, y + h * (A31 * k1 + A32 * k2), q, p, r)
        k4 = _rhs(chart, y + h * (A41 * k1 + A42 * k2 + A43 * k3), q, p, r)
        k5 = _rhs(chart, y + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4), q, p, r)
        k6 = _rhs(chart, y + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5), q, p, r)
        ynew = y + h * (A71 * k1 + A73 * k3 + A74 * k4 + A75 * k5 + A76 * k6)
        k7 = _rhs(chart, ynew, q, p, r)
        errest = h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7)
        sk = abs_tol + rel_tol * max(abs(y), abs(ynew))
        err = abs(errest) / sk

        if not isfinite(err):
            h = h * FAC_MIN
            last = False
            continue

        fac11 = err ** EXPO1
        fac = fac11 / facold ** BETA
        fac = max(1.0 / FAC_MAX, min(1.0 / FAC_MIN, fac / SAFE))
        hnew = h / fac

        if err > 1.0:
            h = h / min(1.0 / FAC_MIN, fac11 / SAFE)
            last = False
            continue

        facold = max(err, 1e-4)
        s0 = s
        y0 = y
        s = s + h
        if last:
            s = s_end

        if keep_steps or chart == 1:
            ydiff = ynew - y0
            bspl = h * k1 - ydiff
            c0_ = y0
            c1_ = ydiff
            c2_ = bspl
            c3_ = ydiff - h * k7 - bspl
            c4_ = h * (D1 * k1 + D3 * k3 + D4 * k4 + D5 * k5 + D6 * k6 + D7 * k7)
            if keep_steps:
                records.append((s0, h, chart, c0_, c1_, c2_, c3_, c4_))

        if chart == 1 and (ynew == 0.0 or (ynew < 0.0) != (y0 < 0.0)):
            # pole inside this step: bisect the dense interpolant of w
            tlo = 0.0
            thi = 1.0
            wlo = y0
            if ynew == 0.0:
                tlo = 1.0
            it = 0
            while h * (thi - tlo) > refine_tol and it < 200:
                tm = 0.5 * (tlo + thi)
                wm = dense_eval(c0_, c1_, c2_, c3_, c4_, tm)
                if wm == 0.0:
                    tlo = tm
                    thi = tm
                    break
                if (wm < 0.0) == (wlo < 0.0):
                    tlo = tm
                else:
                    thi = tm
                it += 1
            s_lo = s0 + h * tlo
            s_hi = s0 + h * thi
            return CROSSED, s, ynew, chart, steps, switches, records, s_lo, s_hi

        y = ynew
        k1 = k7
        if chart == 0 and abs(y) >= k_switch:
            chart = 1
            y = 1.0 / y
            k1 = _rhs(chart, y, q, p, r)
            switches += 1
        elif chart == 1 and abs(y) >= w_back:
            chart = 0
            y = 1.0 / y
            k1 = _rhs(chart, y, q, p, r)
            switches += 1

        if last:
            return REACHED_END, s, y, chart, steps, switches, records, s_lo, s_hi
        h = hnew
