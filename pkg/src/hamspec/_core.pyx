# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; see ``_core_py.py`` for the reference semantics.

Every arithmetic expression here matches the pure-Python file operation for
operation (no FMA, same association) so both backends agree bit for bit.
"""
from libc.math cimport atan, sqrt, pow, fabs, isfinite, NAN

NAME = "cython"

REACHED_END = 0
CROSSED = 1
UNDERFLOW = 2
MAX_STEPS = 3

cdef double C2 = 1.0 / 5.0
cdef double C3 = 3.0 / 10.0
cdef double C4 = 4.0 / 5.0
cdef double C5 = 8.0 / 9.0
cdef double A21 = 1.0 / 5.0
cdef double A31 = 3.0 / 40.0
cdef double A32 = 9.0 / 40.0
cdef double A41 = 44.0 / 45.0
cdef double A42 = -56.0 / 15.0
cdef double A43 = 32.0 / 9.0
cdef double A51 = 19372.0 / 6561.0
cdef double A52 = -25360.0 / 2187.0
cdef double A53 = 64448.0 / 6561.0
cdef double A54 = -212.0 / 729.0
cdef double A61 = 9017.0 / 3168.0
cdef double A62 = -355.0 / 33.0
cdef double A63 = 46732.0 / 5247.0
cdef double A64 = 49.0 / 176.0
cdef double A65 = -5103.0 / 18656.0
cdef double A71 = 35.0 / 384.0
cdef double A73 = 500.0 / 1113.0
cdef double A74 = 125.0 / 192.0
cdef double A75 = -2187.0 / 6784.0
cdef double A76 = 11.0 / 84.0
cdef double E1 = 71.0 / 57600.0
cdef double E3 = -71.0 / 16695.0
cdef double E4 = 71.0 / 1920.0
cdef double E5 = -17253.0 / 339200.0
cdef double E6 = 22.0 / 525.0
cdef double E7 = -1.0 / 40.0
cdef double D1 = -12715105075.0 / 11282082432.0
cdef double D3 = 87487479700.0 / 32700410799.0
cdef double D4 = -10690763975.0 / 1880347072.0
cdef double D5 = 701980252875.0 / 199316789632.0
cdef double D6 = -1453857185.0 / 822651844.0
cdef double D7 = 69997945.0 / 29380423.0

cdef double SAFE = 0.9
cdef double BETA = 0.04
cdef double EXPO1 = 0.2 - 0.04 * 0.75
cdef double FAC_MIN = 0.2
cdef double FAC_MAX = 10.0
cdef double EPS = 2.220446049250313e-16


cdef inline double _max(double a, double b) nogil:
    return b if b > a else a


cdef inline double _min(double a, double b) nogil:
    return b if b < a else a


def omega_theta(double r, double p, double H22, double c0, double rho):
    cdef double q = -(rho * H22 - c0)
    cdef double disc = 4.0 * r * q - p * p
    cdef double root
    if not disc > 0.0:
        return NAN, NAN
    root = sqrt(disc)
    return 0.5 * root, atan(p / root)


cdef double _counting(long n, double T, double r, double p, double H22,
                      double c0, double rho) nogil:
    cdef double q = -(rho * H22 - c0)
    cdef double disc = 4.0 * r * q - p * p
    cdef double root
    if not disc > 0.0:
        return NAN
    root = sqrt(disc)
    return (<double>(2 * n - 1) * 1.5707963267948966 + atan(p / root)) / (0.5 * root) - T


def counting(long n, double T, double r, double p, double H22, double c0, double rho):
    return _counting(n, T, r, p, H22, c0, rho)


def bisect_counting(long n, double T, double r, double p, double H22, double c0,
                    double lo, double hi, double tol_rho, double tol_f, long max_iter):
    cdef long it = 0
    cdef double mid = lo
    cdef double fm = NAN
    with nogil:
        while it < max_iter:
            mid = lo + 0.5 * (hi - lo)
            fm = _counting(n, T, r, p, H22, c0, mid)
            it += 1
            if fabs(fm) <= tol_f and hi - lo <= tol_rho * (1.0 + fabs(mid)):
                break
            if mid <= lo or mid >= hi:
                break
            if fm < 0.0:
                lo = mid
            else:
                hi = mid
    return mid, fm, it


cdef inline double _rhs(int chart, double y, double q, double p, double r) nogil:
    if chart == 0:
        return -((q * y + p) * y + r)
    return q + (p + r * y) * y


cdef inline double _dense(double c0, double c1, double c2, double c3, double c4,
                          double th) nogil:
    cdef double th1 = 1.0 - th
    return c0 + th * (c1 + th1 * (c2 + th * (c3 + th1 * c4)))


def dense_eval(double c0, double c1, double c2, double c3, double c4, double th):
    return _dense(c0, c1, c2, c3, c4, th)


def march(double q, double p, double r, double s_end, double rel_tol, double abs_tol,
          double k_switch, long max_steps, double refine_tol, bint keep_steps):
    cdef list records = []
    cdef double s = 0.0, y = 0.0, s0, y0, ynew
    cdef int chart = 0
    cdef long steps = 0, switches = 0
    cdef double s_lo = NAN, s_hi = NAN
    cdef double w_back = 2.0 / k_switch
    cdef double k1, k2, k3, k4, k5, k6, k7, f1, y1
    cdef double sc, d0, d1, d2, dm, h0, h1, h, hnew
    cdef double errest, sk, err, fac11, fac, facold
    cdef double ydiff, bspl, c0_ = 0.0, c1_ = 0.0, c2_ = 0.0, c3_ = 0.0, c4_ = 0.0
    cdef double tlo, thi, tm, wlo, wm
    cdef int it
    cdef bint last = False

    if s_end <= 0.0:
        return REACHED_END, s, y, chart, steps, switches, records, s_lo, s_hi

    k1 = _rhs(chart, y, q, p, r)
    sc = abs_tol + rel_tol * fabs(y)
    d0 = fabs(y) / sc
    d1 = fabs(k1) / sc
    if d0 < 1e-5 or d1 < 1e-5:
        h0 = 1e-6
    else:
        h0 = 0.01 * d0 / d1
    h0 = _min(h0, s_end)
    y1 = y + h0 * k1
    f1 = _rhs(chart, y1, q, p, r)
    d2 = fabs(f1 - k1) / sc / h0
    dm = _max(d1, d2)
    if dm <= 1e-15:
        h1 = _max(1e-6, h0 * 1e-3)
    else:
        h1 = pow(0.01 / dm, 0.2)
    h = _min(_min(100.0 * h0, h1), s_end)

    facold = 1e-4
    while True:
        if steps >= max_steps:
            return MAX_STEPS, s, y, chart, steps, switches, records, s_lo, s_hi
        if h <= 16.0 * EPS * fabs(s) or h < 1e-300:
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
        sk = abs_tol + rel_tol * _max(fabs(y), fabs(ynew))
        err = fabs(errest) / sk

        if not isfinite(err):
            h = h * FAC_MIN
            last = False
            continue

        fac11 = pow(err, EXPO1)
        fac = fac11 / pow(facold, BETA)
        fac = _max(1.0 / FAC_MAX, _min(1.0 / FAC_MIN, fac / SAFE))
        hnew = h / fac

        if err > 1.0:
            h = h / _min(1.0 / FAC_MIN, fac11 / SAFE)
            last = False
            continue

        facold = _max(err, 1e-4)
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
            tlo = 0.0
            thi = 1.0
            wlo = y0
            if ynew == 0.0:
                tlo = 1.0
            it = 0
            while h * (thi - tlo) > refine_tol and it < 200:
                tm = 0.5 * (tlo + thi)
                wm = _dense(c0_, c1_, c2_, c3_, c4_, tm)
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
        if chart == 0 and fabs(y) >= k_switch:
            chart = 1
            y = 1.0 / y
            k1 = _rhs(chart, y, q, p, r)
            switches += 1
        elif chart == 1 and fabs(y) >= w_back:
            chart = 0
            y = 1.0 / y
            k1 = _rhs(chart, y, q, p, r)
            switches += 1

        if last:
            return REACHED_END, s, y, chart, steps, switches, records, s_lo, s_hi
        h = hnew
