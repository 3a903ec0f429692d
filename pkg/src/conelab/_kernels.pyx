# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: hypergeometric series summation and the Robin
shooting integrator.  conelab._pykernels mirrors this module statement for
statement; keep the two in sync."""

from libc.math cimport fabs, fmax, fmin, pow, sqrt

BACKEND = "compiled"


cpdef tuple hyp2f1_series(double a, double b, double c, double s,
                          double rel_tol, double abs_tol, int max_terms):
    """Sum the Gauss series sum_m (a)_m (b)_m / ((c)_m m!) s^m.

    Compensated (Kahan) accumulation; stops once the current term and the
    predicted next term both clear the tolerance, which avoids premature
    exits when a Pochhammer factor passes near zero.

    Returns (value, err_estimate, terms_used, converged).
    """
    cdef double term = 1.0
    cdef double total = 1.0
    cdef double comp = 0.0
    cdef double sum_abs = 1.0
    cdef double y, tnew, tol, ratio_next, nxt
    cdef int m
    if s == 0.0:
        return (1.0, 0.0, 0, True)
    for m in range(max_terms):
        term = term * ((a + m) * (b + m) / ((c + m) * (m + 1.0)) * s)
        y = term - comp
        tnew = total + y
        comp = (tnew - total) - y
        total = tnew
        sum_abs += fabs(term)
        if term == 0.0:
            # terminating series (a or b a nonpositive integer)
            return (total, 1.2e-16 * sum_abs, m + 1, True)
        tol = fmax(abs_tol, rel_tol * fabs(total))
        if fabs(term) <= tol:
            ratio_next = (a + m + 1.0) * (b + m + 1.0) / ((c + m + 1.0) * (m + 2.0)) * s
            nxt = fabs(term * ratio_next)
            if nxt <= tol:
                return (total, fabs(term) + nxt + 1.2e-16 * sum_abs, m + 1, True)
    return (total, fabs(term) + 1.2e-16 * sum_abs, max_terms, False)


# Dormand-Prince 5(4) tableau
cdef double C2 = 1.0 / 5.0, C3 = 3.0 / 10.0, C4 = 4.0 / 5.0, C5 = 8.0 / 9.0
cdef double A21 = 1.0 / 5.0
cdef double A31 = 3.0 / 40.0, A32 = 9.0 / 40.0
cdef double A41 = 44.0 / 45.0, A42 = -56.0 / 15.0, A43 = 32.0 / 9.0
cdef double A51 = 19372.0 / 6561.0, A52 = -25360.0 / 2187.0
cdef double A53 = 64448.0 / 6561.0, A54 = -212.0 / 729.0
cdef double A61 = 9017.0 / 3168.0, A62 = -355.0 / 33.0, A63 = 46732.0 / 5247.0
cdef double A64 = 49.0 / 176.0, A65 = -5103.0 / 18656.0
cdef double B1 = 35.0 / 384.0, B3 = 500.0 / 1113.0, B4 = 125.0 / 192.0
cdef double B5 = -2187.0 / 6784.0, B6 = 11.0 / 84.0
cdef double E1 = 71.0 / 57600.0, E3 = -71.0 / 16695.0, E4 = 71.0 / 1920.0
cdef double E5 = -17253.0 / 339200.0, E6 = 22.0 / 525.0, E7 = -1.0 / 40.0


cdef inline void _rhs(double t, double u, double v, double n, double k,
                      double lam, double p2, double q2, double* du, double* dv) nogil:
    cdef double omt2 = 1.0 - t * t
    du[0] = v
    dv[0] = -(((k - 1.0) / t - (n - 1.0) * t) * v
              + (lam - p2 / omt2 - q2 / (t * t)) * u) / omt2


cpdef tuple robin_shoot(double u0, double v0, double t_start, double t_end,
                        double n, double k, double lam, double p2, double q2,
                        double rtol, double atol, double max_step, int max_steps):
    """Integrate the link eigenvalue ODE from the series launch point to the
    free boundary, counting interior sign changes of the solution.

    State is renormalized whenever it grows large; only the projective class
    of (u, v) matters for the log-derivative and the zero count, so this is
    a phase-type representation with no overflow poles.

    Returns (u_end, v_end, zeros, ok).
    """
    cdef double t = t_start, u = u0, v = v0
    cdef double h = fmin(max_step, (t_end - t_start) * 0.01)
    cdef double k1u, k1v, k2u, k2v, k3u, k3v, k4u, k4v, k5u, k5v, k6u, k6v, k7u, k7v
    cdef double un, vn, eu, ev, sc_u, sc_v, err, scale, fac
    cdef double u_prev
    cdef int zeros = 0
    cdef int steps = 0
    cdef bint last = False
    if h <= 0.0:
        return (u, v, 0, True)
    _rhs(t, u, v, n, k, lam, p2, q2, &k1u, &k1v)
    while steps < max_steps:
        steps += 1
        if t + h >= t_end:
            h = t_end - t
            last = True
        _rhs(t + C2 * h, u + h * A21 * k1u, v + h * A21 * k1v,
             n, k, lam, p2, q2, &k2u, &k2v)
        _rhs(t + C3 * h, u + h * (A31 * k1u + A32 * k2u),
             v + h * (A31 * k1v + A32 * k2v), n, k, lam, p2, q2, &k3u, &k3v)
        _rhs(t + C4 * h, u + h * (A41 * k1u + A42 * k2u + A43 * k3u),
             v + h * (A41 * k1v + A42 * k2v + A43 * k3v),
             n, k, lam, p2, q2, &k4u, &k4v)
        _rhs(t + C5 * h, u + h * (A51 * k1u + A52 * k2u + A53 * k3u + A54 * k4u),
             v + h * (A51 * k1v + A52 * k2v + A53 * k3v + A54 * k4v),
             n, k, lam, p2, q2, &k5u, &k5v)
        _rhs(t + h, u + h * (A61 * k1u + A62 * k2u + A63 * k3u + A64 * k4u + A65 * k5u),
             v + h * (A61 * k1v + A62 * k2v + A63 * k3v + A64 * k4v + A65 * k5v),
             n, k, lam, p2, q2, &k6u, &k6v)
        un = u + h * (B1 * k1u + B3 * k3u + B4 * k4u + B5 * k5u + B6 * k6u)
        vn = v + h * (B1 * k1v + B3 * k3v + B4 * k4v + B5 * k5v + B6 * k6v)
        _rhs(t + h, un, vn, n, k, lam, p2, q2, &k7u, &k7v)
        eu = h * (E1 * k1u + E3 * k3u + E4 * k4u + E5 * k5u + E6 * k6u + E7 * k7u)
        ev = h * (E1 * k1v + E3 * k3v + E4 * k4v + E5 * k5v + E6 * k6v + E7 * k7v)
        sc_u = atol + rtol * fmax(fabs(u), fabs(un))
        sc_v = atol + rtol * fmax(fabs(v), fabs(vn))
        err = sqrt(0.5 * ((eu / sc_u) * (eu / sc_u) + (ev / sc_v) * (ev / sc_v)))
        if err <= 1.0:
            u_prev = u
            t += h
            u = un
            v = vn
            k1u = k7u
            k1v = k7v
            if ((u_prev > 0.0 and u < 0.0) or (u_prev < 0.0 and u > 0.0)
                    or (u == 0.0 and u_prev != 0.0)):
                zeros += 1
            if last or t >= t_end:
                return (u, v, zeros, True)
            scale = fmax(fabs(u), fabs(v))
            if scale > 1e50:
                u /= scale
                v /= scale
                k1u /= scale
                k1v /= scale
        else:
            last = False
        fac = 0.9 * pow(fmax(err, 1e-10), -0.2)
        if fac < 0.2:
            fac = 0.2
        elif fac > 5.0:
            fac = 5.0
        h *= fac
        if h > max_step:
            h = max_step
        if h < 1e-14 * (t_end - t_start):
            return (u, v, zeros, False)
    return (u, v, zeros, False)
