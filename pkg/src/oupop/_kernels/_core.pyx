# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernels: OU recurrence and fixed-step RK4 for the three models.

Keep in lockstep with _pure.py: same operations in the same order on doubles,
so both backends return bit-identical arrays (compiled with -ffp-contract=off).
"""

from libc.math cimport isfinite

import numpy as np

BLOWUP_LIMIT = 1e12

cdef double _LIMIT = 1e12


def ou_recurrence(double z0, const double[::1] phi, const double[::1] scale,
                  const double[::1] xi):
    """z[0] = z0; z[k+1] = z[k]*phi[k] + scale[k]*xi[k]."""
    cdef Py_ssize_t n = phi.shape[0]
    out_arr = np.empty(n + 1)
    cdef double[::1] out = out_arr
    cdef double z = z0
    cdef Py_ssize_t k
    out[0] = z
    for k in range(n):
        z = z * phi[k] + scale[k] * xi[k]
        out[k + 1] = z
    return out_arr


cdef inline double _interp(const double[::1] ts, const double[::1] vs,
                           Py_ssize_t jmax, Py_ssize_t* j, double t) noexcept nogil:
    # cursor-based bracket lookup; query times never move backwards
    cdef Py_ssize_t jj = j[0]
    while jj < jmax and t > ts[jj + 1]:
        jj += 1
    j[0] = jj
    if t == ts[jj]:
        return vs[jj]
    if t == ts[jj + 1]:
        return vs[jj + 1]
    return vs[jj] + (vs[jj + 1] - vs[jj]) / (ts[jj + 1] - ts[jj]) * (t - ts[jj])


def rk4_logistic_k(double a, double alpha, double x0,
                   double step, double last_step, Py_ssize_t n_steps,
                   const double[::1] nt, const double[::1] nv):
    """Fixed-step RK4 for dx/dt = x*(a + alpha*z(t) - x).

    Returns (states, fail_index); fail_index is -1 on success, else the node
    at which the state first left the finite range.
    """
    cdef Py_ssize_t jmax = nt.shape[0] - 2
    out_arr = np.zeros(n_steps + 1)
    cdef double[::1] out = out_arr
    cdef double x = x0, t, h, half, z, k1, k2, k3, k4, xm
    cdef Py_ssize_t k, j = 0
    out[0] = x
    for k in range(n_steps):
        t = k * step
        h = step if k < n_steps - 1 else last_step
        half = 0.5 * h
        z = _interp(nt, nv, jmax, &j, t)
        k1 = x * (a + alpha * z - x)
        z = _interp(nt, nv, jmax, &j, t + half)
        xm = x + half * k1
        k2 = xm * (a + alpha * z - xm)
        xm = x + half * k2
        k3 = xm * (a + alpha * z - xm)
        z = _interp(nt, nv, jmax, &j, t + h)
        xm = x + h * k3
        k4 = xm * (a + alpha * z - xm)
        x = x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out[k + 1] = x
        if not (isfinite(x) and -_LIMIT <= x <= _LIMIT):
            return out_arr, k + 1
    return out_arr, -1


def rk4_logistic_r(double r, double c, double alpha, double x0,
                   double step, double last_step, Py_ssize_t n_steps,
                   const double[::1] nt, const double[::1] nv):
    """Fixed-step RK4 for dx/dt = (r + alpha*z(t))*x*(1 - x/c)."""
    cdef Py_ssize_t jmax = nt.shape[0] - 2
    out_arr = np.zeros(n_steps + 1)
    cdef double[::1] out = out_arr
    cdef double x = x0, t, h, half, z, k1, k2, k3, k4, xm
    cdef Py_ssize_t k, j = 0
    out[0] = x
    for k in range(n_steps):
        t = k * step
        h = step if k < n_steps - 1 else last_step
        half = 0.5 * h
        z = _interp(nt, nv, jmax, &j, t)
        k1 = (r + alpha * z) * x * (1.0 - x / c)
        z = _interp(nt, nv, jmax, &j, t + half)
        xm = x + half * k1
        k2 = (r + alpha * z) * xm * (1.0 - xm / c)
        xm = x + half * k2
        k3 = (r + alpha * z) * xm * (1.0 - xm / c)
        z = _interp(nt, nv, jmax, &j, t + h)
        xm = x + h * k3
        k4 = (r + alpha * z) * xm * (1.0 - xm / c)
        x = x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out[k + 1] = x
        if not (isfinite(x) and -_LIMIT <= x <= _LIMIT):
            return out_arr, k + 1
    return out_arr, -1


def rk4_lv(double lam, double mu, double a, double b, double c, double e,
           double alpha, double x0, double y0,
           double step, double last_step, Py_ssize_t n_steps,
           const double[::1] nt1, const double[::1] nv1,
           const double[::1] nt2, const double[::1] nv2):
    """Fixed-step RK4 for the competitive pair

        dx/dt = x*(lam + alpha*z1(t) - a*x - b*y)
        dy/dt = y*(mu  + alpha*z2(t) - c*x - e*y)

    z1 and z2 may be the same path (shared forcing) or two distinct ones.
    """
    cdef Py_ssize_t j1max = nt1.shape[0] - 2
    cdef Py_ssize_t j2max = nt2.shape[0] - 2
    xs_arr = np.zeros(n_steps + 1)
    ys_arr = np.zeros(n_steps + 1)
    cdef double[::1] xs = xs_arr
    cdef double[::1] ys = ys_arr
    cdef double x = x0, y = y0, t, h, half, za, zb, xm, ym
    cdef double k1x, k1y, k2x, k2y, k3x, k3y, k4x, k4y
    cdef bint ok_x, ok_y
    cdef Py_ssize_t k, j1 = 0, j2 = 0
    xs[0] = x
    ys[0] = y
    for k in range(n_steps):
        t = k * step
        h = step if k < n_steps - 1 else last_step
        half = 0.5 * h
        za = _interp(nt1, nv1, j1max, &j1, t)
        zb = _interp(nt2, nv2, j2max, &j2, t)
        k1x = x * (lam + alpha * za - a * x - b * y)
        k1y = y * (mu + alpha * zb - c * x - e * y)
        za = _interp(nt1, nv1, j1max, &j1, t + half)
        zb = _interp(nt2, nv2, j2max, &j2, t + half)
        xm = x + half * k1x
        ym = y + half * k1y
        k2x = xm * (lam + alpha * za - a * xm - b * ym)
        k2y = ym * (mu + alpha * zb - c * xm - e * ym)
        xm = x + half * k2x
        ym = y + half * k2y
        k3x = xm * (lam + alpha * za - a * xm - b * ym)
        k3y = ym * (mu + alpha * zb - c * xm - e * ym)
        za = _interp(nt1, nv1, j1max, &j1, t + h)
        zb = _interp(nt2, nv2, j2max, &j2, t + h)
        xm = x + h * k3x
        ym = y + h * k3y
        k4x = xm * (lam + alpha * za - a * xm - b * ym)
        k4y = ym * (mu + alpha * zb - c * xm - e * ym)
        x = x + h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        y = y + h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
        xs[k + 1] = x
        ys[k + 1] = y
        ok_x = isfinite(x) and -_LIMIT <= x <= _LIMIT
        ok_y = isfinite(y) and -_LIMIT <= y <= _LIMIT
        if not (ok_x and ok_y):
            return xs_arr, ys_arr, k + 1
    return xs_arr, ys_arr, -1
