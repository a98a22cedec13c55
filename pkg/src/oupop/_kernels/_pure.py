"""Pure-Python kernels (fallback backend).

Mirrors the compiled core statement for statement: every floating-point
operation happens in the same order on the same IEEE-754 doubles, so the two
backends produce bit-identical output (the extension is compiled with
-ffp-contract=off to keep fused multiply-adds out).

Exp/log-derived constants are computed by the callers and passed in as
arrays; the kernels only add, subtract, multiply, divide, and compare.
"""

import math

import numpy as np

BLOWUP_LIMIT = 1e12


def ou_recurrence(z0, phi, scale, xi):
    """z[0] = z0; z[k+1] = z[k]*phi[k] + scale[k]*xi[k]."""
    n = len(phi)
    p = phi.tolist()
    s = scale.tolist()
    w = xi.tolist()
    out = [0.0] * (n + 1)
    z = float(z0)
    out[0] = z
    for k in range(n):
        z = z * p[k] + s[k] * w[k]
        out[k + 1] = z
    return np.asarray(out)


def _interp(ts, vs, jmax, j, t):
    # cursor-based bracket lookup; query times never move backwards
    while j < jmax and t > ts[j + 1]:
        j += 1
    if t == ts[j]:
        return vs[j], j
    if t == ts[j + 1]:
        return vs[j + 1], j
    return vs[j] + (vs[j + 1] - vs[j]) / (ts[j + 1] - ts[j]) * (t - ts[j]), j


def rk4_logistic_k(a, alpha, x0, step, last_step, n_steps, nt, nv):
    """Fixed-step RK4 for dx/dt = x*(a + alpha*z(t) - x).

    Returns (states, fail_index); fail_index is -1 on success, else the node
    at which the state first left the finite range.
    """
    ts = nt.tolist()
    vs = nv.tolist()
    jmax = len(ts) - 2
    out = [0.0] * (n_steps + 1)
    x = float(x0)
    out[0] = x
    j = 0
    for k in range(n_steps):
        t = k * step
        h = step if k < n_steps - 1 else last_step
        half = 0.5 * h
        z, j = _interp(ts, vs, jmax, j, t)
        k1 = x * (a + alpha * z - x)
        z, j = _interp(ts, vs, jmax, j, t + half)
        xm = x + half * k1
        k2 = xm * (a + alpha * z - xm)
        xm = x + half * k2
        k3 = xm * (a + alpha * z - xm)
        z, j = _interp(ts, vs, jmax, j, t + h)
        xm = x + h * k3
        k4 = xm * (a + alpha * z - xm)
        x = x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out[k + 1] = x
        if not (math.isfinite(x) and -BLOWUP_LIMIT <= x <= BLOWUP_LIMIT):
            return np.asarray(out), k + 1
    return np.asarray(out), -1


def rk4_logistic_r(r, c, alpha, x0, step, last_step, n_steps, nt, nv):
    """Fixed-step RK4 for dx/dt = (r + alpha*z(t))*x*(1 - x/c)."""
    ts = nt.tolist()
    vs = nv.tolist()
    jmax = len(ts) - 2
    out = [0.0] * (n_steps + 1)
    x = float(x0)
    out[0] = x
    j = 0
    for k in range(n_steps):
        t = k * step
        h = step if k < n_steps - 1 else last_step
        half = 0.5 * h
        z, j = _interp(ts, vs, jmax, j, t)
        k1 = (r + alpha * z) * x * (1.0 - x / c)
        z, j = _interp(ts, vs, jmax, j, t + half)
        xm = x + half * k1
        k2 = (r + alpha * z) * xm * (1.0 - xm / c)
        xm = x + half * k2
        k3 = (r + alpha * z) * xm * (1.0 - xm / c)
        z, j = _interp(ts, vs, jmax, j, t + h)
        xm = x + h * k3
        k4 = (r + alpha * z) * xm * (1.0 - xm / c)
        x = x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out[k + 1] = x
        if not (math.isfinite(x) and -BLOWUP_LIMIT <= x <= BLOWUP_LIMIT):
            return np.asarray(out), k + 1
    return np.asarray(out), -1


def rk4_lv(lam, mu, a, b, c, e, alpha, x0, y0, step, last_step, n_steps,
           nt1, nv1, nt2, nv2):
    """Fixed-step RK4 for the competitive pair

        dx/dt = x*(lam + alpha*z1(t) - a*x - b*y)
        dy/dt = y*(mu  + alpha*z2(t) - c*x - e*y)

    z1 and z2 may be the same path (shared forcing) or two distinct ones.
    """
    t1 = nt1.tolist()
    v1 = nv1.tolist()
    t2 = nt2.tolist()
    v2 = nv2.tolist()
    j1max = len(t1) - 2
    j2max = len(t2) - 2
    xs = [0.0] * (n_steps + 1)
    ys = [0.0] * (n_steps + 1)
    x = float(x0)
    y = float(y0)
    xs[0] = x
    ys[0] = y
    j1 = 0
    j2 = 0
    for k in range(n_steps):
        t = k * step
        h = step if k < n_steps - 1 else last_step
        half = 0.5 * h
        za, j1 = _interp(t1, v1, j1max, j1, t)
        zb, j2 = _interp(t2, v2, j2max, j2, t)
        k1x = x * (lam + alpha * za - a * x - b * y)
        k1y = y * (mu + alpha * zb - c * x - e * y)
        za, j1 = _interp(t1, v1, j1max, j1, t + half)
        zb, j2 = _interp(t2, v2, j2max, j2, t + half)
        xm = x + half * k1x
        ym = y + half * k1y
        k2x = xm * (lam + alpha * za - a * xm - b * ym)
        k2y = ym * (mu + alpha * zb - c * xm - e * ym)
        xm = x + half * k2x
        ym = y + half * k2y
        k3x = xm * (lam + alpha * za - a * xm - b * ym)
        k3y = ym * (mu + alpha * zb - c * xm - e * ym)
        za, j1 = _interp(t1, v1, j1max, j1, t + h)
        zb, j2 = _interp(t2, v2, j2max, j2, t + h)
        xm = x + h * k3x
        ym = y + h * k3y
        k4x = xm * (lam + alpha * za - a * xm - b * ym)
        k4y = ym * (mu + alpha * zb - c * xm - e * ym)
        x = x + h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        y = y + h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
        xs[k + 1] = x
        ys[k + 1] = y
        ok_x = math.isfinite(x) and -BLOWUP_LIMIT <= x <= BLOWUP_LIMIT
        ok_y = math.isfinite(y) and -BLOWUP_LIMIT <= y <= BLOWUP_LIMIT
        if not (ok_x and ok_y):
            return np.asarray(xs), np.asarray(ys), k + 1
    return np.asarray(xs), np.asarray(ys), -1
