"""Growth-rate estimation for the normalized logistic model p' = r*p*(1-p).

Three estimation routes from measurements of the occupied fraction p:

  * direct inversion of the closed-form solution between two samples,
  * a Luenberger observer whose gains make a quadratic error function
    non-increasing,
  * a high-gain observer in the normal-form coordinates z1 = p,
    z2 = r*p*(1-p), with gains (-2*theta, -theta**2).

The model is unobservable at p = 0 and p = 1 (the maps below divide by
p*(1-p)), so measurements must keep a small guard distance from both.
Observer integration reuses the fixed-step RK4 of `solve`, with the measured
path linearly interpolated at stage times.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import BlowUpError, ParameterError, SingularMeasurementError
from .solve import rk4_stream

__all__ = [
    "GUARD",
    "LuenbergerConfig",
    "HighGainConfig",
    "ObserverRun",
    "direct_estimator",
    "luenberger_run",
    "highgain_run",
    "lyapunov_V",
    "lyapunov_gains",
    "rate_from_coordinates",
    "coordinate_drift",
    "innovation_trust",
    "write_observer_csv",
]

GUARD = 1e-6  # measurements must stay in (GUARD, 1 - GUARD)

_BLOWUP = 1e12


@dataclass(frozen=True)
class LuenbergerConfig:
    """Gain shaping constants, both strictly negative.

    The observer gains follow as G1 = (1 + gamma_r**2)*gamma_p and
    G2 = -gamma_r*gamma_p; along noiseless error dynamics they give
    dV/dt = gamma_p*e_p**2 + gamma_r*y*(1-y)*e_r**2 <= 0 for the quadratic
    function of lyapunov_V.
    """

    gamma_p: float
    gamma_r: float

    def __post_init__(self):
        if not (math.isfinite(self.gamma_p) and self.gamma_p < 0):
            raise ParameterError(f"gamma_p must be negative, got {self.gamma_p}")
        if not (math.isfinite(self.gamma_r) and self.gamma_r < 0):
            raise ParameterError(f"gamma_r must be negative, got {self.gamma_r}")

    @property
    def gains(self):
        g1 = (1.0 + self.gamma_r**2) * self.gamma_p
        g2 = -self.gamma_r * self.gamma_p
        return g1, g2


@dataclass(frozen=True)
class HighGainConfig:
    """High-gain parameter theta > 0; larger theta means faster error decay."""

    theta: float

    def __post_init__(self):
        if not (math.isfinite(self.theta) and self.theta > 0):
            raise ParameterError(f"theta must be positive, got {self.theta}")

    @property
    def gains(self):
        return -2.0 * self.theta, -(self.theta**2)


@dataclass
class ObserverRun:
    """Observer output on its integration grid.

    p is the measurement sampled at the grid, p_hat the observer's state
    estimate, r_hat the rate estimate, and innovation = p_hat - p, the
    online trust signal for r_hat.
    """

    grid: np.ndarray
    p: np.ndarray
    p_hat: np.ndarray
    r_hat: np.ndarray
    innovation: np.ndarray


def direct_estimator(p0, p_t, t):
    """(1/t)*log( p_t*(1-p0) / (p0*(1-p_t)) ).

    Exact inversion of the noise-free solution between two samples; under a
    perturbed rate it returns the time average of the realized rate, which
    drifts once p_t saturates near 1.
    """
    if not (0.0 < p0 < 1.0) or not (0.0 < p_t < 1.0):
        raise SingularMeasurementError(
            f"measurements must lie strictly inside (0, 1), got p0={p0}, p_t={p_t}"
        )
    if not (t > 0):
        raise ParameterError(f"t must be positive, got {t}")
    return (1.0 / t) * math.log(p_t * (1.0 - p0) / (p0 * (1.0 - p_t)))


def lyapunov_V(e_p, e_r, gamma_r):
    """0.5*(e_p + gamma_r*e_r)**2 + 0.5*e_r**2; positive definite for any gamma_r."""
    return 0.5 * (e_p + gamma_r * e_r) ** 2 + 0.5 * e_r**2


def rate_from_coordinates(z1, z2):
    """r = z2/(z1*(1-z1)): invert z2 = r*p*(1-p) away from p in {0, 1}."""
    return z2 / (z1 * (1.0 - z1))


def coordinate_drift(z1, z2):
    """Time derivative of z2 = r*p*(1-p) along the model, in (z1, z2) terms.

    d/dt [r*p*(1-p)] = r*(1-2p)*p' = (1-2*z1)*z2**2/(z1*(1-z1)).
    """
    return (1.0 - 2.0 * z1) * z2 * z2 / (z1 * (1.0 - z1))


def lyapunov_gains(theta):
    """Numeric route to the high-gain pair: solve the 2x2 design equation.

    Solves A^T S + S A - C^T C + theta*S = 0 for the symmetric positive S,
    with A the shift block [[0,1],[0,0]] and C = [1, 0] selecting the
    measured coordinate z1, then returns G = -S^{-1} C^T.  Kept independent
    of HighGainConfig.gains so the two routes can be checked against each
    other.
    """
    if theta <= 0:
        raise ParameterError(f"theta must be positive, got {theta}")
    # unknowns (s11, s12, s22); rows: (1,1), (1,2), (2,2) entries
    m = np.array(
        [
            [theta, 0.0, 0.0],
            [1.0, theta, 0.0],
            [0.0, 2.0, theta],
        ]
    )
    rhs = np.array([1.0, 0.0, 0.0])
    s11, s12, s22 = np.linalg.solve(m, rhs)
    s = np.array([[s11, s12], [s12, s22]])
    g = -np.linalg.solve(s, np.array([1.0, 0.0]))
    return float(g[0]), float(g[1])


def _measurement(measured):
    vals = measured.values
    if np.any(vals <= GUARD) or np.any(vals >= 1.0 - GUARD):
        raise SingularMeasurementError(
            f"measurements must stay inside ({GUARD:g}, {1 - GUARD:g}); "
            "the model is unobservable at p = 0 and p = 1"
        )

    def y_at(t):
        return float(np.interp(t, measured.grid, vals))

    return y_at


def luenberger_run(config, measured, initial=None, step=1e-3):
    """Run the Luenberger observer along a measured path.

        dp_hat/dt = r_hat*y*(1-y) + G1*(p_hat - y)
        dr_hat/dt = G2*(p_hat - y)

    initial defaults to (first measurement, 0): no prior rate knowledge.
    """
    y_at = _measurement(measured)
    g1, g2 = config.gains
    if initial is None:
        initial = (float(measured.values[0]), 0.0)
    p_hat0, r_hat0 = initial

    def f(t, s):
        y = y_at(t)
        inn = s[0] - y
        yy = y * (1.0 - y)
        return np.array([s[1] * yy + g1 * inn, g2 * inn])

    t0 = float(measured.grid[0])
    horizon = float(measured.grid[-1]) - t0
    grid, states = rk4_stream(f, (p_hat0, r_hat0), t0, horizon, step)
    p = np.interp(grid, measured.grid, measured.values)
    return ObserverRun(
        grid=grid,
        p=p,
        p_hat=states[:, 0],
        r_hat=states[:, 1],
        innovation=states[:, 0] - p,
    )


def highgain_run(config, measured, initial=None, step=1e-3):
    """Run the normal-form high-gain observer along a measured path.

        dz1_hat/dt = z2_hat + G1*(z1_hat - y)
        dz2_hat/dt = psi(y, z2_hat) + G2*(z1_hat - y)

    with psi = coordinate_drift and gains (-2*theta, -theta**2).  The rate
    estimate is r_hat(t) = z2_hat(t) / (y(t)*(1 - y(t))).  initial defaults
    to z1 = first measurement, z2 = 0 (i.e. r_hat(0) = 0).
    """
    y_at = _measurement(measured)
    g1, g2 = config.gains
    if initial is None:
        initial = (float(measured.values[0]), 0.0)
    z1_0, z2_0 = initial

    def f(t, z):
        y = y_at(t)
        inn = z[0] - y
        return np.array(
            [z[1] + g1 * inn, coordinate_drift(y, z[1]) + g2 * inn]
        )

    t0 = float(measured.grid[0])
    horizon = float(measured.grid[-1]) - t0
    grid, states = rk4_stream(f, (z1_0, z2_0), t0, horizon, step)
    z2 = states[:, 1]
    if not np.all(np.isfinite(z2)) or np.any(np.abs(z2) > _BLOWUP):
        bad = np.flatnonzero(~np.isfinite(z2) | (np.abs(z2) > _BLOWUP))[0]
        raise BlowUpError(
            f"observer state left the finite range at t = {grid[bad]:g}",
            time=float(grid[bad]),
        )
    p = np.interp(grid, measured.grid, measured.values)
    return ObserverRun(
        grid=grid,
        p=p,
        p_hat=states[:, 0],
        r_hat=rate_from_coordinates(p, z2),
        innovation=states[:, 0] - p,
    )


def innovation_trust(run, tol):
    """Node flags |innovation| <= tol: when true, r_hat can be trusted.

    The comparison is inclusive so an exactly zero innovation is trusted even
    at tol = 0.
    """
    return np.abs(run.innovation) <= tol


def write_observer_csv(run, dest):
    """Write `t,p,p_hat,r_hat,innovation` rows with round-trip formatting."""
    lines = ["t,p,p_hat,r_hat,innovation\n"]
    for k in range(run.grid.size):
        lines.append(
            f"{float(run.grid[k])!r},{float(run.p[k])!r},{float(run.p_hat[k])!r},"
            f"{float(run.r_hat[k])!r},{float(run.innovation[k])!r}\n"
        )
    if hasattr(dest, "write"):
        dest.write("".join(lines))
    else:
        with open(dest, "w", encoding="ascii") as fh:
            fh.write("".join(lines))
