"""Random population models and the regions their envelopes pin down.

Three right-hand sides driven by one mean-reverting realization z(t):

  * logistic with perturbed carrying capacity:  x' = x*(a + alpha*z - x)
  * logistic with perturbed growth rate:        x' = (r + alpha*z)*x*(1 - x/c)
  * two-species competition:  x' = x*(lam + alpha*z - a*x - b*y)
                              y' = y*(mu  + alpha*z - c*x - e*y)

Once the perturbed parameter is confined to an envelope [lo, hi] (see
noise.calibrate_beta), comparison inequalities give seed-independent
persistence conditions and attracting boxes.  Envelopes should come from
calibration or from a measured path, never typed by hand; the CLI enforces
that with an explicit --trust-envelope escape hatch.
"""

import math
from dataclasses import dataclass

from .errors import InconsistentBoundsError, ParameterError
from .noise import EnvelopeBounds, OUParams

__all__ = [
    "LogisticKSpec",
    "LogisticRSpec",
    "LVSpec",
    "Box2D",
    "PersistenceConditions",
    "rhs_logistic_k",
    "rhs_logistic_r",
    "rhs_lv",
    "deterministic_coexistence",
    "lv_persistence_conditions",
    "lv_attracting_box",
    "logistic_k_attracting_interval",
    "shift_envelope",
]


def _require_positive(name, value):
    if not (math.isfinite(value) and value > 0):
        raise ParameterError(f"{name} must be a positive real, got {value}")


def _require_nonnegative(name, value):
    if not (math.isfinite(value) and value >= 0):
        raise ParameterError(f"{name} must be nonnegative, got {value}")


@dataclass(frozen=True)
class LogisticKSpec:
    """Logistic growth with randomly perturbed carrying capacity.

    Simulation additionally needs the perturbed capacity a + alpha*z to stay
    strictly positive, which calibration guarantees by construction.
    """

    a: float
    alpha: float
    ou: OUParams

    def __post_init__(self):
        _require_positive("a", self.a)
        _require_nonnegative("alpha", self.alpha)


@dataclass(frozen=True)
class LogisticRSpec:
    """Logistic growth with randomly perturbed growth rate.

    x = c stays an equilibrium for every realization of the noise.
    """

    r: float
    c: float
    alpha: float
    ou: OUParams

    def __post_init__(self):
        _require_positive("r", self.r)
        _require_positive("c", self.c)
        _require_nonnegative("alpha", self.alpha)


@dataclass(frozen=True)
class LVSpec:
    """Competitive two-species model with perturbed growth rates.

    Both growth rates see the same realization z, as one common environment
    would impose; pass two distinct paths to solve.integrate for
    independently forced species.
    """

    lam: float
    mu: float
    a: float
    b: float
    c: float
    e: float
    alpha: float
    ou: OUParams

    def __post_init__(self):
        for name in ("lam", "mu", "a", "b", "c", "e"):
            _require_positive(name, getattr(self, name))
        _require_nonnegative("alpha", self.alpha)


@dataclass(frozen=True)
class Box2D:
    """Axis-aligned rectangle [x_lo, x_hi] x [y_lo, y_hi]."""

    x_interval: tuple
    y_interval: tuple

    def __post_init__(self):
        for name, (lo, hi) in (("x", self.x_interval), ("y", self.y_interval)):
            if not (math.isfinite(lo) and math.isfinite(hi) and lo <= hi):
                raise InconsistentBoundsError(
                    f"empty {name}-interval [{lo}, {hi}]"
                )

    def contains(self, x, y):
        return (
            self.x_interval[0] <= x <= self.x_interval[1]
            and self.y_interval[0] <= y <= self.y_interval[1]
        )


@dataclass(frozen=True)
class PersistenceConditions:
    cond1: bool
    cond2: bool

    def __bool__(self):
        return self.cond1 and self.cond2


def rhs_logistic_k(spec, x, z):
    """x*(a + alpha*z - x); vanishes identically at x = 0."""
    return x * (spec.a + spec.alpha * z - x)


def rhs_logistic_r(spec, x, z):
    """(r + alpha*z)*x*(1 - x/c); vanishes at x = 0 and x = c for any z."""
    return (spec.r + spec.alpha * z) * x * (1.0 - x / spec.c)


def rhs_lv(spec, x, y, z, z2=None):
    """Competitive vector field; both species share z unless z2 is given."""
    if z2 is None:
        z2 = z
    fx = x * (spec.lam + spec.alpha * z - spec.a * x - spec.b * y)
    fy = y * (spec.mu + spec.alpha * z2 - spec.c * x - spec.e * y)
    return fx, fy


def deterministic_coexistence(spec):
    """Noise-free coexistence test: e/b > mu/lam > c/a and a*e - b*c > 0.

    Ratio-based, hence invariant under joint positive scaling of all six
    coefficients.
    """
    ratio = spec.mu / spec.lam
    return bool(
        spec.e / spec.b > ratio
        and ratio > spec.c / spec.a
        and spec.a * spec.e - spec.b * spec.c > 0
    )


def lv_persistence_conditions(bounds_lambda, bounds_mu, spec):
    """Persistence of each species from the growth-rate envelopes.

    cond1 (first species):  mu_hi / lam_lo < e / b
    cond2 (second species): mu_lo / lam_hi > c / a

    With degenerate envelopes (zero noise) these collapse to the
    deterministic sandwich e/b > mu/lam > c/a.
    """
    if bounds_lambda.lower <= 0 or bounds_mu.lower <= 0:
        raise ParameterError("persistence analysis needs strictly positive envelopes")
    cond1 = bounds_mu.upper / bounds_lambda.lower < spec.e / spec.b
    cond2 = bounds_mu.lower / bounds_lambda.upper > spec.c / spec.a
    return PersistenceConditions(bool(cond1), bool(cond2))


def lv_attracting_box(bounds_lambda, bounds_mu, spec, eps=0.0):
    """Box the comparison inequalities confine both species to.

        x in [ (lam_lo - b*mu_hi/e)/a - eps ,  lam_hi/a ]
        y in [ (mu_lo - c*lam_hi/a)/e - eps ,  mu_hi/e ]

    The y lower corner carries the cross coefficient c: substituting the
    x upper bound lam_hi/a into the y equation gives
    y' >= y*(mu_lo - c*lam_hi/a - e*y), whose limit is the corner above.
    Lower corners are floored at 0 (populations are nonnegative) when the
    eps inflation pushes them negative.
    """
    if eps < 0:
        raise ParameterError(f"eps must be nonnegative, got {eps}")
    x_lo = (bounds_lambda.lower - spec.b * bounds_mu.upper / spec.e) / spec.a - eps
    x_hi = bounds_lambda.upper / spec.a
    y_lo = (bounds_mu.lower - spec.c * bounds_lambda.upper / spec.a) / spec.e - eps
    y_hi = bounds_mu.upper / spec.e
    x_lo = max(x_lo, 0.0)
    y_lo = max(y_lo, 0.0)
    if x_lo > x_hi or y_lo > y_hi:
        raise InconsistentBoundsError(
            f"attracting box is empty: x [{x_lo:g}, {x_hi:g}], "
            f"y [{y_lo:g}, {y_hi:g}]"
        )
    return Box2D((x_lo, x_hi), (y_lo, y_hi))


def logistic_k_attracting_interval(bounds_a, eps=0.0):
    """[lo - eps, hi + eps] around the carrying-capacity envelope."""
    if bounds_a.lower <= 0:
        raise ParameterError(
            f"attracting interval needs a positive envelope, got lower "
            f"{bounds_a.lower}"
        )
    if eps < 0:
        raise ParameterError(f"eps must be nonnegative, got {eps}")
    return (bounds_a.lower - eps, bounds_a.upper + eps)


def shift_envelope(env, from_nominal, to_nominal):
    """Envelope of to_nominal + alpha*z given the one of from_nominal + alpha*z.

    Valid because both parameters ride the same realization: the envelope
    just translates by the difference of nominals.
    """
    d = to_nominal - from_nominal
    return EnvelopeBounds(env.lower + d, env.upper + d)
