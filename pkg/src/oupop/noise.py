"""Seeded Wiener and mean-reverting (Ornstein-Uhlenbeck) sample paths.

The noise process z solves the Langevin equation

    dz + beta*z dt = gamma dW,      beta > 0, gamma > 0,

whose transition over a step D is Gaussian with mean z*exp(-beta*D) and
variance gamma^2*(1 - exp(-2*beta*D))/(2*beta).  Paths are sampled from that
exact transition, not from an Euler scheme, so the discrete statistics are
exact at any step: with stationary initialization every node is marginally
N(0, gamma^2/(2*beta)).

A path is a pure function of (grid, seed, parameters, initialization) and is
bit-reproducible across runs.  Distinct seeds give independent streams, so
ensembles can be generated concurrently without shared state.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import (
    CalibrationError,
    GridError,
    ParameterError,
    PathRangeError,
)

__all__ = [
    "OUParams",
    "SamplePath",
    "EnvelopeBounds",
    "ErgodicReport",
    "CalibrationResult",
    "default_grid",
    "sample_wiener",
    "sample_ou",
    "evaluate_path",
    "measured_envelope",
    "calibrate_beta",
    "ergodic_diagnostics",
    "write_path_csv",
]


@dataclass(frozen=True)
class OUParams:
    """Mean-reversion rate (1/time) and volatility (units per sqrt(time))."""

    beta: float
    gamma: float

    def __post_init__(self):
        if not (math.isfinite(self.beta) and self.beta > 0):
            raise ParameterError(f"beta must be a positive real, got {self.beta}")
        if not (math.isfinite(self.gamma) and self.gamma > 0):
            raise ParameterError(f"gamma must be a positive real, got {self.gamma}")

    @property
    def stationary_std(self):
        """Standard deviation gamma/sqrt(2*beta) of the stationary law."""
        return self.gamma / math.sqrt(2.0 * self.beta)


@dataclass(frozen=True)
class EnvelopeBounds:
    """Closed interval [lower, upper] containing a perturbed parameter."""

    lower: float
    upper: float

    def __post_init__(self):
        if not (math.isfinite(self.lower) and math.isfinite(self.upper)):
            raise ParameterError("envelope bounds must be finite")
        if self.lower > self.upper:
            raise ParameterError(
                f"envelope lower {self.lower} exceeds upper {self.upper}"
            )

    @property
    def width(self):
        return self.upper - self.lower


@dataclass(frozen=True)
class ErgodicReport:
    """Time averages over one path: (1/T)*int z, (1/T)*int |z|, |z(T)|/T."""

    time_avg: float
    abs_time_avg: float
    z_over_t: float
    horizon: float


@dataclass(frozen=True)
class CalibrationResult:
    beta: float
    envelope: EnvelopeBounds


class SamplePath:
    """A strictly increasing time grid with one finite value per node.

    Immutable after construction; instances may be shared read-only across
    threads.
    """

    __slots__ = ("grid", "values")

    def __init__(self, grid, values):
        grid = np.ascontiguousarray(grid, dtype=float)
        values = np.ascontiguousarray(values, dtype=float)
        if grid.ndim != 1 or grid.size == 0:
            raise GridError("grid must be a nonempty 1-D sequence of times")
        if values.shape != grid.shape:
            raise GridError(
                f"grid and values lengths differ: {grid.size} vs {values.size}"
            )
        if not np.all(np.isfinite(grid)):
            raise GridError("grid times must be finite")
        if grid.size > 1 and not np.all(np.diff(grid) > 0):
            raise GridError("grid must be strictly increasing")
        if not np.all(np.isfinite(values)):
            raise ParameterError("path values must be finite")
        grid.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)

    def __setattr__(self, name, value):
        raise AttributeError("SamplePath is immutable")

    def __len__(self):
        return self.grid.size

    def __repr__(self):
        return (
            f"SamplePath({self.grid.size} nodes on "
            f"[{self.grid[0]:g}, {self.grid[-1]:g}])"
        )

    def evaluate(self, t):
        return evaluate_path(self, t)


def default_grid(horizon, step=0.01):
    """Uniform grid 0, step, 2*step, ... whose final node reaches `horizon`.

    The last node is nudged up to `horizon` when rounding would leave it one
    ulp short, so the grid always covers the requested window.
    """
    if not (horizon > 0 and math.isfinite(horizon)):
        raise GridError(f"horizon must be positive, got {horizon}")
    if not (step > 0 and math.isfinite(step)):
        raise GridError(f"step must be positive, got {step}")
    n = int(math.ceil(horizon / step - 1e-9))
    grid = step * np.arange(n + 1)
    if grid[-1] < horizon:
        grid[-1] = horizon
    return grid


def _validated_grid(grid):
    grid = np.ascontiguousarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise GridError("grid must be a nonempty 1-D sequence of times")
    if not np.all(np.isfinite(grid)):
        raise GridError("grid times must be finite")
    if grid.size > 1 and not np.all(np.diff(grid) > 0):
        raise GridError("grid must be strictly increasing")
    return grid


def sample_wiener(grid, seed):
    """Standard Wiener path on `grid`, deterministic in (grid, seed).

    W(0) = 0 and the increment over [t_k, t_{k+1}] is N(0, t_{k+1} - t_k),
    drawn from the stream identified by `seed`.
    """
    grid = _validated_grid(grid)
    if grid[0] != 0.0:
        raise GridError(f"Wiener grid must start at 0, got {grid[0]}")
    rng = np.random.default_rng(seed)
    n = grid.size - 1
    increments = rng.standard_normal(n) * np.sqrt(np.diff(grid))
    values = np.concatenate(([0.0], np.cumsum(increments)))
    return SamplePath(grid, values)


def sample_ou(params, grid, seed, init="stationary"):
    """Mean-reverting path on `grid` via the exact Gaussian transition.

    Args:
        params: OUParams.
        grid: strictly increasing times.
        seed: integer identifying the innovation stream; the same seed with
            the same grid always yields the same standard normals, so varying
            beta rescales one fixed realization.
        init: "stationary" draws z(0) from N(0, gamma^2/(2*beta)) using the
            stream's first normal; a number starts the path at that value.
    """
    if not isinstance(params, OUParams):
        params = OUParams(*params)
    grid = _validated_grid(grid)
    rng = np.random.default_rng(seed)
    n = grid.size - 1
    if isinstance(init, str):
        if init != "stationary":
            raise ParameterError(f"unknown init {init!r}")
        draws = rng.standard_normal(n + 1)
        z0 = math.sqrt(params.gamma**2 / (2.0 * params.beta)) * draws[0]
        xi = draws[1:]
    else:
        z0 = float(init)
        if not math.isfinite(z0):
            raise ParameterError(f"init value must be finite, got {init}")
        xi = rng.standard_normal(n)
    dts = np.diff(grid)
    phi = np.exp(-params.beta * dts)
    scale = params.gamma * np.sqrt(
        (1.0 - np.exp(-2.0 * params.beta * dts)) / (2.0 * params.beta)
    )
    values = _kernels.ou_recurrence(z0, phi, scale, np.ascontiguousarray(xi))
    return SamplePath(grid, values)


def evaluate_path(path, t):
    """Linear interpolation on the path grid; exact at the nodes.

    Accepts a scalar or an array of query times; raises PathRangeError for
    times outside [grid[0], grid[-1]].
    """
    t_arr = np.asarray(t, dtype=float)
    lo = path.grid[0]
    hi = path.grid[-1]
    if np.any(t_arr < lo) or np.any(t_arr > hi):
        raise PathRangeError(
            f"query time outside path span [{lo:g}, {hi:g}]"
        )
    out = np.interp(t_arr, path.grid, path.values)
    if t_arr.ndim == 0:
        return float(out)
    return out


def measured_envelope(nominal, alpha, path):
    """Envelope [min, max] of nominal + alpha*z(t) over the path nodes."""
    perturbed = nominal + alpha * path.values
    return EnvelopeBounds(float(perturbed.min()), float(perturbed.max()))


def calibrate_beta(seed, gamma, alpha, nominal, interval, horizon,
                   grid_step=0.01, beta_start=1.0, max_doublings=40):
    """Smallest doubling of beta_start that confines the perturbed parameter.

    Tries beta = beta_start, 2*beta_start, 4*beta_start, ... (up to
    2**max_doublings * beta_start), regenerating the noise from the SAME seed
    each time, and returns the first beta for which

        nominal + alpha*z(t)  in  (b1, b2)   strictly, at every grid node

    over [0, horizon], together with the realized envelope.  Larger beta damps
    one fixed innovation sequence, so the first success is the cheapest
    admissible rate; any admissible rate is as good as any other here, hence
    no bisection refinement.

    Raises CalibrationError (carrying the tightest envelope achieved) when the
    cap is reached.
    """
    b1, b2 = float(interval[0]), float(interval[1])
    if not (b1 < nominal < b2):
        raise ParameterError(
            f"interval ({b1}, {b2}) must strictly contain nominal {nominal}"
        )
    if not (beta_start > 0 and math.isfinite(beta_start)):
        raise ParameterError(f"beta_start must be positive, got {beta_start}")
    if alpha < 0:
        raise ParameterError(f"alpha must be nonnegative, got {alpha}")
    if alpha == 0:
        return CalibrationResult(
            float(beta_start), EnvelopeBounds(float(nominal), float(nominal))
        )
    grid = default_grid(horizon, grid_step)
    beta = float(beta_start)
    best_excess = math.inf
    best_env = None
    best_beta = beta
    for _ in range(max_doublings + 1):
        path = sample_ou(OUParams(beta, gamma), grid, seed)
        env = measured_envelope(nominal, alpha, path)
        if b1 < env.lower and env.upper < b2:
            return CalibrationResult(beta, env)
        excess = max(b1 - env.lower, 0.0) + max(env.upper - b2, 0.0)
        if excess < best_excess:
            best_excess = excess
            best_env = env
            best_beta = beta
        beta *= 2.0
    raise CalibrationError(
        f"no beta up to {best_beta:g} (cap 2^{max_doublings}*{beta_start:g}) keeps "
        f"{nominal:g} + {alpha:g}*z inside ({b1:g}, {b2:g}); tightest envelope "
        f"achieved [{best_env.lower:.6g}, {best_env.upper:.6g}]",
        best_envelope=best_env,
        beta_max=best_beta,
    )


def ergodic_diagnostics(path):
    """Trapezoidal time averages of z and |z| plus the tail ratio |z(T)|/T."""
    if len(path) < 2:
        raise GridError("ergodic diagnostics need at least two grid nodes")
    t_end = float(path.grid[-1])
    if t_end <= 0:
        raise GridError("ergodic diagnostics expect a grid ending at T > 0")
    span = t_end - float(path.grid[0])
    time_avg = float(np.trapezoid(path.values, path.grid)) / span
    abs_time_avg = float(np.trapezoid(np.abs(path.values), path.grid)) / span
    z_over_t = abs(float(path.values[-1])) / t_end
    return ErgodicReport(time_avg, abs_time_avg, z_over_t, span)


def write_path_csv(path, dest):
    """Write `t,value` rows; floats use repr so they round-trip exactly."""
    lines = ["t,value\n"]
    for t, v in zip(path.grid, path.values):
        lines.append(f"{float(t)!r},{float(v)!r}\n")
    if hasattr(dest, "write"):
        dest.write("".join(lines))
    else:
        with open(dest, "w", encoding="ascii") as fh:
            fh.write("".join(lines))
