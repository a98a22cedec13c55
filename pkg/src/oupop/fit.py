"""Fit mean-reverting noise parameters from a uniformly sampled series.

Ordinary least squares on the one-step transition v[k+1] ~ c + a*v[k]
inverts the exact discretization used by the sampler in `noise`:

    beta  = -ln(a)/D          (D the grid spacing)
    mu    = c/(1 - a)
    gamma = s*sqrt(2*beta/(1 - a**2))

with s the residual standard deviation (denominator n-2 for the two
regression parameters).  Fitting and simulation are therefore mutually
inverse: a series generated with (mu, beta, gamma) is recovered up to
sampling noise.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import GridError, NonMeanRevertingError, SeriesFormatError
from .noise import SamplePath

__all__ = ["FittedOU", "fit_ou", "load_series_csv", "format_fit_report"]


@dataclass(frozen=True)
class FittedOU:
    """Mean level, reversion rate, volatility, and fit diagnostics."""

    mu: float
    beta: float
    gamma: float
    residual_std: float
    n_points: int


def fit_ou(series):
    """Fit (mu, beta, gamma) to a uniformly spaced series by AR(1) regression.

    Raises:
        GridError: fewer than 3 points or relative spacing nonuniformity
            above 1e-9.
        NonMeanRevertingError: regression slope outside (0, 1), including the
            degenerate constant-series case.
    """
    if len(series) < 3:
        raise GridError("fit needs at least 3 points")
    d = np.diff(series.grid)
    spacing = float(d.mean())
    if np.max(np.abs(d - spacing)) > 1e-9 * spacing:
        raise GridError("fit needs a uniformly spaced grid")
    v = series.values
    x = v[:-1]
    y = v[1:]
    mx = x.mean()
    my = y.mean()
    sxx = float(np.sum((x - mx) ** 2))
    if sxx == 0.0:
        raise NonMeanRevertingError(
            "constant series: the transition regression is degenerate"
        )
    slope = float(np.sum((x - mx) * (y - my))) / sxx
    if not (0.0 < slope < 1.0):
        raise NonMeanRevertingError(
            f"transition slope {slope:.6g} outside (0, 1); "
            "the series is not mean-reverting"
        )
    intercept = my - slope * mx
    resid = y - (intercept + slope * x)
    m = x.size
    s = math.sqrt(float(np.sum(resid**2)) / (m - 2))
    if s == 0.0:
        raise NonMeanRevertingError(
            "zero residual variance: no volatility can be identified"
        )
    beta = -math.log(slope) / spacing
    mu = intercept / (1.0 - slope)
    gamma = s * math.sqrt(2.0 * beta / (1.0 - slope**2))
    return FittedOU(
        mu=float(mu),
        beta=float(beta),
        gamma=float(gamma),
        residual_std=float(s),
        n_points=len(series),
    )


def load_series_csv(source):
    """Parse a `t,value` CSV into a SamplePath.

    Raises:
        SeriesFormatError: missing header, malformed or non-finite cell
            (the error names the 1-based line), or fewer than 3 rows.
        GridError: non-increasing timestamps.
    """
    if hasattr(source, "read"):
        text = source.read()
    else:
        with open(source, "r", encoding="utf-8") as fh:
            text = fh.read()
    lines = text.splitlines()
    if not lines or lines[0].strip() != "t,value":
        raise SeriesFormatError("expected header `t,value` on line 1", line_no=1)
    ts = []
    vs = []
    for idx, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        cells = line.split(",")
        if len(cells) != 2:
            raise SeriesFormatError(
                f"line {idx}: expected 2 fields, got {len(cells)}", line_no=idx
            )
        try:
            t = float(cells[0])
            v = float(cells[1])
        except ValueError:
            raise SeriesFormatError(
                f"line {idx}: non-numeric cell in {line!r}", line_no=idx
            ) from None
        if not (math.isfinite(t) and math.isfinite(v)):
            raise SeriesFormatError(
                f"line {idx}: non-finite value in {line!r}", line_no=idx
            )
        ts.append(t)
        vs.append(v)
    if len(ts) < 3:
        raise SeriesFormatError(f"need at least 3 rows, got {len(ts)}")
    grid = np.asarray(ts)
    if not np.all(np.diff(grid) > 0):
        raise GridError("timestamps must be strictly increasing")
    return SamplePath(grid, np.asarray(vs))


def format_fit_report(fitted):
    """Key = value report, one line per field; machine-parseable."""
    return (
        f"mu = {fitted.mu!r}\n"
        f"beta = {fitted.beta!r}\n"
        f"gamma = {fitted.gamma!r}\n"
        f"residual_std = {fitted.residual_std!r}\n"
        f"n_points = {fitted.n_points}\n"
    )
