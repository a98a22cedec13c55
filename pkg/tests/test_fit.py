import io

import numpy as np
import pytest

from oupop import (
    GridError,
    NonMeanRevertingError,
    OUParams,
    SamplePath,
    SeriesFormatError,
    fit_ou,
    format_fit_report,
    load_series_csv,
    sample_ou,
)


def synthetic_series(mu=0.2, beta=1.3, gamma=0.03, spacing=0.1, n=100_000, seed=0):
    grid = spacing * np.arange(n)
    path = sample_ou(OUParams(beta, gamma), grid, seed=seed)
    return SamplePath(grid, mu + path.values)


def test_round_trip_recovers_parameters():
    series = synthetic_series(seed=5)
    fitted = fit_ou(series)
    assert fitted.beta == pytest.approx(1.3, rel=0.10)
    assert fitted.gamma == pytest.approx(0.03, rel=0.05)
    assert fitted.mu == pytest.approx(0.2, rel=0.02)
    assert fitted.n_points == 100_000
    assert fitted.residual_std > 0


def test_constant_series_is_degenerate():
    grid = 0.1 * np.arange(10)
    with pytest.raises(NonMeanRevertingError):
        fit_ou(SamplePath(grid, np.full(10, 0.2)))


def test_explosive_series_rejected():
    grid = 0.1 * np.arange(50)
    values = 0.01 * 1.1 ** np.arange(50) + np.sin(grid) * 1e-4
    with pytest.raises(NonMeanRevertingError):
        fit_ou(SamplePath(grid, values))


def test_needs_three_points_and_uniform_grid():
    with pytest.raises(GridError):
        fit_ou(SamplePath([0.0, 0.1], [0.1, 0.2]))
    with pytest.raises(GridError):
        fit_ou(SamplePath([0.0, 0.1, 0.3, 0.4], [0.1, 0.2, 0.15, 0.18]))


def test_scale_equivariance():
    series = synthetic_series(n=20_000, seed=9)
    fitted = fit_ou(series)
    k = 3.7
    scaled = fit_ou(SamplePath(series.grid, k * series.values))
    assert scaled.beta == pytest.approx(fitted.beta, rel=1e-9)
    assert scaled.mu == pytest.approx(k * fitted.mu, rel=1e-9)
    assert scaled.gamma == pytest.approx(k * fitted.gamma, rel=1e-9)


def test_time_rescale_equivariance():
    series = synthetic_series(spacing=0.1, n=20_000, seed=9)
    fitted = fit_ou(series)
    relabeled = fit_ou(SamplePath(0.2 * np.arange(20_000), series.values))
    assert relabeled.beta == pytest.approx(fitted.beta / 2.0, rel=1e-12)


def test_load_series_csv_well_formed():
    text = "t,value\n0.0,0.1\n0.5,0.2\n1.0,0.15\n"
    path = load_series_csv(io.StringIO(text))
    assert len(path) == 3
    assert path.values.tolist() == [0.1, 0.2, 0.15]


def test_load_series_csv_names_bad_line():
    text = "t,value\n0.0,0.1\n0.5,oops\n1.0,0.15\n"
    with pytest.raises(SeriesFormatError) as exc_info:
        load_series_csv(io.StringIO(text))
    assert exc_info.value.line_no == 3
    assert "line 3" in str(exc_info.value)


def test_load_series_csv_rejects_nan():
    text = "t,value\n0.0,0.1\n0.5,nan\n1.0,0.15\n"
    with pytest.raises(SeriesFormatError) as exc_info:
        load_series_csv(io.StringIO(text))
    assert exc_info.value.line_no == 3


def test_load_series_csv_duplicate_timestamp():
    text = "t,value\n0.0,0.1\n0.5,0.2\n0.5,0.15\n"
    with pytest.raises(GridError):
        load_series_csv(io.StringIO(text))


def test_load_series_csv_needs_header_and_rows():
    with pytest.raises(SeriesFormatError) as exc_info:
        load_series_csv(io.StringIO("time,val\n0.0,0.1\n"))
    assert exc_info.value.line_no == 1
    with pytest.raises(SeriesFormatError):
        load_series_csv(io.StringIO("t,value\n0.0,0.1\n1.0,0.2\n"))


def test_format_fit_report_is_parseable():
    fitted = fit_ou(synthetic_series(n=5000, seed=1))
    report = format_fit_report(fitted)
    parsed = {}
    for line in report.strip().splitlines():
        key, value = line.split(" = ")
        parsed[key] = float(value)
    assert parsed["beta"] == pytest.approx(fitted.beta)
    assert parsed["n_points"] == 5000
