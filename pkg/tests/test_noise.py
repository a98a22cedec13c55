import io
import math

import numpy as np
import pytest

from oupop import (
    CalibrationError,
    EnvelopeBounds,
    GridError,
    OUParams,
    ParameterError,
    PathRangeError,
    SamplePath,
    calibrate_beta,
    default_grid,
    ergodic_diagnostics,
    evaluate_path,
    measured_envelope,
    sample_ou,
    sample_wiener,
    write_path_csv,
)
from oupop.fit import load_series_csv


def test_ou_params_validation():
    with pytest.raises(ParameterError):
        OUParams(0.0, 0.1)
    with pytest.raises(ParameterError):
        OUParams(1.0, -0.1)
    p = OUParams(2.0, 0.1)
    assert p.stationary_std == pytest.approx(0.1 / math.sqrt(4.0))


def test_sample_path_validation():
    with pytest.raises(GridError):
        SamplePath([0.0, 0.0, 1.0], [1.0, 2.0, 3.0])
    with pytest.raises(GridError):
        SamplePath([0.0, 1.0], [1.0])
    with pytest.raises(ParameterError):
        SamplePath([0.0, 1.0], [1.0, np.nan])
    path = SamplePath([0.0, 1.0], [1.0, 2.0])
    with pytest.raises(AttributeError):
        path.values = np.zeros(2)
    with pytest.raises(ValueError):
        path.values[0] = 5.0  # arrays are frozen too


def test_wiener_starts_at_zero():
    path = sample_wiener([0.0], seed=3)
    assert path.values.tolist() == [0.0]
    with pytest.raises(GridError):
        sample_wiener([1.0, 2.0], seed=3)


def test_wiener_increment_variance():
    # chi-square concentration: 1e5 increments of variance dt = 0.01
    grid = default_grid(1000.0, 0.01)
    path = sample_wiener(grid, seed=11)
    incr = np.diff(path.values)
    assert incr.size == 100_000
    assert np.var(incr) == pytest.approx(0.01, rel=0.05)
    assert abs(np.mean(incr)) < 3 * 0.1 / math.sqrt(incr.size)


def test_wiener_deterministic():
    grid = default_grid(5.0, 0.01)
    a = sample_wiener(grid, seed=9)
    b = sample_wiener(grid, seed=9)
    c = sample_wiener(grid, seed=10)
    assert np.array_equal(a.values, b.values)
    assert not np.array_equal(a.values, c.values)


def test_ou_deterministic_bit_exact():
    grid = default_grid(10.0, 0.01)
    a = sample_ou(OUParams(1.0, 0.1), grid, seed=4)
    b = sample_ou(OUParams(1.0, 0.1), grid, seed=4)
    assert np.array_equal(a.values, b.values)


def test_ou_stationary_variance():
    grid = default_grid(10_000.0, 0.01)
    path = sample_ou(OUParams(1.0, 0.1), grid, seed=7)
    assert np.var(path.values) == pytest.approx(0.005, rel=0.05)


def test_ou_noiseless_limit_is_exponential_decay():
    grid = default_grid(10.0, 0.01)
    path = sample_ou(OUParams(2.0, 1e-12), grid, seed=0, init=1.0)
    expected = np.exp(-2.0 * grid)
    assert np.max(np.abs(path.values - expected)) < 1e-6


def test_ou_larger_beta_damps_same_seed():
    grid = default_grid(100.0, 0.01)
    sup = {}
    for beta in (1.0, 10.0, 100.0, 1e4):
        path = sample_ou(OUParams(beta, 0.1), grid, seed=5)
        sup[beta] = np.max(np.abs(path.values))
    assert sup[1.0] > sup[10.0] > sup[100.0] > sup[1e4]
    assert sup[1e4] < 0.05 * sup[1.0]  # flattens toward zero as beta grows


def test_ou_stationary_pooled_moments():
    # marginal of every node is N(0, gamma^2/(2*beta)); pool over seeds
    grid = default_grid(10.0, 0.01)
    means = []
    pooled = []
    for seed in range(400):
        path = sample_ou(OUParams(1.0, 0.1), grid, seed=seed)
        means.append(path.values.mean())
        pooled.append(path.values)
    pooled = np.concatenate(pooled)
    stderr = np.std(means) / math.sqrt(len(means))
    assert abs(pooled.mean()) < 3 * stderr
    assert np.var(pooled) == pytest.approx(0.005, rel=0.05)


def test_ou_stationary_init_consumes_one_draw():
    grid = default_grid(1.0, 0.1)
    stat = sample_ou(OUParams(1.0, 0.1), grid, seed=2)
    fixed = sample_ou(OUParams(1.0, 0.1), grid, seed=2, init=0.0)
    # same stream, but the stationary variant spends the first normal on z0
    assert stat.values[0] != 0.0
    assert fixed.values[0] == 0.0
    assert not np.array_equal(stat.values[1:], fixed.values[1:])


def test_evaluate_path():
    path = SamplePath([0.0, 1.0, 3.0], [0.0, 1.0, 5.0])
    assert evaluate_path(path, 1.0) == 1.0
    assert evaluate_path(path, 0.5) == 0.5
    assert evaluate_path(path, 3.0) == 5.0
    out = evaluate_path(path, [0.0, 2.0])
    assert out.tolist() == [0.0, 3.0]
    with pytest.raises(PathRangeError):
        evaluate_path(path, 3.0001)
    const = SamplePath([0.0, 1.0, 2.0], [2.5, 2.5, 2.5])
    for t in (0.0, 0.3, 1.7, 2.0):
        assert evaluate_path(const, t) == 2.5


def test_calibrate_beta_no_noise():
    result = calibrate_beta(1, gamma=0.1, alpha=0.0, nominal=3.0,
                            interval=(0.5, 5.5), horizon=5.0, beta_start=2.0)
    assert result.beta == 2.0
    assert result.envelope == EnvelopeBounds(3.0, 3.0)


def test_calibrate_beta_self_verifies():
    for seed in (0, 1, 2, 3):
        result = calibrate_beta(seed, gamma=0.1, alpha=2.0, nominal=3.0,
                                interval=(0.5, 5.5), horizon=25.0)
        grid = default_grid(25.0, 0.01)
        path = sample_ou(OUParams(result.beta, 0.1), grid, seed=seed)
        perturbed = 3.0 + 2.0 * path.values
        assert 0.5 < perturbed.min()
        assert perturbed.max() < 5.5
        assert result.envelope.lower == pytest.approx(perturbed.min())
        assert result.envelope.upper == pytest.approx(perturbed.max())


def test_calibrate_beta_tight_interval_fails():
    with pytest.raises(CalibrationError) as exc_info:
        calibrate_beta(3, gamma=0.1, alpha=2.0, nominal=3.0,
                       interval=(3.0 - 1e-9, 3.0 + 1e-9), horizon=2.0,
                       max_doublings=20)
    err = exc_info.value
    assert err.best_envelope.width > 2e-9
    assert err.beta_max == 2.0**20


def test_calibrate_beta_rejects_bad_interval():
    with pytest.raises(ParameterError):
        calibrate_beta(0, gamma=0.1, alpha=1.0, nominal=3.0,
                       interval=(3.5, 5.0), horizon=1.0)


def test_measured_envelope():
    path = SamplePath([0.0, 1.0, 2.0], [-0.5, 0.25, 0.1])
    env = measured_envelope(3.0, 2.0, path)
    assert env == EnvelopeBounds(2.0, 3.5)


def test_ergodic_zero_path():
    path = SamplePath([0.0, 1.0, 2.0], [0.0, 0.0, 0.0])
    report = ergodic_diagnostics(path)
    assert report.time_avg == 0.0
    assert report.abs_time_avg == 0.0
    assert report.z_over_t == 0.0


def test_ergodic_matches_folded_gaussian_mean():
    grid = default_grid(10_000.0, 0.01)
    path = sample_ou(OUParams(1.0, 0.1), grid, seed=12)
    report = ergodic_diagnostics(path)
    assert abs(report.time_avg) < 0.01
    assert report.abs_time_avg == pytest.approx(0.1 / math.sqrt(math.pi), rel=0.10)
    assert report.z_over_t < 1e-3


def test_ergodic_decay_with_horizon():
    params = OUParams(1.0, 0.1)
    short = ergodic_diagnostics(sample_ou(params, default_grid(1000.0, 0.01), seed=8))
    # same stream, ten times the horizon
    long = ergodic_diagnostics(sample_ou(params, default_grid(10_000.0, 0.01), seed=8))
    slack = 2 * 0.1 / math.sqrt(1000.0)
    assert abs(long.time_avg) <= abs(short.time_avg) + slack
    assert long.z_over_t <= short.z_over_t + 1e-4


def test_ergodic_single_point_grid():
    with pytest.raises(GridError):
        ergodic_diagnostics(SamplePath([0.0], [1.0]))


def test_default_grid_covers_horizon():
    grid = default_grid(10.0, 0.01)
    assert grid[0] == 0.0
    assert grid[-1] >= 10.0
    assert np.all(np.diff(grid) > 0)


def test_path_csv_roundtrip(tmp_path):
    grid = default_grid(1.0, 0.01)
    path = sample_ou(OUParams(1.3, 0.03), grid, seed=21)
    dest = tmp_path / "series.csv"
    write_path_csv(path, dest)
    back = load_series_csv(dest)
    assert np.array_equal(back.grid, path.grid)
    assert np.array_equal(back.values, path.values)


def test_path_csv_writes_to_file_like():
    path = SamplePath([0.0, 0.5], [0.1, -0.2])
    buf = io.StringIO()
    write_path_csv(path, buf)
    assert buf.getvalue() == "t,value\n0.0,0.1\n0.5,-0.2\n"
