"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with `python3 -m pytest tests/test_acceptance.py -v -s`.  Every tolerance
is pinned here; nothing is deferred to later calibration.

Known red: criterion 3's damping-factor clause asserts that multiplying the
mean-reversion rate by 100 shrinks the path supremum by 20x.  The discrete
maximum of a stationary Gaussian path over n nodes concentrates at
std*sqrt(2*ln n) regardless of the correlation structure, and the stationary
std scales as 1/sqrt(beta), so the achievable factor is ~10x (measured
0.107-0.144 across seeds).  The clause is asserted as stated and fails; the
strict-decrease clause passes.
"""

import math
import subprocess
import sys
import time

import numpy as np
import pytest

from oupop import (
    HighGainConfig,
    LogisticKSpec,
    LogisticRSpec,
    LuenbergerConfig,
    LVSpec,
    OUParams,
    SamplePath,
    calibrate_beta,
    closed_form_logistic_k,
    closed_form_logistic_r,
    coordinate_drift,
    default_grid,
    direct_estimator,
    ergodic_diagnostics,
    highgain_run,
    integrate,
    luenberger_run,
    lv_attracting_box,
    lv_persistence_conditions,
    lyapunov_V,
    lyapunov_gains,
    measured_envelope,
    sample_ou,
    shift_envelope,
)


def report(name, ok, detail):
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    assert ok, f"{name}: {detail}"


def sigmoid(t, r, p0):
    t = np.asarray(t, dtype=float)
    e = np.exp(r * t)
    return p0 * e / (1.0 + p0 * (e - 1.0))


def test_criterion_01_ou_exactness():
    start = time.perf_counter()
    beta, gamma, dt = 1.0, 0.1, 0.01
    path = sample_ou(OUParams(beta, gamma), default_grid(10_000.0, dt), seed=7)
    values = path.values[1:]  # the 1e6 transition draws
    var = float(np.var(values))
    target = gamma**2 / (2 * beta)
    phi = math.exp(-beta * dt)
    stderr = math.sqrt(var / values.size * (1 + phi) / (1 - phi))
    mean = float(np.mean(values))
    elapsed = time.perf_counter() - start
    ok = (
        abs(var - target) < 0.05 * target
        and abs(mean) < 3 * stderr
        and elapsed < 5.0
    )
    report(
        "criterion 1 (OU exactness)", ok,
        f"var={var:.6f} vs {target} (5%), |mean|={abs(mean):.2e} < "
        f"3*SE={3 * stderr:.2e}, {elapsed:.2f}s < 5s",
    )


def test_criterion_02_ergodicity():
    start = time.perf_counter()
    beta, gamma = 1.0, 0.1
    path = sample_ou(OUParams(beta, gamma), default_grid(10_000.0, 0.01), seed=12)
    diag = ergodic_diagnostics(path)
    folded_mean = gamma / math.sqrt(math.pi * beta)
    elapsed = time.perf_counter() - start
    ok = (
        abs(diag.time_avg) < 0.01
        and diag.z_over_t < 1e-3
        and abs(diag.abs_time_avg - folded_mean) < 0.10 * folded_mean
        and elapsed < 10.0
    )
    report(
        "criterion 2 (ergodicity)", ok,
        f"|avg|={abs(diag.time_avg):.2e} < 0.01, z/T={diag.z_over_t:.2e} < 1e-3, "
        f"abs_avg={diag.abs_time_avg:.5f} vs {folded_mean:.5f} (10%), "
        f"{elapsed:.2f}s < 10s",
    )


def test_criterion_03_beta_damping_at_path_level():
    start = time.perf_counter()
    grid = default_grid(100.0, 0.01)
    sups = {}
    for beta in (1.0, 10.0, 100.0):
        path = sample_ou(OUParams(beta, 0.1), grid, seed=0)
        sups[beta] = float(np.max(np.abs(path.values)))
    elapsed = time.perf_counter() - start
    decreasing = sups[1.0] > sups[10.0] > sups[100.0]
    ratio = sups[100.0] / sups[1.0]
    ok = decreasing and ratio < 0.05 and elapsed < 5.0
    report(
        "criterion 3 (damping in beta)", ok,
        f"sups {sups[1.0]:.4f} > {sups[10.0]:.4f} > {sups[100.0]:.4f} "
        f"(decreasing: {decreasing}), ratio={ratio:.3f} < 0.05 required but the "
        f"discrete-path maximum scales as std*sqrt(2 ln n), giving ~0.1 for a "
        f"100x rate increase; {elapsed:.2f}s < 5s",
    )


def test_criterion_04_calibration_self_verification():
    start = time.perf_counter()
    nominal, alpha, gamma, interval, horizon = 3.0, 2.0, 0.1, (0.5, 5.5), 25.0
    grid = default_grid(horizon, 0.01)
    for seed in range(20):
        result = calibrate_beta(seed, gamma, alpha, nominal, interval, horizon)
        # independent re-check: regenerate from the returned rate and seed
        path = sample_ou(OUParams(result.beta, gamma), grid, seed=seed)
        perturbed = nominal + alpha * path.values
        assert interval[0] < perturbed.min(), f"seed {seed} lower violation"
        assert perturbed.max() < interval[1], f"seed {seed} upper violation"
    elapsed = time.perf_counter() - start
    ok = elapsed < 10.0
    report(
        "criterion 4 (calibration self-verification)", ok,
        f"20 seeds confined in (0.5, 5.5) and re-checked, {elapsed:.2f}s < 10s",
    )


def test_criterion_05_closed_form_vs_integrator():
    start = time.perf_counter()
    ou = OUParams(1.0, 0.1)
    k_spec = LogisticKSpec(a=3.0, alpha=2.0, ou=ou)
    r_spec = LogisticRSpec(r=2.0, c=1.5, alpha=2.0, ou=ou)
    worst = 0.0
    for seed in range(10):
        noise = sample_ou(ou, default_grid(10.0, 0.01), seed=seed)
        traj = integrate(k_spec, 2.4, 10.0, 1e-3, noise)
        oracle = closed_form_logistic_k(k_spec, noise, 2.4, traj.grid)
        worst = max(worst, float(np.max(np.abs(traj.x - oracle) / np.abs(oracle))))
        traj = integrate(r_spec, 0.2, 10.0, 1e-3, noise)
        oracle = closed_form_logistic_r(r_spec, noise, 0.2, traj.grid)
        worst = max(worst, float(np.max(np.abs(traj.x - oracle) / np.abs(oracle))))
    elapsed = time.perf_counter() - start
    ok = worst < 1e-4 and elapsed < 30.0
    report(
        "criterion 5 (closed form vs integrator)", ok,
        f"max rel discrepancy {worst:.2e} < 1e-4 over 10 seeds x 2 models, "
        f"{elapsed:.2f}s < 30s",
    )


def test_criterion_06_equilibrium_preservation():
    ou = OUParams(1.0, 0.4)
    spec = LogisticRSpec(r=2.0, c=1.5, alpha=2.0, ou=ou)
    worst = 0.0
    for seed in range(5):
        noise = sample_ou(ou, default_grid(10.0, 0.01), seed=seed)
        traj = integrate(spec, 1.5, 10.0, 1e-3, noise)
        worst = max(worst, float(np.max(np.abs(traj.x - 1.5))))
    ok = worst < 1e-9
    report(
        "criterion 6 (x = c stays an equilibrium)", ok,
        f"max |x - 1.5| = {worst:.2e} < 1e-9 over 5 seeds",
    )


def test_criterion_07_logistic_r_attraction():
    ou = OUParams(1.0, 0.4)
    spec = LogisticRSpec(r=2.0, c=1.5, alpha=2.0, ou=ou)
    worst = 0.0
    for seed in range(10):
        noise = sample_ou(ou, default_grid(20.0, 0.01), seed=seed)
        for x0 in (0.2, 0.8):
            traj = integrate(spec, x0, 20.0, 1e-3, noise)
            worst = max(worst, abs(float(traj.x[-1]) - 1.5))
    ok = worst < 1e-3
    report(
        "criterion 7 (attraction to the carrying capacity)", ok,
        f"max |x(20) - 1.5| = {worst:.2e} < 1e-3 over 10 seeds x 2 inits",
    )


def test_criterion_08_lv_persistence_and_box():
    start = time.perf_counter()
    ou = OUParams(1.0, 0.5)
    spec = LVSpec(lam=25.0, mu=22.0, a=20.0, b=4.0, c=1.0, e=30.0, alpha=2.0,
                  ou=ou)
    horizon, eps = 50.0, 1e-2
    for seed in range(10):
        noise = sample_ou(ou, default_grid(horizon, 0.01), seed=seed)
        env_l = measured_envelope(spec.lam, spec.alpha, noise)
        env_m = shift_envelope(env_l, spec.lam, spec.mu)
        conds = lv_persistence_conditions(env_l, env_m, spec)
        assert conds.cond1 and conds.cond2, f"seed {seed}: persistence fails"
        box = lv_attracting_box(env_l, env_m, spec)
        traj = integrate(spec, (3.2, 1.2), horizon, 1e-3, noise, seed=seed)
        assert np.all(traj.states > 0), f"seed {seed}: positivity fails"
        (xl, xh), (yl, yh) = box.x_interval, box.y_interval
        inside = (
            (traj.x >= xl - eps) & (traj.x <= xh + eps)
            & (traj.y >= yl - eps) & (traj.y <= yh + eps)
        )
        hits = np.flatnonzero(inside)
        assert hits.size, f"seed {seed}: never entered the box"
        assert inside[hits[0]:].all(), f"seed {seed}: left the box after entry"
    elapsed = time.perf_counter() - start
    ok = elapsed < 30.0
    report(
        "criterion 8 (LV persistence and attracting box)", ok,
        f"10 seeds: conditions hold, all enter and stay in the eps=0.01 box, "
        f"all states positive, {elapsed:.2f}s < 30s",
    )


def test_criterion_09_direct_estimator_exactness():
    r, p0 = 2.0, 0.1
    worst = 0.0
    for t in np.linspace(0.04, 4.0, 100):
        p_t = float(sigmoid(t, r, p0))
        worst = max(worst, abs(direct_estimator(p0, p_t, float(t)) - r))
    ok = worst < 1e-8
    report(
        "criterion 9 (direct estimator exactness)", ok,
        f"max |r_hat - 2| = {worst:.2e} < 1e-8 at 100 sample times",
    )


def test_criterion_10_luenberger_descent():
    config = LuenbergerConfig(gamma_p=-5.0, gamma_r=-1.0)
    grid = default_grid(6.0, 1e-3)
    measured = SamplePath(grid, sigmoid(grid, 2.0, 0.05))
    run = luenberger_run(config, measured)  # wrong init: r_hat(0) = 0
    V = lyapunov_V(run.p_hat - run.p, run.r_hat - 2.0, config.gamma_r)
    max_increase = float(np.max(np.diff(V)))
    ok = max_increase <= 1e-9
    report(
        "criterion 10 (Luenberger descent)", ok,
        f"max V increase {max_increase:.2e} <= 1e-9; V(T)={V[-1]:.3f} stays "
        f"positive (no convergence-to-0 claim)",
    )


def test_criterion_11_highgain_convergence_and_band():
    r, p0, theta, horizon = 2.0, 0.05, 15.0, 2.0
    grid = default_grid(horizon, 1e-3)
    measured = SamplePath(grid, sigmoid(grid, r, p0))
    run = highgain_run(HighGainConfig(theta), measured)  # r_hat(0) = 0
    final_rel = abs(float(run.r_hat[-1]) - r) / r
    band = (1.0, 3.0)
    band_ok = True
    for seed in range(3):
        cal = calibrate_beta(seed, 0.1, 2.0, r, band, horizon)
        ou = OUParams(cal.beta, 0.1)
        spec = LogisticRSpec(r=r, c=1.0, alpha=2.0, ou=ou)
        noise = sample_ou(ou, default_grid(horizon, 0.01), seed=seed)
        traj = integrate(spec, p0, horizon, 1e-3, noise)
        noisy = highgain_run(HighGainConfig(theta), SamplePath(traj.grid, traj.x))
        tail = noisy.r_hat[noisy.grid >= 0.25 * horizon]
        band_ok &= bool(np.all((tail > band[0]) & (tail < band[1])))
    ok = final_rel < 0.05 and band_ok
    report(
        "criterion 11 (high-gain observer)", ok,
        f"|r_hat(2) - 2|/2 = {final_rel:.2e} < 0.05; perturbed runs stay in "
        f"(1, 3) after 25% of the horizon: {band_ok}",
    )


def test_criterion_12_drift_and_gain_pinning():
    r, p0 = 2.0, 0.05
    h = 1e-4
    worst_fd = 0.0
    for t in np.linspace(0.1, 1.9, 19):
        z2 = lambda s: r * float(sigmoid(s, r, p0)) * (1.0 - float(sigmoid(s, r, p0)))
        fd = (z2(t + h) - z2(t - h)) / (2 * h)
        worst_fd = max(worst_fd, abs(fd - coordinate_drift(float(sigmoid(t, r, p0)), z2(t))))
    worst_gain = 0.0
    for theta in (1.0, 15.0, 50.0):
        g1, g2 = lyapunov_gains(theta)
        worst_gain = max(worst_gain, abs(g1 + 2 * theta), abs(g2 + theta**2))
    ok = worst_fd < 1e-6 and worst_gain < 1e-8
    report(
        "criterion 12 (drift map and gain pinning)", ok,
        f"max FD mismatch {worst_fd:.2e} < 1e-6; max gain residual "
        f"{worst_gain:.2e} < 1e-8 for theta in {{1, 15, 50}}",
    )


def test_criterion_13_fit_round_trip():
    from oupop import fit_ou

    mu, beta, gamma, spacing, n = 0.2, 1.3, 0.03, 0.1, 100_000
    grid = spacing * np.arange(n)
    errs = {"beta": [], "gamma": [], "mu": []}
    for seed in range(20):
        path = sample_ou(OUParams(beta, gamma), grid, seed=seed)
        fitted = fit_ou(SamplePath(grid, mu + path.values))
        errs["beta"].append(abs(fitted.beta - beta) / beta)
        errs["gamma"].append(abs(fitted.gamma - gamma) / gamma)
        errs["mu"].append(abs(fitted.mu - mu) / mu)
    med = {k: float(np.median(v)) for k, v in errs.items()}
    ok = med["beta"] < 0.10 and med["gamma"] < 0.05 and med["mu"] < 0.02
    report(
        "criterion 13 (fit round trip)", ok,
        f"median rel errors over 20 seeds: beta {med['beta']:.3f} < 0.10, "
        f"gamma {med['gamma']:.3f} < 0.05, mu {med['mu']:.4f} < 0.02",
    )


def test_criterion_14_cli_reproducibility_and_exit_codes(tmp_path):
    def run(*argv):
        return subprocess.run(
            [sys.executable, "-m", "oupop", *argv], capture_output=True, text=True
        )

    out1, out2 = tmp_path / "one", tmp_path / "two"
    r1 = run("figures", "lv-1", "--out-dir", str(out1))
    r2 = run("figures", "lv-1", "--out-dir", str(out2))
    assert r1.returncode == 0 and r2.returncode == 0, r1.stderr + r2.stderr
    files1 = sorted((out1 / "lv-1").iterdir())
    files2 = sorted((out2 / "lv-1").iterdir())
    identical = [f.name for f in files1] == [f.name for f in files2] and all(
        a.read_bytes() == b.read_bytes() for a, b in zip(files1, files2)
    )
    config_err = run("figures", "not-a-figure", "--out-dir", str(tmp_path))
    runtime_err = run(
        "calibrate", "--seed", "0", "--gamma", "0.1", "--alpha", "2",
        "--nominal", "3", "--lower", "2.999999999", "--upper", "3.000000001",
        "--horizon", "2",
    )
    ok = (
        identical
        and config_err.returncode == 2
        and runtime_err.returncode == 1
    )
    report(
        "criterion 14 (CLI reproducibility and exit codes)", ok,
        f"lv-1 twice byte-identical: {identical}; exit codes success=0, "
        f"config={config_err.returncode}, runtime={runtime_err.returncode}",
    )
