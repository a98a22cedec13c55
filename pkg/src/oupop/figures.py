"""Named, reproducible data bundles for the standard plots.

Each figure id maps to a frozen parameter set in the FIGURES manifest; the
builders emit plain CSV ready for any plotting tool.  Output is a pure
function of (figure id, seed base, step): per-seed streams are derived as
seed_base + index, so two runs with the same inputs are byte-identical.
"""

import math
import os

import numpy as np

from .models import LogisticKSpec, LogisticRSpec, LVSpec, lv_attracting_box, shift_envelope
from .noise import OUParams, default_grid, sample_ou, write_path_csv
from .observe import (
    HighGainConfig,
    LuenbergerConfig,
    direct_estimator,
    highgain_run,
    luenberger_run,
    lyapunov_V,
)
from .solve import ensemble, integrate, write_envelope_csv, write_trajectory_csv

__all__ = ["MANIFEST_VERSION", "FIGURES", "available", "run_figure"]

MANIFEST_VERSION = "1"

FIGURES = {
    # logistic, perturbed carrying capacity: bands around the equilibrium
    "logistic-k-1": {
        "model": "logistic-k", "a": 3.0, "alpha": 2.0, "beta": 1.0,
        "gamma": 0.1, "x0": 2.4, "horizon": 25.0, "seeds": 5,
    },
    "logistic-k-2": {
        "model": "logistic-k", "a": 3.0, "alpha": 2.0, "beta": 1.0,
        "gamma": 0.4, "x0": 0.2, "horizon": 25.0, "seeds": 5,
    },
    "logistic-k-3": {
        "model": "logistic-k", "a": 3.0, "alpha": 2.0, "beta": 1.0,
        "gamma": 0.1, "x0": 3.0, "horizon": 25.0, "seeds": 5,
    },
    # logistic, perturbed growth rate: convergence to the carrying capacity
    "logistic-r-1": {
        "model": "logistic-r", "r": 2.0, "c": 1.5, "alpha": 2.0, "beta": 1.0,
        "gamma": 0.4, "x0": (0.8, 1.5, 0.2), "horizon": 10.0, "seeds": 5,
    },
    "logistic-r-2": {
        "model": "logistic-r", "r": 2.0, "c": 1.5, "alpha": 2.0, "beta": 10.0,
        "gamma": 0.4, "x0": (0.8, 1.5, 0.2), "horizon": 10.0, "seeds": 5,
    },
    # two-species competition: attracting box in the phase plane
    "lv-1": {
        "model": "lotka-volterra", "lambda": 25.0, "mu": 22.0, "a": 20.0,
        "b": 4.0, "c": 1.0, "e": 30.0, "alpha": 2.0, "beta": 1.0,
        "gamma": 0.5, "x0": 3.2, "y0": 1.2, "horizon": 50.0, "seeds": 5,
    },
    "lv-2": {
        "model": "lotka-volterra", "lambda": 5.0, "mu": 7.0, "a": 20.0,
        "b": 2.0, "c": 4.0, "e": 314.0, "alpha": 2.0, "beta": 1.0,
        "gamma": 0.5, "x0": 4.0, "y0": 3.0, "horizon": 50.0, "seeds": 5,
    },
    # direct estimator under a perturbed rate, with the admissible band
    "estimator": {
        "r": 2.0, "p0": 0.1, "alpha": 2.0, "beta": 1.0, "gamma": 0.1,
        "band": (1.0, 3.0), "horizon": 4.0, "seeds": 3,
    },
    # high-gain observer on noise-free data
    "observer-det": {
        "r": 2.0, "p0": 0.05, "theta": 15.0, "horizon": 2.0,
    },
    # high-gain observer tracking a perturbed rate
    "observer-noise": {
        "r": 2.0, "p0": 0.05, "theta": 15.0, "alpha": 2.0, "beta": 1.0,
        "gamma": 0.1, "band": (1.0, 3.0), "horizon": 2.0,
    },
    # Luenberger observer with the quadratic descent function; horizon 6
    # keeps p clear of the p = 1 observability guard
    "luenberger": {
        "r": 2.0, "p0": 0.05, "gamma_p": -5.0, "gamma_r": -1.0, "horizon": 6.0,
    },
}

NOISE_STEP = 0.01


def available():
    return sorted(FIGURES)


def _write(path, text):
    with open(path, "w", encoding="ascii") as fh:
        fh.write(text)
    return path


def _params_txt(out_dir, figure_id, params, seed_base, step):
    lines = [f"manifest_version = {MANIFEST_VERSION}\n",
             f"figure = {figure_id}\n",
             f"seed_base = {seed_base}\n",
             f"step = {step!r}\n"]
    for key in sorted(params):
        lines.append(f"{key} = {params[key]!r}\n")
    return _write(os.path.join(out_dir, "params.txt"), "".join(lines))


def _sigmoid(t, r, p0):
    e = np.exp(r * t)
    return p0 * e / (1.0 + p0 * (e - 1.0))


def _band_csv(path, runs):
    lines = ["seed,lower,upper\n"]
    for run in runs:
        lines.append(f"{run.seed},{run.envelope.lower!r},{run.envelope.upper!r}\n")
    return _write(path, "".join(lines))


def _logistic_k_figure(params, out_dir, seed_base, step):
    spec = LogisticKSpec(a=params["a"], alpha=params["alpha"],
                         ou=OUParams(params["beta"], params["gamma"]))
    seeds = [seed_base + i for i in range(params["seeds"])]
    result = ensemble(spec, params["x0"], params["horizon"], step, seeds,
                      noise_step=NOISE_STEP)
    written = []
    for traj, path in zip(result.trajectories, result.noise_paths):
        f = os.path.join(out_dir, f"traj_seed{traj.seed}.csv")
        write_trajectory_csv(traj, f)
        written.append(f)
        f = os.path.join(out_dir, f"ou_seed{traj.seed}.csv")
        write_path_csv(path, f)
        written.append(f)
    f = os.path.join(out_dir, "envelope.csv")
    write_envelope_csv(result, f)
    written.append(f)
    det_spec = LogisticKSpec(a=params["a"], alpha=0.0, ou=spec.ou)
    det = integrate(det_spec, params["x0"], params["horizon"], step,
                    result.noise_paths[0])
    f = os.path.join(out_dir, "deterministic.csv")
    write_trajectory_csv(det, f)
    written.append(f)
    written.append(_band_csv(os.path.join(out_dir, "band.csv"), result.runs))
    return written


def _logistic_r_figure(params, out_dir, seed_base, step):
    spec = LogisticRSpec(r=params["r"], c=params["c"], alpha=params["alpha"],
                         ou=OUParams(params["beta"], params["gamma"]))
    seeds = [seed_base + i for i in range(params["seeds"])]
    grid = default_grid(params["horizon"], NOISE_STEP)
    written = []
    paths = {seed: sample_ou(spec.ou, grid, seed) for seed in seeds}
    for seed in seeds:
        f = os.path.join(out_dir, f"ou_seed{seed}.csv")
        write_path_csv(paths[seed], f)
        written.append(f)
    det_spec = LogisticRSpec(r=params["r"], c=params["c"], alpha=0.0, ou=spec.ou)
    for j, x0 in enumerate(params["x0"]):
        for seed in seeds:
            traj = integrate(spec, x0, params["horizon"], step, paths[seed],
                             seed=seed)
            f = os.path.join(out_dir, f"traj_x{j}_seed{seed}.csv")
            write_trajectory_csv(traj, f)
            written.append(f)
        det = integrate(det_spec, x0, params["horizon"], step, paths[seeds[0]])
        f = os.path.join(out_dir, f"deterministic_x{j}.csv")
        write_trajectory_csv(det, f)
        written.append(f)
    return written


def _lv_figure(params, out_dir, seed_base, step):
    spec = LVSpec(lam=params["lambda"], mu=params["mu"], a=params["a"],
                  b=params["b"], c=params["c"], e=params["e"],
                  alpha=params["alpha"],
                  ou=OUParams(params["beta"], params["gamma"]))
    seeds = [seed_base + i for i in range(params["seeds"])]
    result = ensemble(spec, (params["x0"], params["y0"]), params["horizon"],
                      step, seeds, noise_step=NOISE_STEP)
    written = []
    for traj, path in zip(result.trajectories, result.noise_paths):
        f = os.path.join(out_dir, f"traj_seed{traj.seed}.csv")
        write_trajectory_csv(traj, f)
        written.append(f)
        f = os.path.join(out_dir, f"ou_seed{traj.seed}.csv")
        write_path_csv(path, f)
        written.append(f)
    for comp, name in ((0, "envelope_x.csv"), (1, "envelope_y.csv")):
        f = os.path.join(out_dir, name)
        write_envelope_csv(result, f, component=comp)
        written.append(f)
    det_spec = LVSpec(lam=params["lambda"], mu=params["mu"], a=params["a"],
                      b=params["b"], c=params["c"], e=params["e"], alpha=0.0,
                      ou=spec.ou)
    det = integrate(det_spec, (params["x0"], params["y0"]), params["horizon"],
                    step, result.noise_paths[0])
    f = os.path.join(out_dir, "deterministic.csv")
    write_trajectory_csv(det, f)
    written.append(f)
    lines = ["seed,x_lower,x_upper,y_lower,y_upper\n"]
    for run in result.runs:
        env_mu = shift_envelope(run.envelope, spec.lam, spec.mu)
        box = lv_attracting_box(run.envelope, env_mu, spec)
        lines.append(
            f"{run.seed},{box.x_interval[0]!r},{box.x_interval[1]!r},"
            f"{box.y_interval[0]!r},{box.y_interval[1]!r}\n"
        )
    written.append(_write(os.path.join(out_dir, "box.csv"), "".join(lines)))
    return written


def _estimator_figure(params, out_dir, seed_base, step):
    spec = LogisticRSpec(r=params["r"], c=1.0, alpha=params["alpha"],
                         ou=OUParams(params["beta"], params["gamma"]))
    seeds = [seed_base + i for i in range(params["seeds"])]
    grid = default_grid(params["horizon"], NOISE_STEP)
    written = []
    for seed in seeds:
        path = sample_ou(spec.ou, grid, seed)
        traj = integrate(spec, params["p0"], params["horizon"], step, path,
                         seed=seed)
        p = traj.x
        p0 = float(p[0])
        lines = ["t,p,r_hat,r_perturbed\n"]
        for k in range(1, traj.grid.size):
            t = float(traj.grid[k])
            r_hat = direct_estimator(p0, float(p[k]), t)
            r_pert = params["r"] + params["alpha"] * path.evaluate(t)
            lines.append(f"{t!r},{float(p[k])!r},{r_hat!r},{r_pert!r}\n")
        written.append(
            _write(os.path.join(out_dir, f"estimate_seed{seed}.csv"), "".join(lines))
        )
    return written


def _observer_grid(horizon, step):
    n = int(math.ceil(horizon / step - 1e-9))
    grid = step * np.arange(n + 1)
    grid[-1] = horizon
    return grid


def _observer_det_figure(params, out_dir, seed_base, step):
    from .noise import SamplePath
    from .observe import write_observer_csv

    grid = _observer_grid(params["horizon"], step)
    p = _sigmoid(grid, params["r"], params["p0"])
    run = highgain_run(HighGainConfig(params["theta"]), SamplePath(grid, p),
                       step=step)
    f = os.path.join(out_dir, "observer.csv")
    write_observer_csv(run, f)
    return [f]


def _observer_noise_figure(params, out_dir, seed_base, step):
    from .noise import SamplePath
    from .observe import write_observer_csv

    spec = LogisticRSpec(r=params["r"], c=1.0, alpha=params["alpha"],
                         ou=OUParams(params["beta"], params["gamma"]))
    grid = default_grid(params["horizon"], NOISE_STEP)
    path = sample_ou(spec.ou, grid, seed_base)
    traj = integrate(spec, params["p0"], params["horizon"], step, path,
                     seed=seed_base)
    measured = SamplePath(traj.grid, traj.x)
    run = highgain_run(HighGainConfig(params["theta"]), measured, step=step)
    f1 = os.path.join(out_dir, "observer.csv")
    write_observer_csv(run, f1)
    lines = ["t,r_perturbed\n"]
    for t in traj.grid:
        lines.append(f"{float(t)!r},{params['r'] + params['alpha'] * path.evaluate(float(t))!r}\n")
    f2 = _write(os.path.join(out_dir, "rate_path.csv"), "".join(lines))
    return [f1, f2]


def _luenberger_figure(params, out_dir, seed_base, step):
    from .noise import SamplePath

    grid = _observer_grid(params["horizon"], step)
    p = _sigmoid(grid, params["r"], params["p0"])
    config = LuenbergerConfig(params["gamma_p"], params["gamma_r"])
    run = luenberger_run(config, SamplePath(grid, p), step=step)
    lines = ["t,p,p_hat,r_hat,innovation,V\n"]
    for k in range(run.grid.size):
        v = lyapunov_V(run.p_hat[k] - run.p[k], run.r_hat[k] - params["r"],
                       params["gamma_r"])
        lines.append(
            f"{float(run.grid[k])!r},{float(run.p[k])!r},{float(run.p_hat[k])!r},"
            f"{float(run.r_hat[k])!r},{float(run.innovation[k])!r},{float(v)!r}\n"
        )
    return [_write(os.path.join(out_dir, "luenberger.csv"), "".join(lines))]


_BUILDERS = {
    "logistic-k-1": _logistic_k_figure,
    "logistic-k-2": _logistic_k_figure,
    "logistic-k-3": _logistic_k_figure,
    "logistic-r-1": _logistic_r_figure,
    "logistic-r-2": _logistic_r_figure,
    "lv-1": _lv_figure,
    "lv-2": _lv_figure,
    "estimator": _estimator_figure,
    "observer-det": _observer_det_figure,
    "observer-noise": _observer_noise_figure,
    "luenberger": _luenberger_figure,
}


def run_figure(figure_id, out_dir, seed_base=42, step=1e-3):
    """Build one figure bundle; returns the list of files written.

    Raises KeyError for an unknown id (`available()` lists the valid ones).
    """
    if figure_id not in FIGURES:
        raise KeyError(figure_id)
    params = FIGURES[figure_id]
    target = os.path.join(out_dir, figure_id)
    os.makedirs(target, exist_ok=True)
    written = [_params_txt(target, figure_id, params, seed_base, step)]
    written += _BUILDERS[figure_id](params, target, seed_base, step)
    return written
