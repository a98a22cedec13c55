"""Command-line scenario runner.

Subcommands: simulate, calibrate, observe, fit, figures.  Shared flags
--out-dir, --seed-base, --step go after the subcommand.  Exit codes: 0 on
success, 1 on a runtime or model failure, 2 on a configuration failure.

Scenario files are flat `key = value` text, one key per line, `#` starts a
comment.  Per-seed streams are derived as seed_base + index (seed base 42 by
default), so runs are byte-reproducible.

logistic-k example (noise on the carrying capacity):

    model = logistic-k
    a = 3.0
    alpha = 2.0
    gamma = 0.1
    beta = 1.0
    x0 = 2.4
    horizon = 25.0
    seeds = 5
    eps = 0.01

logistic-r example (noise on the growth rate):

    model = logistic-r
    r = 2.0
    c = 1.5
    alpha = 2.0
    gamma = 0.4
    beta = 1.0
    x0 = 0.8
    horizon = 10.0
    seeds = 5
    eps = 0.001

lotka-volterra example, calibrating the reversion rate per seed so the
perturbed growth rate stays inside a target interval instead of fixing beta:

    model = lotka-volterra
    lambda = 25.0
    mu = 22.0
    a = 20.0
    b = 4.0
    c = 1.0
    e = 30.0
    alpha = 2.0
    gamma = 0.5
    target-lower = 22.0
    target-upper = 28.0
    beta-start = 1.0
    x0 = 3.2
    y0 = 1.2
    horizon = 50.0
    seeds = 5
    eps = 0.01

Optional keys: step, noise-step, eps, beta-start, and envelope-lower /
envelope-upper (hand-typed envelopes are refused unless --trust-envelope is
passed; the override is logged to stderr).
"""

import argparse
import math
import os
import sys
from dataclasses import dataclass

from . import figures as figures_mod
from .errors import OupopError, ParameterError
from .fit import fit_ou, format_fit_report, load_series_csv
from .models import (
    LogisticKSpec,
    LogisticRSpec,
    LVSpec,
    logistic_k_attracting_interval,
    lv_attracting_box,
    lv_persistence_conditions,
    shift_envelope,
)
from .noise import (
    EnvelopeBounds,
    OUParams,
    SamplePath,
    calibrate_beta,
    default_grid,
    sample_ou,
    write_path_csv,
)
from .observe import (
    HighGainConfig,
    LuenbergerConfig,
    direct_estimator,
    highgain_run,
    luenberger_run,
    write_observer_csv,
)
from .solve import (
    absorption_report,
    ensemble,
    integrate,
    write_envelope_csv,
    write_trajectory_csv,
)

__all__ = ["main", "spec_to_scenario_keys"]


class ConfigError(ValueError):
    """Scenario or flag validation failure; maps to exit code 2."""


def spec_to_scenario_keys(spec):
    """Flat scenario keys for one model spec; inverse of the scenario parser.

    Covers the model portion (coefficients, alpha, gamma, beta); run keys
    (x0, horizon, seeds, ...) are the caller's to add.
    """
    if isinstance(spec, LogisticKSpec):
        keys = {"model": "logistic-k", "a": repr(spec.a)}
    elif isinstance(spec, LogisticRSpec):
        keys = {"model": "logistic-r", "r": repr(spec.r), "c": repr(spec.c)}
    elif isinstance(spec, LVSpec):
        keys = {
            "model": "lotka-volterra", "lambda": repr(spec.lam),
            "mu": repr(spec.mu), "a": repr(spec.a), "b": repr(spec.b),
            "c": repr(spec.c), "e": repr(spec.e),
        }
    else:
        raise ParameterError(f"unknown model spec {type(spec).__name__}")
    keys["alpha"] = repr(spec.alpha)
    keys["gamma"] = repr(spec.ou.gamma)
    keys["beta"] = repr(spec.ou.beta)
    return keys


@dataclass
class Scenario:
    model: str
    params: dict
    alpha: float
    gamma: float
    beta: float
    target: tuple
    beta_start: float
    envelope: tuple
    x0: float
    y0: float
    horizon: float
    step: float
    noise_step: float
    seeds: int
    eps: float


def _parse_kv(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read scenario file: {exc}") from None
    out = {}
    for idx, line in enumerate(lines, start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"line {idx}: expected `key = value`, got {line!r}")
        key, value = body.split("=", 1)
        key = key.strip()
        value = value.strip()
        if key in out:
            raise ConfigError(f"line {idx}: duplicate key `{key}`")
        out[key] = value
    return out


def _fnum(raw, key):
    try:
        value = float(raw[key])
    except ValueError:
        raise ConfigError(f"key `{key}` is not a number: {raw[key]!r}") from None
    if not math.isfinite(value):
        raise ConfigError(f"key `{key}` must be finite, got {raw[key]!r}")
    return value


def _need(raw, key):
    if key not in raw:
        raise ConfigError(f"missing required key `{key}`")
    return _fnum(raw, key)


_MODEL_KEYS = {
    "logistic-k": ("a",),
    "logistic-r": ("r", "c"),
    "lotka-volterra": ("lambda", "mu", "a", "b", "c", "e"),
}


def _validate_scenario(raw):
    if "model" not in raw:
        raise ConfigError("missing required key `model`")
    model = raw["model"]
    if model not in _MODEL_KEYS:
        raise ConfigError(
            f"unknown model {model!r}; choose from {sorted(_MODEL_KEYS)}"
        )
    params = {key: _need(raw, key) for key in _MODEL_KEYS[model]}
    alpha = _need(raw, "alpha")
    gamma = _need(raw, "gamma")
    x0 = _need(raw, "x0")
    horizon = _need(raw, "horizon")
    y0 = _need(raw, "y0") if model == "lotka-volterra" else None
    if "seeds" not in raw:
        raise ConfigError("missing required key `seeds`")
    try:
        seeds = int(raw["seeds"])
    except ValueError:
        raise ConfigError(f"key `seeds` is not an integer: {raw['seeds']!r}") from None
    if seeds < 1:
        raise ConfigError(f"key `seeds` must be >= 1, got {seeds}")

    has_beta = "beta" in raw
    has_target = "target-lower" in raw or "target-upper" in raw
    if has_beta and has_target:
        raise ConfigError("give either `beta` or a target interval, not both")
    if has_target:
        target = (_need(raw, "target-lower"), _need(raw, "target-upper"))
        beta = None
    elif has_beta:
        beta = _fnum(raw, "beta")
        target = None
    else:
        raise ConfigError(
            "missing required key `beta` (or `target-lower`/`target-upper`)"
        )
    beta_start = _fnum(raw, "beta-start") if "beta-start" in raw else 1.0

    envelope = None
    if "envelope-lower" in raw or "envelope-upper" in raw:
        envelope = (_need(raw, "envelope-lower"), _need(raw, "envelope-upper"))

    step = _fnum(raw, "step") if "step" in raw else None
    noise_step = _fnum(raw, "noise-step") if "noise-step" in raw else 0.01
    eps = _fnum(raw, "eps") if "eps" in raw else 0.01

    known = {
        "model", "alpha", "gamma", "x0", "y0", "horizon", "seeds", "beta",
        "target-lower", "target-upper", "beta-start", "envelope-lower",
        "envelope-upper", "step", "noise-step", "eps",
    } | set(_MODEL_KEYS[model])
    for key in raw:
        if key not in known:
            raise ConfigError(f"unknown key `{key}`")

    return Scenario(
        model=model, params=params, alpha=alpha, gamma=gamma, beta=beta,
        target=target, beta_start=beta_start, envelope=envelope, x0=x0, y0=y0,
        horizon=horizon, step=step, noise_step=noise_step, seeds=seeds, eps=eps,
    )


def _build_spec(sc):
    ou = OUParams(sc.beta if sc.beta is not None else sc.beta_start, sc.gamma)
    try:
        if sc.model == "logistic-k":
            return LogisticKSpec(a=sc.params["a"], alpha=sc.alpha, ou=ou)
        if sc.model == "logistic-r":
            return LogisticRSpec(r=sc.params["r"], c=sc.params["c"],
                                 alpha=sc.alpha, ou=ou)
        return LVSpec(lam=sc.params["lambda"], mu=sc.params["mu"],
                      a=sc.params["a"], b=sc.params["b"], c=sc.params["c"],
                      e=sc.params["e"], alpha=sc.alpha, ou=ou)
    except ParameterError as exc:
        raise ConfigError(str(exc)) from None


def _region_for_seed(sc, spec, envelope):
    """Absorption region from one seed's envelope; None when undefined."""
    if sc.model == "logistic-k":
        return logistic_k_attracting_interval(envelope, eps=0.0)
    if sc.model == "logistic-r":
        return (spec.c, spec.c)
    env_mu = shift_envelope(envelope, spec.lam, spec.mu)
    conds = lv_persistence_conditions(envelope, env_mu, spec)
    if not conds:
        return None
    return lv_attracting_box(envelope, env_mu, spec)


def _write_absorption_csv(path, sc, rows):
    if sc.model == "lotka-volterra":
        header = "seed,entry_time,stayed,x_lower,x_upper,y_lower,y_upper\n"
    else:
        header = "seed,entry_time,stayed,region_lower,region_upper\n"
    lines = [header]
    for seed, report, region in rows:
        entry = "" if report is None or report.entry_time is None else repr(report.entry_time)
        stayed = "" if report is None else str(report.stayed).lower()
        if region is None:
            cells = [""] * (4 if sc.model == "lotka-volterra" else 2)
        elif sc.model == "lotka-volterra":
            cells = [repr(float(region.x_interval[0])), repr(float(region.x_interval[1])),
                     repr(float(region.y_interval[0])), repr(float(region.y_interval[1]))]
        else:
            cells = [repr(float(region[0])), repr(float(region[1]))]
        lines.append(",".join([str(seed), entry, stayed] + cells) + "\n")
    with open(path, "w", encoding="ascii") as fh:
        fh.write("".join(lines))


def cmd_simulate(args):
    sc = _validate_scenario(_parse_kv(args.scenario))
    step = args.step if args.step is not None else (sc.step or 1e-3)
    seeds = [args.seed_base + i for i in range(sc.seeds)]
    spec = _build_spec(sc)
    trusted = None
    if sc.envelope is not None:
        if not args.trust_envelope:
            raise ConfigError(
                "keys `envelope-lower`/`envelope-upper` are only honored with "
                "--trust-envelope"
            )
        trusted = EnvelopeBounds(*sc.envelope)
        print(
            f"note: trusting provided envelope [{trusted.lower:g}, "
            f"{trusted.upper:g}] instead of measured ones (--trust-envelope)",
            file=sys.stderr,
        )
    x0 = (sc.x0, sc.y0) if sc.model == "lotka-volterra" else sc.x0
    result = ensemble(
        spec, x0, sc.horizon, step, seeds, noise_step=sc.noise_step,
        target_interval=sc.target, beta_start=sc.beta_start,
    )
    if sc.model == "logistic-k":
        for run in result.runs:
            env = trusted if trusted is not None else run.envelope
            if env.lower <= 0:
                raise ParameterError(
                    f"seed {run.seed}: perturbed carrying capacity envelope "
                    f"[{env.lower:g}, {env.upper:g}] is not strictly positive; "
                    "raise beta, lower alpha, or calibrate to a positive interval"
                )
    out = args.out_dir
    os.makedirs(out, exist_ok=True)
    for traj, path in zip(result.trajectories, result.noise_paths):
        write_path_csv(path, os.path.join(out, f"ou_seed{traj.seed}.csv"))
        write_trajectory_csv(traj, os.path.join(out, f"traj_seed{traj.seed}.csv"))
    if sc.model == "lotka-volterra":
        write_envelope_csv(result, os.path.join(out, "envelope_x.csv"), component=0)
        write_envelope_csv(result, os.path.join(out, "envelope_y.csv"), component=1)
    else:
        write_envelope_csv(result, os.path.join(out, "envelope.csv"))
    rows = []
    for traj, run in zip(result.trajectories, result.runs):
        envelope = trusted if trusted is not None else run.envelope
        region = _region_for_seed(sc, spec, envelope)
        report = None if region is None else absorption_report(traj, region, sc.eps)
        rows.append((run.seed, report, region))
    _write_absorption_csv(os.path.join(out, "absorption.csv"), sc, rows)
    print(f"wrote {2 * len(seeds) + 2} files to {out}")
    return 0


def cmd_calibrate(args):
    result = calibrate_beta(
        args.seed, args.gamma, args.alpha, args.nominal,
        (args.lower, args.upper), args.horizon,
        grid_step=args.grid_step, beta_start=args.beta_start,
    )
    grid = default_grid(args.horizon, args.grid_step)
    path = sample_ou(OUParams(result.beta, args.gamma), grid, args.seed)
    perturbed = args.nominal + args.alpha * path.values
    ok = args.lower < perturbed.min() and perturbed.max() < args.upper
    print(f"beta = {result.beta!r}")
    print(f"envelope_lower = {result.envelope.lower!r}")
    print(f"envelope_upper = {result.envelope.upper!r}")
    print(f"recheck = {'PASS' if ok else 'FAIL'}")
    return 0 if ok else 1


def _generated_measurement(args, step):
    grid = default_grid(args.horizon, args.data_step or step)
    if args.alpha == 0.0:
        import numpy as np

        e = np.exp(args.r * grid)
        p = args.p0 * e / (1.0 + args.p0 * (e - 1.0))
        return SamplePath(grid, p)
    spec = LogisticRSpec(r=args.r, c=1.0, alpha=args.alpha,
                         ou=OUParams(args.ou_beta, args.ou_gamma))
    noise = sample_ou(spec.ou, default_grid(args.horizon, 0.01),
                      args.data_seed if args.data_seed is not None else args.seed_base)
    traj = integrate(spec, args.p0, args.horizon, args.data_step or step, noise)
    return SamplePath(traj.grid, traj.x)


def cmd_observe(args):
    step = args.step if args.step is not None else 1e-3
    if (args.data is None) == (not args.generate):
        raise ConfigError("give exactly one of --data FILE or --generate")
    if args.data is not None:
        measured = load_series_csv(args.data)
    else:
        measured = _generated_measurement(args, step)
    os.makedirs(args.out_dir, exist_ok=True)
    dest = os.path.join(args.out_dir, "observe.csv")
    if args.observer == "direct":
        p = measured.values
        t0 = float(measured.grid[0])
        p0 = float(p[0])
        lines = ["t,p,p_hat,r_hat,innovation\n"]
        for k in range(1, len(measured)):
            t = float(measured.grid[k])
            r_hat = direct_estimator(p0, float(p[k]), t - t0)
            lines.append(f"{t!r},{float(p[k])!r},{float(p[k])!r},{r_hat!r},0.0\n")
        with open(dest, "w", encoding="ascii") as fh:
            fh.write("".join(lines))
    elif args.observer == "luenberger":
        run = luenberger_run(LuenbergerConfig(args.gamma_p, args.gamma_r),
                             measured, step=step)
        write_observer_csv(run, dest)
    else:
        run = highgain_run(HighGainConfig(args.theta), measured, step=step)
        write_observer_csv(run, dest)
    print(f"wrote {dest}")
    return 0


def cmd_fit(args):
    series = load_series_csv(args.data)
    fitted = fit_ou(series)
    sys.stdout.write(format_fit_report(fitted))
    return 0


def cmd_figures(args):
    step = args.step if args.step is not None else 1e-3
    try:
        written = figures_mod.run_figure(
            args.figure_id, args.out_dir, seed_base=args.seed_base, step=step
        )
    except KeyError:
        print(
            f"error: unknown figure id {args.figure_id!r}; valid ids: "
            + ", ".join(figures_mod.available()),
            file=sys.stderr,
        )
        return 2
    print(f"wrote {len(written)} files to {os.path.join(args.out_dir, args.figure_id)}")
    return 0


def _build_parser():
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--out-dir", default="out",
                        help="output directory (default: ./out)")
    shared.add_argument("--seed-base", type=int, default=42,
                        help="base seed; per-seed streams use seed-base + index")
    shared.add_argument("--step", type=float, default=None,
                        help="integrator step (default 1e-3, or the scenario's)")

    parser = argparse.ArgumentParser(
        prog="oupop",
        description="Population dynamics driven by bounded mean-reverting noise.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", parents=[shared],
                       help="run a scenario file: trajectories, envelopes, absorption")
    p.add_argument("scenario", help="flat key = value scenario file")
    p.add_argument("--trust-envelope", action="store_true",
                   help="honor hand-typed envelope-lower/envelope-upper keys")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("calibrate", parents=[shared],
                       help="find beta confining nominal + alpha*z to an interval")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--nominal", type=float, required=True)
    p.add_argument("--lower", type=float, required=True)
    p.add_argument("--upper", type=float, required=True)
    p.add_argument("--horizon", type=float, required=True)
    p.add_argument("--grid-step", type=float, default=0.01)
    p.add_argument("--beta-start", type=float, default=1.0)
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("observe", parents=[shared],
                       help="estimate the logistic growth rate from p measurements")
    p.add_argument("--data", default=None, help="CSV with header t,value")
    p.add_argument("--generate", action="store_true",
                   help="synthesize the measurement instead of reading a file")
    p.add_argument("--observer", choices=("direct", "luenberger", "highgain"),
                   required=True)
    p.add_argument("--theta", type=float, default=15.0)
    p.add_argument("--gamma-p", type=float, default=-5.0)
    p.add_argument("--gamma-r", type=float, default=-1.0)
    p.add_argument("--r", type=float, default=2.0, help="true rate for --generate")
    p.add_argument("--p0", type=float, default=0.1)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--ou-beta", type=float, default=1.0)
    p.add_argument("--ou-gamma", type=float, default=0.1)
    p.add_argument("--horizon", type=float, default=2.0)
    p.add_argument("--data-seed", type=int, default=None)
    p.add_argument("--data-step", type=float, default=None)
    p.set_defaults(func=cmd_observe)

    p = sub.add_parser("fit", parents=[shared],
                       help="fit (mu, beta, gamma) to a measured series by AR(1) regression")
    p.add_argument("--data", required=True, help="CSV with header t,value")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("figures", parents=[shared],
                       help="emit the CSV bundle for a named figure")
    p.add_argument("figure_id", help="one of: " + ", ".join(figures_mod.available()))
    p.set_defaults(func=cmd_figures)

    return parser


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OupopError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
