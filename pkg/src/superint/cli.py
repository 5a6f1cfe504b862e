"""Command-line entry point: ``simulate``, ``verify``, ``identities`` and ``sweep``.

Exit codes: 0 success, 2 configuration error, 3 singularity abort,
4 step-size underflow, 5 a configured check failed.
"""

from __future__ import annotations

import argparse
import csv
import itertools
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import verify as V
from .config import PRESETS, ConfigError, RunConfig, load_config, read_config_file
from .core import PhaseState
from .dynamics import COMPLETED, SINGULARITY_ABORT, STEP_UNDERFLOW, integrate
from .invariants import InvariantSpec, applicable_kinds
from .sampling import initial_states, sample_states

EXIT_OK, EXIT_CONFIG, EXIT_SINGULAR, EXIT_UNDERFLOW, EXIT_CHECK = 0, 2, 3, 4, 5
TERMINATION_EXIT = {COMPLETED: EXIT_OK, SINGULARITY_ABORT: EXIT_SINGULAR, STEP_UNDERFLOW: EXIT_UNDERFLOW}

GRID_KEYS = ("k", "ka", "kb", "g", "omega", "nx", "ny", "nx_ny")


def fmt(value) -> str:
    """17 significant digits: enough for an exact float round trip."""
    return format(float(value), ".17g")


def write_json(path: Path, data) -> None:
    path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n", encoding="utf-8", newline="\n")


def write_csv(path: Path, header, rows) -> None:
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _outdir(cfg: RunConfig) -> Path:
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _require_state(cfg: RunConfig) -> PhaseState:
    if cfg.initial_state is None:
        raise ConfigError("config needs an 'initial_state' (or a preset)")
    return cfg.initial_state


def _run(cfg: RunConfig, track):
    try:
        return integrate(cfg.system, _require_state(cfg), cfg.integrator, track)
    except ValueError as exc:  # singular or otherwise invalid start
        raise ConfigError(str(exc)) from None


# --- simulate ---------------------------------------------------------------------------------


def cmd_simulate(cfg: RunConfig) -> int:
    traj = _run(cfg, cfg.invariant_specs())
    out = _outdir(cfg)
    kinds = list(traj.invariant_tracks)
    rows = []
    for i, t in enumerate(traj.t):
        rows.append([fmt(t), *map(fmt, traj.states[i]), *(fmt(traj.invariant_tracks[k][i]) for k in kinds)])
    write_csv(out / "trajectory.csv", ["t", "q1", "q2", "p1", "p2", *kinds], rows)
    drift = V.drift_report(traj) if kinds and len(traj.t) > 1 else {}
    summary = {
        "termination": traj.termination,
        "samples": int(len(traj.t)),
        "drift": {k: vars(v) for k, v in drift.items()},
        "config": cfg.to_dict(),
    }
    write_json(out / "summary.json", summary)
    return TERMINATION_EXIT[traj.termination]


# --- verify --------------------------------------------------------------------------------------


def build_report(cfg: RunConfig) -> V.VerificationReport:
    if not cfg.checks:
        raise ConfigError("nothing to verify: the check list is empty")
    report = V.VerificationReport(tolerances=dict(cfg.tolerances))
    specs = cfg.invariant_specs()
    if "drift" in cfg.checks:
        if not specs:
            raise ConfigError("the drift check needs at least one invariant")
        traj = _run(cfg, specs)
        report.termination = traj.termination
        if traj.completed:
            report.drift = V.drift_report(traj)
    if "bracket" in cfg.checks:
        if not specs:
            raise ConfigError("the bracket check needs at least one invariant")
        rng = np.random.default_rng([cfg.seed, 1])
        points = sample_states(cfg.system, cfg.bracket_points, rng)
        report.brackets = {inv.kind: V.bracket_residual(inv, cfg.system, points) for inv in specs}
    if "phase_rotation" in cfg.checks:
        opts = replace(cfg.integrator, t_end=cfg.phase_t_end, sample_interval=cfg.phase_sample_interval)
        traj = _run(replace(cfg, integrator=opts), [])
        if traj.termination != COMPLETED:
            report.termination = traj.termination
        report.phase_rotation = {w: V.phase_rotation_check(traj, w) for w in ("M", "N")}
    if "rank" in cfg.checks:
        rng = np.random.default_rng([cfg.seed, 2])
        points = sample_states(cfg.system, cfg.rank_points, rng)
        rank_specs = [InvariantSpec(k, cfg.invariant_system) for k in cfg.rank_invariants]
        report.independence = [V.rank_check(rank_specs, cfg.system, points, cfg.expected_rank)]
    return report


def cmd_verify(cfg: RunConfig) -> int:
    report = build_report(cfg)
    data = report.to_dict()
    data["config"] = cfg.to_dict()
    write_json(_outdir(cfg) / "report.json", data)
    if report.termination not in (None, COMPLETED):
        return TERMINATION_EXIT[report.termination]
    return EXIT_OK if report.passed else EXIT_CHECK


# --- identities -----------------------------------------------------------------------------------


def cmd_identities(sample_count: int, seed: int, out: str = "out") -> int:
    if sample_count < 1:
        raise ConfigError("sample count must be at least 1")
    results = V.identity_suite(V.IDENTITIES, sample_count, seed)
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    write_json(
        path / "identities.json",
        {"seed": seed, "samples": sample_count, "identities": [vars(r) for r in results]},
    )
    return EXIT_OK if all(r.passed for r in results) else EXIT_CHECK


# --- sweep ----------------------------------------------------------------------------------------


def grid_points(grid: dict) -> list[dict]:
    """Cartesian product of the grid axes, in the order the axes are listed."""
    if not isinstance(grid, dict) or not grid:
        raise ConfigError("sweep needs a non-empty 'grid'")
    axes = []
    for key, values in grid.items():
        if key not in GRID_KEYS:
            raise ConfigError(f"unknown grid axis {key!r}; choose from {list(GRID_KEYS)}")
        if not isinstance(values, list) or not values:
            raise ConfigError(f"grid axis {key!r} needs a non-empty list")
        if key == "nx_ny":
            if not all(isinstance(v, list) and len(v) == 2 for v in values):
                raise ConfigError("grid axis 'nx_ny' needs [nx, ny] pairs")
            axes.append([{"nx": v[0], "ny": v[1]} for v in values])
        else:
            axes.append([{key: v} for v in values])
    return [dict(item for part in combo for item in part.items()) for combo in itertools.product(*axes)]


def _sweep_task(args):
    base, params, kinds, rank_kinds, opts, seed, grid_index, ic_index = args
    system = replace(base, **params)
    rng = np.random.default_rng([seed, grid_index, ic_index])
    z = initial_states(system, 1, rng)[:, 0]
    s0 = PhaseState.from_array(z, system.chart)
    specs = [InvariantSpec(k, system) for k in kinds]
    traj = integrate(system, s0, opts, specs)
    drift = V.drift_report(traj) if traj.completed else {}
    max_drift = max((d.max_rel for d in drift.values()), default=float("nan"))
    brackets = [V.normalized_brackets(inv, system, z)[0] for inv in specs]
    max_bracket = max((float(b.max()) for b in brackets if b.size), default=float("nan"))
    rank, _ = V.independence_rank([InvariantSpec(k, system) for k in rank_kinds], system, z)
    return [grid_index, ic_index, *(_cell(params.get(k, "")) for k in GRID_KEYS[:-1]),
            traj.termination, fmt(max_drift), fmt(max_bracket), rank]


def _cell(value):
    return fmt(value) if isinstance(value, float) else str(value)


def cmd_sweep(cfg: RunConfig) -> int:
    points = grid_points(cfg.grid)
    tasks = []
    for gi, params in enumerate(points):
        try:
            system = replace(cfg.system, **params)
            kinds = [k for k in cfg.invariants if k in applicable_kinds(system)]
            [InvariantSpec(k, system) for k in cfg.rank_invariants]
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"grid point {gi} ({params}) is invalid: {exc}") from None
        if not kinds:
            raise ConfigError(f"no tracked invariant applies at grid point {gi}")
        for ic in range(cfg.n_ics):
            tasks.append((cfg.system, params, kinds, cfg.rank_invariants, cfg.integrator, cfg.seed, gi, ic))
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as pool:
            rows = list(pool.map(_sweep_task, tasks))
    else:
        rows = [_sweep_task(t) for t in tasks]
    rows.sort(key=lambda r: (r[0], r[1]))
    header = ["grid_index", "ic_index", *GRID_KEYS[:-1], "termination", "max_drift", "max_bracket", "rank"]
    write_csv(_outdir(cfg) / "sweep.csv", header, rows)
    tol = cfg.tolerances.get("drift", V.DRIFT_TOL)
    ok = all(r[-4] == COMPLETED and float(r[-3]) < tol for r in rows)
    return EXIT_OK if ok else EXIT_CHECK


# --- argument parsing -------------------------------------------------------------------------


SUBCOMMAND_HELP = {
    "simulate": "integrate one trajectory; write trajectory.csv and summary.json",
    "verify": "run the configured checks; write report.json",
    "identities": "check the algebraic identities; write identities.json",
    "sweep": "grid of parameters x random starts; write sweep.csv",
}


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="superint", description="Integrate and check superintegrable planar systems.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("simulate", "verify", "sweep"):
        p = sub.add_parser(name, help=SUBCOMMAND_HELP[name])
        p.add_argument("--config", help="JSON run configuration")
        p.add_argument("--preset", choices=sorted(PRESETS))
        p.add_argument("--seed", type=int)
        p.add_argument("--out", help="output directory")
    p = sub.add_parser("identities", help=SUBCOMMAND_HELP["identities"])
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="out")
    return parser


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "identities":
            return cmd_identities(args.samples, args.seed, args.out)
        raw = read_config_file(args.config) if args.config else {}
        if not raw and not args.preset:
            raise ConfigError("give --config or --preset")
        cfg = load_config(raw, preset=args.preset, seed=args.seed, out=args.out)
        return {"simulate": cmd_simulate, "verify": cmd_verify, "sweep": cmd_sweep}[args.command](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
