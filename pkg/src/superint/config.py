"""Run configuration: parsing, validation and the embedded presets."""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field, replace
from pathlib import Path

from .core import PhaseState
from .dynamics import IntegratorOptions
from .invariants import InvariantSpec
from .potentials import is_polar, map_pw_to_ck, map_ttw_to_ak, system_from_dict, system_to_dict

CHECKS = ("drift", "bracket", "phase_rotation", "rank")

DEFAULT_RANK_SETS = {
    "VaN": ["Ex", "Ey", "ImBxy"],
    "VbN": ["Ex", "Ey", "ImCxy"],
    "Vak": ["H", "J2", "ImKk"],
    "Vck": ["H", "J2", "ImKk"],
    "VckRot": ["H", "J2", "ImKk"],
}

PRESETS = {
    "sw-isotropic": {
        "system": {"family": "VaN", "nx": 1, "ny": 1, "omega": 1.0, "k1": 0.3, "k2": 0.5},
        "initial_state": {"chart": "cartesian", "q1": 1.0, "q2": 0.8, "p1": 0.3, "p2": -0.4},
        "invariants": ["H", "Ex", "Ey", "ReBxy", "ImBxy"],
    },
    "ttw-k2": {
        "system": {"family": "TTW", "omega": 1.0, "alpha": 0.5, "beta": 0.8, "k": "2"},
        "initial_state": {"chart": "polar", "q1": 1.2, "q2": 0.39, "p1": 0.2, "p2": 0.7},
        "invariants": ["H", "J2", "ReKk", "ImKk"],
    },
    "pw-k1": {
        "system": {"family": "PW", "g": 1.0, "alpha": 0.3, "beta": 0.4, "k": "1"},
        "initial_state": {"chart": "polar", "q1": 1.5, "q2": 0.7, "p1": 0.1, "p2": 0.9},
        "invariants": ["H", "J2", "ReKk", "ImKk"],
    },
    "kepler-circular": {
        "system": {"family": "Vck", "g": 1.0, "k": "1", "ka": 0.0, "kb": 0.0},
        "initial_state": {"chart": "polar", "q1": 1.0, "q2": 0.0, "p1": 0.0, "p2": 1.0},
        "invariants": ["H", "J2", "ReKk", "ImKk"],
    },
    "vb-12": {
        "system": {"family": "VbN", "nx": 1, "ny": 2, "omega": 1.0, "k1": 0.4, "k2": 0.7},
        "initial_state": {"chart": "cartesian", "q1": 1.0, "q2": 0.5, "p1": 0.2, "p2": 0.3},
        "invariants": ["H", "Ex", "Ey", "ReCxy", "ImCxy", "I3_12"],
    },
}


class ConfigError(ValueError):
    """Invalid or inconsistent run configuration."""


@dataclass
class RunConfig:
    system: object
    initial_state: PhaseState | None = None
    integrator: IntegratorOptions = field(default_factory=IntegratorOptions)
    invariants: list = field(default_factory=list)
    seed: int = 0
    output_dir: str = "out"
    checks: list = field(default_factory=lambda: list(CHECKS))
    tolerances: dict = field(default_factory=dict)
    mismatch: dict = field(default_factory=dict)
    bracket_points: int = 1000
    rank_points: int = 100
    rank_invariants: list = field(default_factory=list)
    expected_rank: int = 3
    phase_sample_interval: float = 1e-3
    phase_t_end: float = 10.0
    grid: dict = field(default_factory=dict)
    n_ics: int = 5
    workers: int = 1
    preset: str | None = None

    @property
    def invariant_system(self):
        """System used to build the tracked invariants (differs under ``mismatch``)."""
        return replace(self.system, **self.mismatch) if self.mismatch else self.system

    def invariant_specs(self, system=None):
        system = system or self.invariant_system
        return [InvariantSpec(kind, system) for kind in self.invariants]

    def to_dict(self) -> dict:
        s0 = self.initial_state
        return {
            "preset": self.preset,
            "system": system_to_dict(self.system),
            "initial_state": None
            if s0 is None
            else {"chart": s0.chart, "q1": s0.q1, "q2": s0.q2, "p1": s0.p1, "p2": s0.p2},
            "integrator": {
                "rel_tol": self.integrator.rel_tol,
                "abs_tol": self.integrator.abs_tol,
                "max_step": None if self.integrator.max_step == float("inf") else self.integrator.max_step,
                "t_end": self.integrator.t_end,
                "sample_interval": self.integrator.sample_interval,
                "scheme": self.integrator.scheme,
            },
            "invariants": list(self.invariants),
            "seed": self.seed,
            "output_dir": self.output_dir,
            "checks": list(self.checks),
            "tolerances": dict(self.tolerances),
            "mismatch": dict(self.mismatch),
            "bracket_points": self.bracket_points,
            "rank_points": self.rank_points,
            "rank_invariants": list(self.rank_invariants),
            "expected_rank": self.expected_rank,
            "phase_sample_interval": self.phase_sample_interval,
            "phase_t_end": self.phase_t_end,
            "grid": copy.deepcopy(self.grid),
            "n_ics": self.n_ics,
            "workers": self.workers,
        }


def parse_system(d: dict):
    """System from a config mapping; ``TTW`` and ``PW`` are given by ``alpha, beta, k``."""
    d = dict(d)
    family = d.get("family")
    if family in ("TTW", "PW"):
        alpha, beta, k = d.pop("alpha"), d.pop("beta"), d.pop("k")
        ka, kb, k2 = (map_ttw_to_ak if family == "TTW" else map_pw_to_ck)(alpha, beta, k)
        d.update(family="Vak" if family == "TTW" else "Vck", ka=ka, kb=kb, k=str(k2))
    return system_from_dict(d)


def parse_state(d: dict) -> PhaseState:
    unknown = set(d) - {"chart", "q1", "q2", "p1", "p2"}
    if unknown:
        raise ConfigError(f"unknown initial_state fields {sorted(unknown)}")
    return PhaseState(d["q1"], d["q2"], d["p1"], d["p2"], d.get("chart", "cartesian"))


def _merge(base: dict, over: dict) -> dict:
    out = copy.deepcopy(base)
    for key, value in over.items():
        if key == "preset":
            continue
        out[key] = value
    return out


def load_config(raw: dict | None = None, preset: str | None = None, seed: int | None = None, out: str | None = None):
    """Resolve a raw JSON mapping (optionally layered on a preset) into a :class:`RunConfig`."""
    raw = dict(raw or {})
    preset = preset or raw.get("preset")
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(f"unknown preset {preset!r}; choose from {sorted(PRESETS)}")
        raw = _merge(PRESETS[preset], raw)
    if seed is not None:
        raw["seed"] = seed
    if out is not None:
        raw["output_dir"] = out
    try:
        return _build(raw, preset)
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        msg = f"missing field {exc}" if isinstance(exc, KeyError) else str(exc)
        raise ConfigError(msg) from None


def _build(raw: dict, preset) -> RunConfig:
    known = set(RunConfig.__dataclass_fields__)
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"unknown config fields {sorted(unknown)}")
    if "system" not in raw:
        raise ConfigError("config needs a 'system'")
    system = parse_system(raw["system"])
    state = parse_state(raw["initial_state"]) if raw.get("initial_state") is not None else None
    if state is not None and state.chart != system.chart:
        raise ConfigError(f"initial_state chart {state.chart!r} does not match {system.family} ({system.chart})")
    integ = dict(raw.get("integrator") or {})
    if integ.get("max_step") is None:
        integ.pop("max_step", None)
    cfg = RunConfig(
        system=system,
        initial_state=state,
        integrator=IntegratorOptions(**integ),
        invariants=list(raw.get("invariants", [])),
        seed=int(raw.get("seed", 0)),
        output_dir=str(raw.get("output_dir", "out")),
        checks=list(raw["checks"]) if "checks" in raw else list(CHECKS),
        tolerances=dict(raw.get("tolerances", {})),
        mismatch=dict(raw.get("mismatch", {})),
        bracket_points=int(raw.get("bracket_points", 1000)),
        rank_points=int(raw.get("rank_points", 100)),
        rank_invariants=list(raw.get("rank_invariants") or DEFAULT_RANK_SETS[system.family]),
        expected_rank=int(raw.get("expected_rank", 3)),
        phase_sample_interval=float(raw.get("phase_sample_interval", 1e-3)),
        phase_t_end=float(raw.get("phase_t_end", 10.0)),
        grid=copy.deepcopy(raw.get("grid", {})),
        n_ics=int(raw.get("n_ics", 5)),
        workers=int(raw.get("workers", 1)),
        preset=preset,
    )
    bad = [c for c in cfg.checks if c not in CHECKS]
    if bad:
        raise ConfigError(f"unknown checks {bad}; choose from {list(CHECKS)}")
    # resolves names and applicability, and the mismatched system's validity
    cfg.invariant_specs()
    [InvariantSpec(k, system) for k in cfg.rank_invariants]
    if "phase_rotation" in cfg.checks and not is_polar(system):
        cfg.checks = [c for c in cfg.checks if c != "phase_rotation"]
    if cfg.bracket_points < 1 or cfg.rank_points < 1 or cfg.n_ics < 1 or cfg.workers < 1:
        raise ConfigError("point counts, n_ics and workers must be positive")
    return cfg


def read_config_file(path) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
