"""Integration of Hamilton's equations with invariant tracking.

Two schemes are available: an adaptive 8(5,3) Dormand-Prince pair (through
``scipy.integrate.solve_ivp``) and a fixed-step Stormer-Verlet splitting for
the Cartesian families, used as an independent cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .core import PhaseState, ChartError
from .hamiltonians import raw_grad_H
from .invariants import InvariantSpec, evaluate
from .potentials import checked_position, is_polar

# integration aborts this close to a singular set, well before evaluation fails
DELTA_GUARD = 1e-6

COMPLETED = "completed"
SINGULARITY_ABORT = "singularity_abort"
STEP_UNDERFLOW = "step_underflow"

SCHEMES = ("adaptive_rk", "fixed_symplectic")


@dataclass(frozen=True)
class IntegratorOptions:
    """Integrator settings.

    For ``scheme="fixed_symplectic"`` the step size is ``max_step``.
    """

    rel_tol: float = 1e-12
    abs_tol: float = 1e-12
    max_step: float = math.inf
    t_end: float = 50.0
    sample_interval: float = 0.05
    scheme: str = "adaptive_rk"

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("tolerances must be positive")
        if not self.t_end > 0:
            raise ValueError("t_end must be positive")
        if not self.sample_interval > 0:
            raise ValueError("sample_interval must be positive")
        if not self.max_step > 0:
            raise ValueError("max_step must be positive")
        if self.scheme not in SCHEMES:
            raise ValueError(f"scheme must be one of {SCHEMES}, got {self.scheme!r}")


@dataclass
class Trajectory:
    system: object
    t: np.ndarray
    states: np.ndarray  # shape (n_samples, 4)
    termination: str
    invariant_tracks: dict = field(default_factory=dict)
    nfev: int = 0

    @property
    def chart(self) -> str:
        return self.system.chart

    @property
    def completed(self) -> bool:
        return self.termination == COMPLETED

    @property
    def samples(self):
        return [(float(t), PhaseState.from_array(z, self.chart)) for t, z in zip(self.t, self.states)]

    @property
    def final_state(self) -> PhaseState:
        return PhaseState.from_array(self.states[-1], self.chart)


def sample_times(t_end, dt):
    n = int(math.floor(t_end / dt + 1e-9))
    t = dt * np.arange(n + 1)
    if t_end - t[-1] > 1e-12 * t_end:
        t = np.append(t, t_end)
    else:
        t[-1] = min(t[-1], t_end)
    return t


def _start(spec, s0):
    if s0.chart != spec.chart:
        raise ChartError(f"{spec.family} is integrated in the {spec.chart} chart, got a {s0.chart} state")
    checked_position(spec, s0)
    return s0.as_array()


def _tracks(track, states):
    return {inv.kind: np.asarray(evaluate(inv, states.T), dtype=float) for inv in track}


def integrate(spec, s0: PhaseState, opts: IntegratorOptions | None = None, track=()) -> Trajectory:
    """Integrate from ``s0`` and sample the state and ``track`` invariants.

    Singular-set proximity (``DELTA_GUARD``) and step-size collapse end the
    run early; both are reported through ``Trajectory.termination``.
    """
    opts = opts or IntegratorOptions()
    if opts.scheme == "fixed_symplectic":
        return integrate_fixed_symplectic(spec, s0, opts, track)
    track = [InvariantSpec(t, spec) if isinstance(t, str) else t for t in track]
    y0 = _start(spec, s0)
    _tracks(track, y0[None, :])  # fails early, e.g. on J2 <= 0

    if spec.singular_distance(y0[0], y0[1]) < DELTA_GUARD:
        return Trajectory(spec, np.zeros(1), y0[None, :], SINGULARITY_ABORT, _tracks(track, y0[None, :]))

    def rhs(t, y):
        g = raw_grad_H(spec, *y.tolist())
        return [g.dp1, g.dp2, -g.dq1, -g.dq2]

    events = None
    if not math.isinf(spec.singular_distance(y0[0], y0[1])):

        def guard(t, y):
            return float(spec.singular_distance(y[0], y[1])) - DELTA_GUARD

        guard.terminal = True
        events = guard

    times = sample_times(opts.t_end, opts.sample_interval)
    sol = solve_ivp(
        rhs,
        (0.0, opts.t_end),
        y0,
        method="DOP853",
        t_eval=times,
        rtol=opts.rel_tol,
        atol=opts.abs_tol,
        max_step=opts.max_step,
        events=events,
    )
    if sol.status == 0:
        termination = COMPLETED
    elif sol.status == 1:
        termination = SINGULARITY_ABORT
    elif "step size" in sol.message:
        termination = STEP_UNDERFLOW
    else:
        raise RuntimeError(f"integration failed: {sol.message}")
    states = sol.y.T.copy()
    if states.shape[0] == 0:
        states = y0[None, :]
        sol.t = np.zeros(1)
    return Trajectory(spec, np.asarray(sol.t), states, termination, _tracks(track, states), sol.nfev)


def integrate_fixed_symplectic(spec, s0: PhaseState, opts: IntegratorOptions, track=()) -> Trajectory:
    """Kick-drift-kick Stormer-Verlet with step ``opts.max_step``.

    Second order and symplectic, so energy errors stay bounded instead of
    drifting.  Only for the Cartesian families, where ``H = T(p) + V(q)``.
    """
    if is_polar(spec):
        raise ChartError("the fixed-step splitting needs a Cartesian family (H = T(p) + V(q))")
    track = [InvariantSpec(t, spec) if isinstance(t, str) else t for t in track]
    h = float(opts.max_step)
    n_steps = int(round(opts.t_end / h))
    if not math.isfinite(h) or n_steps < 1 or abs(n_steps * h - opts.t_end) > 1e-9 * opts.t_end:
        raise ValueError("fixed_symplectic needs max_step dividing t_end")
    every = max(1, int(round(opts.sample_interval / h)))
    x, y, px, py = _start(spec, s0).tolist()
    guarded = not math.isinf(spec.singular_distance(x, y))

    t_out, z_out = [0.0], [(x, y, px, py)]
    termination = COMPLETED
    gx, gy = spec.gradient(x, y)
    half = 0.5 * h
    for i in range(1, n_steps + 1):
        px -= half * gx
        py -= half * gy
        x += h * px
        y += h * py
        if guarded and spec.singular_distance(x, y) < DELTA_GUARD:
            termination = SINGULARITY_ABORT
            break
        gx, gy = spec.gradient(x, y)
        px -= half * gx
        py -= half * gy
        if i % every == 0 or i == n_steps:
            t_out.append(i * h)
            z_out.append((x, y, px, py))
    states = np.array(z_out)
    return Trajectory(spec, np.array(t_out), states, termination, _tracks(track, states), n_steps)
