import math
import warnings

import numpy as np
import pytest

from superint.core import PhaseState, to_cartesian, to_polar
from superint.dynamics import (
    SINGULARITY_ABORT,
    IntegratorOptions,
    integrate,
    integrate_fixed_symplectic,
    sample_times,
)
from superint.hamiltonians import eval_H
from superint.invariants import InvariantSpec, NonPositiveJ2Error
from superint.potentials import AngularKepler, AngularOscillator, LinearForceOscillator, SeparableOscillator
from superint.sampling import random_system, sample_states


def P(*z):
    return PhaseState(*z, "polar")


def test_free_motion_is_a_straight_line():
    system = AngularKepler(0.0, 1)
    start = PhaseState(1.0, 0.5, 0.3, 0.8)
    traj = integrate(system, to_polar(start), IntegratorOptions(t_end=10.0, sample_interval=0.5), ["H"])
    assert traj.completed
    for t, s in traj.samples:
        exact = start.as_array() + t * np.array([start.p1, start.p2, 0, 0])
        assert np.allclose(to_cartesian(s).as_array(), exact, atol=1e-9)
    assert np.max(np.abs(traj.invariant_tracks["H"] - traj.invariant_tracks["H"][0])) < 1e-10


def test_circular_kepler_orbit_keeps_its_radius():
    traj = integrate(AngularKepler(1.0, 1), P(1.0, 0.0, 0.0, 1.0), IntegratorOptions(t_end=10 * math.pi))
    assert np.max(np.abs(traj.states[:, 0] - 1.0)) < 1e-9
    # the angle is not wrapped
    assert traj.states[-1, 1] == pytest.approx(10 * math.pi, rel=1e-9)


def test_harmonic_period_closure():
    s0 = PhaseState(1.0, 0.0, 0.0, 1.0)
    traj = integrate(SeparableOscillator(1, 1, 1.0), s0, IntegratorOptions(t_end=2 * math.pi))
    assert np.linalg.norm(traj.final_state.as_array() - s0.as_array()) < 1e-8


@pytest.mark.parametrize("family", ["VaN", "VbN", "Vak", "Vck", "VckRot"])
def test_time_reversal(family, rng):
    system = random_system(family, rng)
    bound = 0.0 if family in ("Vck", "VckRot") else None
    z = sample_states(system, 1, rng, max_energy=bound)[:, 0]
    opts = IntegratorOptions(t_end=10.0)
    fwd = integrate(system, PhaseState.from_array(z, system.chart), opts)
    assert fwd.completed
    q1, q2, p1, p2 = fwd.states[-1]
    back = integrate(system, PhaseState(q1, q2, -p1, -p2, system.chart), opts)
    end = back.states[-1]
    assert np.allclose(end, [z[0], z[1], -z[2], -z[3]], atol=1e-7, rtol=0)


def test_sampling_grid_and_tracks(rng):
    system = random_system("Vak", rng)
    z = sample_states(system, 1, rng)[:, 0]
    traj = integrate(system, PhaseState.from_array(z, "polar"), IntegratorOptions(t_end=3.0, sample_interval=0.1),
                     ["H", InvariantSpec("ImKk", system)])
    assert len(traj.t) == 31 and np.all(np.diff(traj.t) > 0)
    assert traj.t[-1] == 3.0
    assert set(traj.invariant_tracks) == {"H", "ImKk"}
    assert all(np.all(np.isfinite(v)) for v in traj.invariant_tracks.values())


def test_sample_times_include_end():
    assert sample_times(1.0, 0.3)[-1] == 1.0
    assert len(sample_times(1.0, 0.25)) == 5


def test_radial_plunge_aborts():
    traj = integrate(AngularKepler(1.0, 1), P(1.0, 0.0, -0.5, 0.0), IntegratorOptions(t_end=10.0))
    assert traj.termination == SINGULARITY_ABORT
    assert traj.t[-1] < 10.0


def test_start_inside_guard_band_aborts():
    system = SeparableOscillator(1, 1, 1.0, 0.5, 0.5)
    traj = integrate(system, PhaseState(1e-7, 1.0, 0.0, 0.0))
    assert traj.termination == SINGULARITY_ABORT


def test_tracking_rotation_factors_needs_positive_j2():
    system = AngularKepler(1.0, 1, -1.0, 0.0)
    with pytest.raises(NonPositiveJ2Error):
        integrate(system, P(1.0, 1.0, 0.0, 0.1), IntegratorOptions(t_end=1.0), ["ReKk"])


def test_option_validation():
    with pytest.raises(ValueError):
        IntegratorOptions(rel_tol=0)
    with pytest.raises(ValueError):
        IntegratorOptions(t_end=-1)
    with pytest.raises(ValueError):
        IntegratorOptions(scheme="euler")


def _final_error(system, s0, tol, ref):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)
        end = integrate(system, s0, IntegratorOptions(rel_tol=tol, abs_tol=tol, t_end=10.0)).states[-1]
    return np.abs(end - ref).max()


@pytest.fixture(scope="module")
def convergence_case():
    system = AngularOscillator(1.0, "3/2", 1.2, 0.3)
    s0 = P(1.2, 0.5, 0.2, 0.7)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)
        ref = integrate(system, s0, IntegratorOptions(rel_tol=1e-14, abs_tol=1e-14, t_end=10.0)).states[-1]
    return system, s0, ref


def test_adaptive_error_shrinks_with_tolerance(convergence_case):
    system, s0, ref = convergence_case
    errors = [_final_error(system, s0, tol, ref) for tol in (1e-5, 1e-7, 1e-9, 1e-11)]
    assert all(b < a for a, b in zip(errors, errors[1:]))


@pytest.mark.xfail(strict=True, reason="DOP853 error is not monotone under every halving of rel_tol")
def test_halving_tolerance_never_increases_error(convergence_case):
    system, s0, ref = convergence_case
    errors = [_final_error(system, s0, 1e-5 / 2**i, ref) for i in range(10)]
    assert all(b <= a for a, b in zip(errors, errors[1:]))


# --- fixed-step splitting ----------------------------------------------------------


def test_leapfrog_energy_stays_bounded():
    system = SeparableOscillator(1, 1, 1.0)
    # an eccentric start; on a circular orbit the energy error is of higher order
    s0 = PhaseState(1.0, 0.0, 0.0, 0.3)
    bands = []
    for h in (0.1, 0.05):
        traj = integrate_fixed_symplectic(system, s0, IntegratorOptions(max_step=h, t_end=1000.0, sample_interval=h))
        e = eval_H(system, traj.states.T) - eval_H(system, s0)
        first, last = np.abs(e[:100]).max(), np.abs(e[-100:]).max()
        assert last < 1.05 * first  # no secular growth
        bands.append(np.abs(e).max())
    assert bands[0] / bands[1] == pytest.approx(4.0, rel=0.1)


def _leapfrog_end(system, s0, h, t_end=10.0):
    opts = IntegratorOptions(max_step=h, t_end=t_end, sample_interval=t_end, scheme="fixed_symplectic")
    return integrate(system, s0, opts).states[-1]


def test_leapfrog_observed_order():
    system = LinearForceOscillator(1, 2, 1.0, 0.4, 0.7)
    s0 = PhaseState(1.0, 0.5, 0.2, 0.3)
    ref = integrate(system, s0, IntegratorOptions(t_end=10.0)).states[-1]
    e1 = np.linalg.norm(_leapfrog_end(system, s0, 0.01) - ref)
    e2 = np.linalg.norm(_leapfrog_end(system, s0, 0.005) - ref)
    assert math.log2(e1 / e2) == pytest.approx(2.0, abs=0.2)


@pytest.mark.parametrize("system,s0", [
    (SeparableOscillator(1, 1, 1.0, 0.3, 0.5), PhaseState(1.0, 0.8, 0.3, -0.4)),
    (LinearForceOscillator(1, 2, 1.0, 0.4, 0.7), PhaseState(1.0, 0.5, 0.2, 0.3)),
])
def test_leapfrog_agrees_with_adaptive(system, s0):
    ref = integrate(system, s0, IntegratorOptions(t_end=10.0)).states[-1]
    assert np.abs(_leapfrog_end(system, s0, 1e-4) - ref).max() < 1e-6


def test_leapfrog_refuses_polar_families():
    with pytest.raises(ValueError):
        integrate_fixed_symplectic(AngularKepler(1.0, 1), P(1, 0, 0, 1), IntegratorOptions(max_step=0.1, t_end=1.0))


def test_trajectories_do_not_depend_on_order(rng):
    system = random_system("Vck", rng)
    z = sample_states(system, 3, rng, max_energy=0.0)
    runs = [integrate(system, PhaseState.from_array(c, "polar"), IntegratorOptions(t_end=5.0)).states for c in z.T]
    again = [integrate(system, PhaseState.from_array(c, "polar"), IntegratorOptions(t_end=5.0)).states
             for c in z.T[::-1]][::-1]
    for a, b in zip(runs, again):
        assert np.array_equal(a, b)
