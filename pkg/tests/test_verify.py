import math

import numpy as np
import pytest

from superint.core import PhaseState
from superint.dynamics import IntegratorOptions, Trajectory, integrate
from superint.invariants import InvariantSpec
from superint.potentials import AngularKepler, AngularOscillator, LinearForceOscillator, SeparableOscillator
from superint.sampling import random_system, sample_states
from superint.verify import (
    IDENTITIES,
    DriftStats,
    VerificationReport,
    bracket_residual,
    cartesian_angular_form,
    drift_report,
    identity_suite,
    independence_rank,
    normalized_brackets,
    parabolic_reduction_ranks,
    phase_rotation_check,
    rank_check,
)
from superint.potentials import angular_barrier, map_ttw_to_ak, ttw_potential, eval_potential


def P(*z):
    return PhaseState(*z, "polar")


def fake_trajectory(values):
    system = SeparableOscillator(1, 1, 1.0)
    n = len(values)
    return Trajectory(system, np.arange(n, dtype=float), np.ones((n, 4)), "completed", {"H": np.array(values)})


def test_drift_of_constant_track_is_zero():
    assert drift_report(fake_trajectory([2.5] * 10))["H"] == DriftStats(0.0, 0.0, 10)


def test_drift_uses_absolute_floor():
    d = drift_report(fake_trajectory([0.0, 1e-12]))["H"]
    assert d.max_rel == pytest.approx(1e-2)


def test_drift_needs_tracks():
    with pytest.raises(ValueError):
        drift_report(fake_trajectory([1.0]))
    traj = fake_trajectory([1.0, 1.0])
    traj.invariant_tracks = {}
    with pytest.raises(ValueError):
        drift_report(traj)


def test_energy_drift_on_completed_run(rng):
    system = random_system("Vak", rng)
    z = sample_states(system, 1, rng)[:, 0]
    traj = integrate(system, PhaseState.from_array(z, "polar"), IntegratorOptions(t_end=20.0), ["H"])
    assert drift_report(traj)["H"].max_rel < 1e-9


def test_angular_momentum_alone_is_not_conserved():
    system = AngularOscillator(1.0, 2, 1.5, 0.4)
    traj = integrate(system, P(1.2, 0.39, 0.2, 0.7), IntegratorOptions(t_end=20.0), ["Pphi2", "J2"])
    d = drift_report(traj)
    assert d["Pphi2"].max_rel > 1e-3
    assert d["J2"].max_rel < 1e-7
    report = VerificationReport(drift=d)
    assert report.checks()["drift:Pphi2"] is False and not report.passed


def test_bracket_of_energy_with_itself_vanishes(rng):
    system = random_system("VbN", rng)
    res, _ = normalized_brackets(InvariantSpec("H", system), system, sample_states(system, 100, rng))
    assert np.all(res == 0.0)


def test_angular_constant_bracket(rng):
    system = random_system("Vak", rng)
    stats = bracket_residual(InvariantSpec("J2", system), system, sample_states(system, 1000, rng))
    assert stats.points == 1000 and stats.max < 1e-6


def test_composite_bracket_kepler_k2(rng):
    system = AngularKepler(1.0, 2, 1.3, 0.4)
    stats = bracket_residual(InvariantSpec("ImKk", system), system, sample_states(system, 1000, rng))
    assert stats.max < 1e-5


def test_bracket_skips_singular_points():
    system = AngularKepler(1.0, 1, 1.0, 0.0)
    pts = [P(1.0, 0.0, 0.1, 0.5), P(1.0, 1.0, 0.1, 0.5)]
    stats = bracket_residual(InvariantSpec("J2", system), system, pts)
    assert (stats.points, stats.skipped) == (1, 1)


def _phase_traj(system, s0, t_end=5.0):
    return integrate(system, s0, IntegratorOptions(t_end=t_end, sample_interval=1e-3))


def test_free_kepler_angular_factor_rotation():
    traj = _phase_traj(AngularKepler(0.0, 1), P(1.0, 0.3, -0.4, 0.8))
    assert phase_rotation_check(traj, "N").max < 1e-5


def test_circular_orbit_radial_factor_residual_is_zero():
    traj = _phase_traj(AngularKepler(1.0, 1), P(1.0, 0.0, 0.0, 1.0))
    assert phase_rotation_check(traj, "M").max < 1e-5
    # M stays (numerically) zero, so the regularized residual is tiny
    assert phase_rotation_check(traj, "M").mean < 1e-3


def test_oscillator_rotation_k2():
    traj = _phase_traj(AngularOscillator(1.0, 2, 2.6, 0.6), P(1.2, 0.39, 0.2, 0.7), t_end=10.0)
    assert phase_rotation_check(traj, "M").max < 1e-5
    assert phase_rotation_check(traj, "N").max < 1e-5


def test_phase_rotation_needs_samples_and_polar():
    with pytest.raises(ValueError):
        phase_rotation_check(fake_trajectory([1.0, 1.0, 1.0]), "M")
    traj = integrate(AngularKepler(1.0, 1), P(1.0, 0.0, 0.0, 1.0), IntegratorOptions(t_end=0.002, sample_interval=1e-3))
    with pytest.raises(ValueError):
        phase_rotation_check(traj, "N")


def test_rank_examples(rng):
    system = AngularOscillator(1.0, 2, 1.5, 0.4)
    pts = sample_states(system, 100, rng)
    assert rank_check(["H", "J2"], system, pts, 2).fraction == 1.0
    kepler = AngularKepler(1.0, 1, 1.2, 0.3)
    assert rank_check(["H", "J2", "ImKk"], kepler, sample_states(kepler, 100, rng), 3).fraction >= 0.95
    rank, sv = independence_rank(["H", "J1"], system, P(1.2, 0.4, 0.1, 0.5))
    assert rank == 1 and len(sv) == 2


def test_self_products_follow_axis_energies(rng):
    system = SeparableOscillator(2, 3, 1.1, 0.5, 0.3)
    pts = sample_states(system, 100, rng)
    assert rank_check(["Bxx", "Ex"], system, pts, 1).fraction >= 0.95
    assert rank_check(["Byy", "Ey"], system, pts, 1).fraction >= 0.95
    assert rank_check(["Ex", "Ey", "ImBxy", "ReBxy"], system, pts, 3).fraction >= 0.95


def test_parabolic_reduction(rng):
    system = LinearForceOscillator(1, 2, 1.0, 0.4, 0.7)
    assert np.mean(parabolic_reduction_ranks(system, sample_states(system, 100, rng))) >= 0.95


def test_identity_examples():
    # trig identity at phi = pi/6, k = 1, alpha = 1, beta = 2
    phi, alpha, beta = math.pi / 6, 1.0, 2.0
    ka, kb, k2 = map_ttw_to_ak(alpha, beta, 1)
    lhs = angular_barrier(k2, ka, kb, phi)
    rhs = alpha / math.cos(phi) ** 2 + beta / math.sin(phi) ** 2
    assert lhs == pytest.approx(rhs, rel=1e-14)
    assert eval_potential(AngularOscillator(1.0, k2, ka, kb), P(1.3, phi, 0, 0)) == pytest.approx(
        ttw_potential(1.0, alpha, beta, 1, 1.3, phi), rel=1e-14)
    # k = 2 Cartesian form at x = y = 1
    assert cartesian_angular_form(2, 1.0, 0.0, 1.0, 1.0) == 0.5
    assert angular_barrier(2, 1.0, 0.0, math.pi / 4) / 2 == pytest.approx(0.5, rel=1e-15)


def test_identity_suite_passes_and_is_deterministic():
    a = identity_suite(IDENTITIES, 300, seed=7)
    b = identity_suite(IDENTITIES, 300, seed=7)
    assert [r.name for r in a] == list(IDENTITIES)
    assert all(r.passed for r in a)
    assert a == b
    single = identity_suite(IDENTITIES, 1, seed=0)
    assert all(r.points >= 1 and r.passed for r in single)
    with pytest.raises(ValueError):
        identity_suite(["nope"], 10)


def test_report_is_consistent_with_tolerances():
    d = {"H": DriftStats(5e-8, 1e-8, 10)}
    assert VerificationReport(drift=d).passed
    assert not VerificationReport(drift=d, tolerances={"drift": 1e-8}).passed
    data = VerificationReport(drift=d).to_dict()
    assert data["checks"] == {"drift:H": True} and data["passed"] is True
    assert not VerificationReport().passed
