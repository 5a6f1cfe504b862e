import math

import numpy as np
import pytest

from superint.core import (
    ChartError,
    PhaseState,
    SingularityError,
    complex_pow_int,
    to_cartesian,
    to_polar,
)


def close_state(a, b, tol=1e-14):
    assert a.chart == b.chart
    assert np.allclose(a.as_array(), b.as_array(), rtol=tol, atol=tol)


def test_to_polar_examples():
    close_state(to_polar(PhaseState(1, 0, 0, 1)), PhaseState(1, 0, 0, 1, "polar"))
    close_state(to_polar(PhaseState(0, 2, 1, 0)), PhaseState(2, math.pi / 2, 0, -2, "polar"))


def test_to_cartesian_examples():
    close_state(to_cartesian(PhaseState(1, math.pi / 2, 1, 0, "polar")), PhaseState(0, 1, 0, 1))
    close_state(to_cartesian(PhaseState(2, 0, 0, 2, "polar")), PhaseState(2, 0, 0, 1))


def test_round_trip_and_kinetic_energy(rng):
    z = rng.uniform(-3, 3, size=(10_000, 4))
    worst_trip = worst_kin = 0.0
    for row in z:
        s = PhaseState.from_array(row)
        p = to_polar(s)
        back = to_cartesian(p)
        scale = max(1.0, np.abs(row).max())
        worst_trip = max(worst_trip, np.abs(back.as_array() - row).max() / scale)
        kin_c = s.p1**2 + s.p2**2
        kin_p = p.p1**2 + p.p2**2 / p.q1**2
        worst_kin = max(worst_kin, abs(kin_c - kin_p) / max(kin_c, 1e-300))
    assert worst_trip < 1e-13
    assert worst_kin < 1e-13


def test_origin_and_chart_errors():
    with pytest.raises(SingularityError):
        to_polar(PhaseState(0, 0, 1, 1))
    with pytest.raises(ChartError):
        to_polar(PhaseState(1, 0, 0, 1, "polar"))
    with pytest.raises(ChartError):
        to_cartesian(PhaseState(1, 0, 0, 1))


def test_phase_state_validation():
    with pytest.raises(SingularityError, match="r"):
        PhaseState(0.0, 1.0, 0.0, 0.0, "polar")
    with pytest.raises(ValueError, match="finite"):
        PhaseState(1.0, float("nan"), 0.0, 0.0)
    with pytest.raises(ChartError):
        PhaseState(1.0, 0.0, 0.0, 0.0, "spherical")


def test_complex_pow_examples():
    assert complex_pow_int(1j, 2) == -1
    z = 0.3 - 2.1j
    assert complex_pow_int(z, 1) == z
    assert complex_pow_int(1 + 1j, 4) == -4
    assert complex_pow_int(0j, 0) == 1
    with pytest.raises(ValueError):
        complex_pow_int(z, -1)


def test_complex_pow_addition_law(rng):
    for _ in range(500):
        z = complex(*rng.uniform(-1, 1, 2)) * rng.uniform(0, 10)
        m, n = rng.integers(0, 9, size=2)
        lhs = complex_pow_int(z, m + n)
        rhs = complex_pow_int(z, m) * complex_pow_int(z, n)
        assert abs(lhs - rhs) <= 1e-12 * max(abs(lhs), 1e-300)


def test_complex_pow_vectorized(rng):
    z = rng.normal(size=50) + 1j * rng.normal(size=50)
    assert np.allclose(complex_pow_int(z, 7), z**7, rtol=1e-13)
