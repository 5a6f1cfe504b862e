import math

import numpy as np
import pytest

from superint.core import PhaseState
from superint.hamiltonians import eval_H, grad_H, hamilton_rhs, symplectic
from superint.potentials import AngularKepler, AngularOscillator, SeparableOscillator
from superint.sampling import random_system, sample_states

from fdcheck import central_gradient, relative_error

FAMILIES = ["VaN", "VbN", "Vak", "Vck", "VckRot"]


def test_energy_examples():
    s = PhaseState(1.0, math.pi / 4, 0.0, 1.0, "polar")
    assert eval_H(AngularOscillator(1.0, 2), s) == pytest.approx(1.0, rel=1e-15)
    s = PhaseState(1.0, 0.0, 0.0, 1.0, "polar")
    assert eval_H(AngularKepler(1.0, 1), s) == -0.5


def test_rhs_examples():
    free = AngularKepler(0.0, 1)
    # straight-line motion along the x-axis seen in polar form: p_r stays put
    assert hamilton_rhs(free, PhaseState(2.0, 0.0, 1.0, 0.0, "polar")) == (1.0, 0.0, 0.0, 0.0)
    assert hamilton_rhs(SeparableOscillator(1, 1, 1.0), PhaseState(1, 0, 0, 0)) == (0.0, 0.0, -1.0, -0.0)


def test_centrifugal_term():
    dq1 = grad_H(AngularKepler(0.0, 1), PhaseState(2.0, 0.0, 0.0, 3.0, "polar")).dq1
    assert dq1 == pytest.approx(-9.0 / 8.0)


@pytest.mark.parametrize("family", FAMILIES)
def test_symplectic_pairing_is_exact(family, rng):
    system = random_system(family, rng)
    for z in sample_states(system, 20, rng).T:
        s = PhaseState.from_array(z, system.chart)
        assert hamilton_rhs(system, s) == symplectic(grad_H(system, s))


@pytest.mark.parametrize("family", FAMILIES)
def test_grad_H_matches_central_differences(family, rng):
    worst = 0.0
    for _ in range(10):
        system = random_system(family, rng)
        for z in sample_states(system, 100, rng).T:
            fd = central_gradient(lambda v: eval_H(system, PhaseState.from_array(v, system.chart)), z)
            worst = max(worst, relative_error(fd, grad_H(system, PhaseState.from_array(z, system.chart))))
    assert worst < 1e-6


def test_vectorized_matches_scalar(rng):
    system = random_system("Vak", rng)
    z = sample_states(system, 30, rng)
    vec = eval_H(system, z)
    for i in range(z.shape[1]):
        assert vec[i] == pytest.approx(eval_H(system, PhaseState.from_array(z[:, i], "polar")), rel=1e-15)
    grads = np.array(grad_H(system, z))
    assert grads.shape == (4, 30)
