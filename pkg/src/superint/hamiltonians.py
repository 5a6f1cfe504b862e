"""Hamiltonians ``T + V`` in each family's natural chart and their gradients."""

from __future__ import annotations

from typing import NamedTuple

from .core import POLAR, components
from .potentials import checked_position


class PhaseGradient(NamedTuple):
    """Partial derivatives of a scalar with respect to ``(q1, q2, p1, p2)``."""

    dq1: object
    dq2: object
    dp1: object
    dp2: object


def _kinetic(spec, q1, p1, p2):
    if spec.chart == POLAR:
        return 0.5 * (p1 * p1 + p2 * p2 / (q1 * q1))
    return 0.5 * (p1 * p1 + p2 * p2)


def raw_grad_H(spec, q1, q2, p1, p2) -> PhaseGradient:
    """Gradient of H without any singularity checks (used on the integrator hot path)."""
    dv1, dv2 = spec.gradient(q1, q2)
    if spec.chart == POLAR:
        inv_r2 = 1.0 / (q1 * q1)
        return PhaseGradient(dv1 - p2 * p2 * inv_r2 / q1, dv2, p1, p2 * inv_r2)
    return PhaseGradient(dv1, dv2, p1, p2)


def eval_H(spec, s):
    q1, q2 = checked_position(spec, s)
    _, _, p1, p2 = components(s)
    return _kinetic(spec, q1, p1, p2) + spec.potential(q1, q2)


def grad_H(spec, s) -> PhaseGradient:
    q1, q2 = checked_position(spec, s)
    _, _, p1, p2 = components(s)
    return raw_grad_H(spec, q1, q2, p1, p2)


def symplectic(grad: PhaseGradient):
    """Hamiltonian vector field ``J . grad``: ``(dH/dp, -dH/dq)``."""
    return (grad.dp1, grad.dp2, -grad.dq1, -grad.dq2)


def hamilton_rhs(spec, s):
    """``(dq1/dt, dq2/dt, dp1/dt, dp2/dt)`` from Hamilton's equations."""
    return symplectic(grad_H(spec, s))
