"""Superintegrable planar Hamiltonians with complex-factorized higher-order constants.

The package evaluates the potential families, builds their constants of
motion, integrates trajectories and checks conservation, Poisson brackets,
phase-rotation laws, functional independence and algebraic identities.
"""

from .core import PhaseState, SingularityError, ChartError, FamilyMismatchError, to_cartesian, to_polar, complex_pow_int
from .potentials import (
    AngularKepler,
    AngularOscillator,
    LinearForceOscillator,
    RotatedAngularKepler,
    SeparableOscillator,
    angular_barrier,
    rotated_angular_barrier,
    eval_potential,
    grad_potential,
    map_pw_to_ck,
    map_ttw_to_ak,
)
from .hamiltonians import PhaseGradient, eval_H, grad_H, hamilton_rhs
from .invariants import InvariantSpec, evaluate, invariant_gradient, rotation_factors, composite_constant
from .dynamics import IntegratorOptions, Trajectory, integrate, integrate_fixed_symplectic

__all__ = [
    "PhaseState", "SingularityError", "ChartError", "FamilyMismatchError",
    "to_cartesian", "to_polar", "complex_pow_int",
    "SeparableOscillator", "LinearForceOscillator", "AngularOscillator", "AngularKepler", "RotatedAngularKepler",
    "angular_barrier", "rotated_angular_barrier", "eval_potential", "grad_potential", "map_ttw_to_ak", "map_pw_to_ck",
    "PhaseGradient", "eval_H", "grad_H", "hamilton_rhs",
    "InvariantSpec", "evaluate", "invariant_gradient", "rotation_factors", "composite_constant",
    "IntegratorOptions", "Trajectory", "integrate", "integrate_fixed_symplectic",
]
