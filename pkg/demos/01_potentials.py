# The five potential families and the angular barrier they share.
import math

import numpy as np

from superint import (
    AngularKepler,
    AngularOscillator,
    LinearForceOscillator,
    PhaseState,
    RotatedAngularKepler,
    SeparableOscillator,
    angular_barrier,
    eval_potential,
    map_ttw_to_ak,
    rotated_angular_barrier,
)
from superint.potentials import ttw_potential

# Cartesian families live in (x, y), the angular ones in (r, phi).
here = PhaseState(1.0, 0.8, 0.0, 0.0)
print("VaN(1,1):", eval_potential(SeparableOscillator(1, 1, 1.0, 0.3, 0.5), here))
print("VbN(1,2):", eval_potential(LinearForceOscillator(1, 2, 1.0, 0.4, 0.7), here))

there = PhaseState(1.2, 0.4, 0.0, 0.0, "polar")
for system in (AngularOscillator(1.0, "3/2", 2.0, 0.5), AngularKepler(1.0, "3/2", 2.0, 0.5)):
    print(f"{system.family} k={system.k}:", eval_potential(system, there))

# The barrier blows up where sin(k phi) vanishes; evaluation there is refused.
k = 3
phis = np.linspace(0.1, 1.0, 4)
print("F_3 on a few angles:", angular_barrier(k, 2.0, 1.0, phis))

# Swapping sin and cos is a rotation by pi/(2k), in the clockwise sense.
phi = 0.3
print("G_2(0.3) =", rotated_angular_barrier(2, 1.0, 1.0, phi))
print("F_2(0.3 - pi/4) =", angular_barrier(2, 1.0, 1.0, phi - math.pi / 4))
rot = RotatedAngularKepler(1.0, 2, 1.0, 1.0)
print("VckRot at phi=0.3:", eval_potential(rot, PhaseState(1.5, phi, 0, 0, "polar")))

# TTW written with alpha/cos^2 + beta/sin^2 is the angular oscillator at doubled k.
alpha, beta, k_ttw = 1.0, 2.0, 0.75
ka, kb, k2 = map_ttw_to_ak(alpha, beta, "3/4")
print(f"TTW(alpha={alpha}, beta={beta}, k=3/4) -> ka={ka}, kb={kb}, k={k2}")
r, phi = 1.3, 0.5
print("  TTW form:", ttw_potential(1.0, alpha, beta, k_ttw, r, phi))
print("  Vak form:", eval_potential(AngularOscillator(1.0, k2, ka, kb), PhaseState(r, phi, 0, 0, "polar")))
