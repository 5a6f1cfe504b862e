# M and N are not constant: they turn in the complex plane at rates c*lambda and k*lambda.
import numpy as np

from superint.config import load_config
from superint.dynamics import IntegratorOptions, integrate
from superint.invariants import rotation_factors
from superint.verify import phase_rotation_check

for name in ("ttw-k2", "pw-k1"):
    cfg = load_config(preset=name)
    traj = integrate(cfg.system, cfg.initial_state, IntegratorOptions(t_end=10.0, sample_interval=1e-3))
    m, n, lam = rotation_factors(cfg.system, traj.states.T)
    print(f"{name}: c = {cfg.system.radial_rate}, k = {cfg.system.k}")
    print(f"    |M| varies by {np.ptp(np.abs(m)):.2e} while arg M sweeps {np.ptp(np.unwrap(np.angle(m))):.1f} rad")
    for which in ("M", "N"):
        print(f"    {which}: max normalized residual {phase_rotation_check(traj, which).max:.1e}")

# On a circular Kepler orbit M is identically zero; the regularized residual stays finite.
cfg = load_config(preset="kepler-circular")
traj = integrate(cfg.system, cfg.initial_state, IntegratorOptions(t_end=10.0, sample_interval=1e-3))
print("circular orbit, M residual:", phase_rotation_check(traj, "M").max)
