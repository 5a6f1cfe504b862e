# An independent fixed-step symplectic integrator against the adaptive one.
import math

import numpy as np

from superint.config import load_config
from superint.dynamics import IntegratorOptions, integrate
from superint.hamiltonians import eval_H

cfg = load_config(preset="vb-12")
ref = integrate(cfg.system, cfg.initial_state, IntegratorOptions(t_end=10.0)).states[-1]

errors = {}
for h in (0.02, 0.01, 0.005, 1e-4):
    opts = IntegratorOptions(max_step=h, t_end=10.0, sample_interval=h if h >= 0.005 else 0.1, scheme="fixed_symplectic")
    traj = integrate(cfg.system, cfg.initial_state, opts)
    errors[h] = np.linalg.norm(traj.states[-1] - ref)
    energy = eval_H(cfg.system, traj.states.T)
    print(f"h={h:<7g} final-state error {errors[h]:.2e}   energy band {np.ptp(energy):.2e}")
print("observed order:", round(math.log2(errors[0.01] / errors[0.005]), 3))
