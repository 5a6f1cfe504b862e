# A checker that never fails proves nothing, so feed it things that are not conserved.
from dataclasses import replace

from superint.config import load_config
from superint.dynamics import integrate
from superint.invariants import InvariantSpec
from superint.verify import drift_report

cfg = load_config(preset="ttw-k2")
real = cfg.system
wrong = replace(real, ka=real.ka + 0.5)  # K built for a slightly different barrier

track = [InvariantSpec("ImKk", real), InvariantSpec("Pphi2", real)]
traj = integrate(real, cfg.initial_state, cfg.integrator, track)
print("true ImKk:        ", f"{drift_report(traj)['ImKk'].max_rel:.1e}")
print("p_phi^2 alone:    ", f"{drift_report(traj)['Pphi2'].max_rel:.1e}")

traj = integrate(real, cfg.initial_state, cfg.integrator, [InvariantSpec("ImKk", wrong)])
print("ImKk, ka off by .5:", f"{drift_report(traj)['ImKk'].max_rel:.1e}")
