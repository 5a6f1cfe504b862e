# Integrate each preset to t = 50 and watch every constant stay put.
from superint.config import PRESETS, load_config
from superint.dynamics import integrate
from superint.verify import drift_report

for name in PRESETS:
    cfg = load_config(preset=name)
    traj = integrate(cfg.system, cfg.initial_state, cfg.integrator, cfg.invariant_specs())
    print(f"{name:16s} {cfg.system.family:6s} {traj.termination}, {len(traj.t)} samples")
    for kind, st in drift_report(traj).items():
        print(f"    {kind:6s} start {traj.invariant_tracks[kind][0]: .6e}   max relative drift {st.max_rel:.1e}")

# For rational k = p/q the composite constant uses integer powers only:
# M^p conj(N)^(2q) for the oscillator, M^p conj(N)^q for Kepler.
from superint.core import PhaseState
from superint.dynamics import IntegratorOptions
from superint.invariants import composite_exponents
from superint.potentials import AngularOscillator

system = AngularOscillator(1.0, "3/2", 1.6, 0.5)
print("\nVak with k = 3/2 uses exponents", composite_exponents(system))
traj = integrate(system, PhaseState(1.1, 0.6, 0.2, 0.8, "polar"), IntegratorOptions(t_end=50.0), ["ReKk", "ImKk"])
print({k: f"{v.max_rel:.1e}" for k, v in drift_report(traj).items()})
