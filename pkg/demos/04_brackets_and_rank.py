# Poisson brackets with H at random points, then the functional-independence rank.
import numpy as np

from superint.invariants import InvariantSpec
from superint.potentials import AngularKepler, LinearForceOscillator, SeparableOscillator
from superint.sampling import sample_states
from superint.verify import bracket_residual, independence_rank, parabolic_reduction_ranks, rank_check

rng = np.random.default_rng(0)
kepler = AngularKepler(1.0, "5/3", 1.4, 0.5)
points = sample_states(kepler, 1000, rng)
for kind in ("H", "J2", "ReKk", "ImKk", "Pphi2"):
    st = bracket_residual(InvariantSpec(kind, kepler), kepler, points)
    print(f"{{{kind}, H}}: max normalized {st.max:.1e} over {st.points} points")

# Three independent constants on a 4-dimensional phase space: superintegrable.
print("rank {H, J2, ImKk}:", rank_check(["H", "J2", "ImKk"], kepler, points[:, :100], 3).fraction)
rank, sv = independence_rank(["H", "J2", "ReKk", "ImKk"], kepler, points[:, 0])
print("adding ReKk keeps rank", rank, "singular values", np.round(sv, 12))

osc = SeparableOscillator(2, 3, 1.0, 0.5, 0.3)
pts = sample_states(osc, 100, rng)
print("VaN(2,3) rank {Ex, Ey, ImBxy}:", rank_check(["Ex", "Ey", "ImBxy"], osc, pts, 3).fraction)
print("|Bx|^(2nx) only depends on Ex:", rank_check(["Bxx", "Ex"], osc, pts, 1).fraction)

# For VbN(1,2) the sixth-order ImCxy and the quadratic I3 span the same extra direction.
vb = LinearForceOscillator(1, 2, 1.0, 0.4, 0.7)
print("parabolic reduction holds at", np.mean(parabolic_reduction_ranks(vb, sample_states(vb, 100, rng))))
