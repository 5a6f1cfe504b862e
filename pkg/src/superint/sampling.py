"""Seeded random systems and rejection-sampled regular phase-space points."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .hamiltonians import eval_H
from .potentials import (
    AngularKepler,
    AngularOscillator,
    LinearForceOscillator,
    RotatedAngularKepler,
    SeparableOscillator,
    is_polar,
)

POSITION_BOX = (0.3, 3.0)
MOMENTUM_BOX = (-2.0, 2.0)
MIN_SINGULAR_DISTANCE = 0.1
MIN_J2 = 0.05

TESTED_K = tuple(Fraction(k) for k in ("1", "2", "3", "1/2", "3/2", "5/3"))
TESTED_N_PAIRS = ((1, 1), (1, 2), (2, 3), (2, 1), (3, 2))


def sample_states(system, n, rng, *, min_distance=MIN_SINGULAR_DISTANCE, min_j2=MIN_J2, max_energy=None):
    """``(4, n)`` array of states drawn uniformly from the box, rejecting irregular ones.

    Positions (``x, y`` or ``r, phi``) come from ``POSITION_BOX`` and momenta
    from ``MOMENTUM_BOX``.  Points closer than ``min_distance`` to a singular
    set are rejected, and for polar systems so are points with
    ``p_phi^2 + F(phi) <= min_j2``.  ``max_energy`` additionally rejects
    states with ``H >= max_energy`` (e.g. 0 for bound Kepler orbits).
    """
    chunks, have = [], 0
    for _ in range(1000):
        batch = max(2 * (n - have), 64)
        q = rng.uniform(*POSITION_BOX, size=(2, batch))
        p = rng.uniform(*MOMENTUM_BOX, size=(2, batch))
        keep = np.asarray(system.singular_distance(q[0], q[1])) > min_distance
        if keep.ndim == 0:
            keep = np.full(batch, bool(keep))
        if is_polar(system):
            j2 = np.full(batch, -np.inf)
            j2[keep] = p[1, keep] ** 2 + system.angular(q[1, keep])
            keep &= j2 > min_j2
        z = np.vstack([q, p])[:, keep]
        if max_energy is not None and z.shape[1]:
            z = z[:, eval_H(system, z) < max_energy]
        chunks.append(z)
        have += z.shape[1]
        if have >= n:
            return np.hstack(chunks)[:, :n]
    raise RuntimeError(f"could not sample {n} regular points for {system!r}")


def random_system(family, rng, *, k=None, n_pair=None):
    """A random member of ``family`` with confining barriers (``ka > |kb|``, ``k1, k2 > 0``)."""
    if family in ("VaN", "VbN"):
        nx, ny = n_pair if n_pair is not None else TESTED_N_PAIRS[rng.integers(len(TESTED_N_PAIRS))]
        omega = rng.uniform(0.5, 1.5)
        k1 = rng.uniform(0.1, 1.0)
        if family == "VaN":
            return SeparableOscillator(nx, ny, omega, k1, rng.uniform(0.1, 1.0))
        return LinearForceOscillator(nx, ny, omega, k1, rng.uniform(-1.0, 1.0))
    k = k if k is not None else TESTED_K[rng.integers(len(TESTED_K))]
    ka = rng.uniform(0.5, 2.0)
    kb = rng.uniform(-0.8, 0.8) * ka
    if family == "Vak":
        return AngularOscillator(rng.uniform(0.5, 1.5), k, ka, kb)
    cls = {"Vck": AngularKepler, "VckRot": RotatedAngularKepler}[family]
    return cls(rng.uniform(0.5, 1.5), k, ka, kb)


def initial_states(system, n, rng):
    """Regular starting points; for attractive Kepler families only bound orbits."""
    bound = getattr(system, "g", 0.0) > 0.0
    return sample_states(system, n, rng, max_energy=0.0 if bound else None)
