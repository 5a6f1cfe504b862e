"""Phase-space states, chart changes and exact integer powers of complex numbers."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

CARTESIAN = "cartesian"
POLAR = "polar"
CHARTS = (CARTESIAN, POLAR)

# evaluation inside this band around a singular set is an error
DELTA_SING = 1e-10


class SingularityError(ValueError):
    """Raised when a quantity is evaluated on (or too close to) a singular set."""


class ChartError(ValueError):
    """Raised when a state is given in the wrong chart for a system."""


class FamilyMismatchError(ValueError):
    """Raised when an invariant is requested for a system it does not apply to."""


@dataclass(frozen=True)
class PhaseState:
    """A point ``(q1, q2, p1, p2)`` of the planar phase space.

    In the Cartesian chart the coordinates are ``(x, y, p_x, p_y)``; in the
    polar chart ``(r, phi, p_r, p_phi)``.  The angle is never wrapped.
    """

    q1: float
    q2: float
    p1: float
    p2: float
    chart: str = CARTESIAN

    def __post_init__(self):
        if self.chart not in CHARTS:
            raise ChartError(f"unknown chart {self.chart!r}")
        for name in ("q1", "q2", "p1", "p2"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"PhaseState.{name} must be finite, got {value}")
            object.__setattr__(self, name, value)
        if self.chart == POLAR and not self.q1 > 0.0:
            raise SingularityError(f"polar chart requires q1 (r) > 0, got r = {self.q1}")

    @classmethod
    def from_array(cls, z, chart=CARTESIAN) -> "PhaseState":
        q1, q2, p1, p2 = (float(v) for v in z)
        return cls(q1, q2, p1, p2, chart)

    def as_array(self) -> np.ndarray:
        return np.array([self.q1, self.q2, self.p1, self.p2])

    def astuple(self):
        return (self.q1, self.q2, self.p1, self.p2)


def xp_for(value):
    """Return ``math`` for Python scalars and ``numpy`` for arrays."""
    if isinstance(value, (float, int)):
        return math
    return np


def components(s):
    """Unpack a ``PhaseState`` or a ``(4, ...)`` array into four components."""
    if isinstance(s, PhaseState):
        return s.q1, s.q2, s.p1, s.p2
    if isinstance(s, (tuple, list)) and len(s) == 4 and all(isinstance(v, (float, int)) for v in s):
        return tuple(float(v) for v in s)
    z = np.asarray(s, dtype=float)
    if z.shape[0] != 4:
        raise ValueError(f"expected a state with 4 leading components, got shape {z.shape}")
    if z.ndim == 1:
        return tuple(float(v) for v in z)
    return z[0], z[1], z[2], z[3]


def to_polar(s: PhaseState) -> PhaseState:
    """Cartesian -> polar canonical point transformation."""
    if s.chart != CARTESIAN:
        raise ChartError("to_polar expects a Cartesian state")
    x, y, px, py = s.astuple()
    if x == 0.0 and y == 0.0:
        raise SingularityError("the origin has no polar representation")
    r = math.hypot(x, y)
    return PhaseState(r, math.atan2(y, x), (x * px + y * py) / r, x * py - y * px, POLAR)


def to_cartesian(s: PhaseState) -> PhaseState:
    """Polar -> Cartesian; inverse of :func:`to_polar`."""
    if s.chart != POLAR:
        raise ChartError("to_cartesian expects a polar state")
    r, phi, pr, pphi = s.astuple()
    c, sn = math.cos(phi), math.sin(phi)
    return PhaseState(r * c, r * sn, pr * c - pphi * sn / r, pr * sn + pphi * c / r, CARTESIAN)


def complex_pow_int(z, n: int):
    """``z**n`` for a nonnegative integer ``n`` by binary exponentiation.

    Works elementwise on numpy complex arrays.  ``z**0`` is 1 (also for z = 0).
    """
    n = int(n)
    if n < 0:
        raise ValueError("complex_pow_int needs a nonnegative exponent")
    result = np.ones_like(z) if isinstance(z, np.ndarray) else complex(1.0)
    base = z
    while n:
        if n & 1:
            result = result * base
        n >>= 1
        if n:
            base = base * base
    return result
