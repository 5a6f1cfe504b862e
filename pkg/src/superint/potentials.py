"""Potential families and their angular functions.

Five families are supported, each tagged by the name used in configuration
files:

========  ================================  =========
tag       class                             chart
========  ================================  =========
``VaN``   :class:`SeparableOscillator`      cartesian
``VbN``   :class:`LinearForceOscillator`    cartesian
``Vak``   :class:`AngularOscillator`        polar
``Vck``   :class:`AngularKepler`            polar
``VckRot``:class:`RotatedAngularKepler`     polar
========  ================================  =========

All functions accept scalars or numpy arrays for the coordinates.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import ClassVar

import numpy as np

from .core import CARTESIAN, DELTA_SING, POLAR, ChartError, PhaseState, SingularityError, components, xp_for


def as_fraction(k) -> Fraction:
    """Exact positive rational from an int, a ``"p/q"`` string or a Fraction."""
    if isinstance(k, Fraction):
        frac = k
    elif isinstance(k, bool):
        raise TypeError("k must be a rational, not a bool")
    elif isinstance(k, int):
        frac = Fraction(k)
    elif isinstance(k, str):
        frac = Fraction(k.strip())
    elif isinstance(k, float) and k.is_integer():
        frac = Fraction(int(k))
    else:
        raise TypeError(f"k must be an int, a 'p/q' string or a Fraction, got {k!r}")
    if frac <= 0:
        raise ValueError(f"k must be positive, got {frac}")
    return frac


def _any_below(values, tol):
    if isinstance(values, float):
        return abs(values) < tol
    return bool(np.any(np.abs(values) < tol))


# --- angular functions ---------------------------------------------------------


def angular_barrier(k, ka, kb, phi):
    """``ka / sin^2(k phi) + kb cos(k phi) / sin^2(k phi)``."""
    xp = xp_for(phi)
    kf = float(k)
    s = xp.sin(kf * phi)
    if _any_below(s, DELTA_SING):
        raise SingularityError(f"sin(k phi) vanishes at phi = {phi} (k = {k})")
    return (ka + kb * xp.cos(kf * phi)) / (s * s)


def rotated_angular_barrier(k, ka, kb, phi):
    """``ka / cos^2(k phi) + kb sin(k phi) / cos^2(k phi)``.

    Equal to ``angular_barrier(k, ka, kb, phi - pi / (2 k))``.
    """
    xp = xp_for(phi)
    kf = float(k)
    c = xp.cos(kf * phi)
    if _any_below(c, DELTA_SING):
        raise SingularityError(f"cos(k phi) vanishes at phi = {phi} (k = {k})")
    return (ka + kb * xp.sin(kf * phi)) / (c * c)


def _angular_barrier_derivative(k, ka, kb, phi):
    xp = xp_for(phi)
    kf = float(k)
    s, c = xp.sin(kf * phi), xp.cos(kf * phi)
    return -kf * (kb * s * s + 2.0 * c * (ka + kb * c)) / (s * s * s)


def _rotated_angular_barrier_derivative(k, ka, kb, phi):
    xp = xp_for(phi)
    kf = float(k)
    s, c = xp.sin(kf * phi), xp.cos(kf * phi)
    return kf * (kb * c * c + 2.0 * s * (ka + kb * s)) / (c * c * c)


# --- families ------------------------------------------------------------------


@dataclass(frozen=True)
class SeparableOscillator:
    """``1/2 w^2 (nx^2 x^2 + ny^2 y^2) + k1/(2 x^2) + k2/(2 y^2)`` (tag ``VaN``)."""

    nx: int
    ny: int
    omega: float
    k1: float = 0.0
    k2: float = 0.0

    family: ClassVar[str] = "VaN"
    chart: ClassVar[str] = CARTESIAN

    def __post_init__(self):
        _check_cartesian_params(self)

    def singular_distance(self, x, y):
        return _cartesian_distance(x, y, self.k1 != 0.0, self.k2 != 0.0)

    def potential(self, x, y):
        w2 = self.omega**2
        v = 0.5 * w2 * (self.nx**2 * x * x + self.ny**2 * y * y)
        if self.k1:
            v = v + self.k1 / (2.0 * x * x)
        if self.k2:
            v = v + self.k2 / (2.0 * y * y)
        return v

    def gradient(self, x, y):
        w2 = self.omega**2
        dx = w2 * self.nx**2 * x
        dy = w2 * self.ny**2 * y
        if self.k1:
            dx = dx - self.k1 / (x * x * x)
        if self.k2:
            dy = dy - self.k2 / (y * y * y)
        return dx, dy


@dataclass(frozen=True)
class LinearForceOscillator:
    """``1/2 w^2 (nx^2 x^2 + ny^2 y^2) + k1/(2 x^2) + k2 y`` (tag ``VbN``)."""

    nx: int
    ny: int
    omega: float
    k1: float = 0.0
    k2: float = 0.0

    family: ClassVar[str] = "VbN"
    chart: ClassVar[str] = CARTESIAN

    def __post_init__(self):
        _check_cartesian_params(self)

    def singular_distance(self, x, y):
        return _cartesian_distance(x, y, self.k1 != 0.0, False)

    def potential(self, x, y):
        w2 = self.omega**2
        v = 0.5 * w2 * (self.nx**2 * x * x + self.ny**2 * y * y) + self.k2 * y
        if self.k1:
            v = v + self.k1 / (2.0 * x * x)
        return v

    def gradient(self, x, y):
        w2 = self.omega**2
        dx = w2 * self.nx**2 * x
        if self.k1:
            dx = dx - self.k1 / (x * x * x)
        return dx, w2 * self.ny**2 * y + self.k2


class _AngularFamily:
    """Shared behaviour of ``U(r) + F(phi) / (2 r^2)`` systems."""

    chart: ClassVar[str] = POLAR
    rotated: ClassVar[bool] = False
    # phase-rotation rate of the radial factor, in units of sqrt(J2)/r^2
    radial_rate: ClassVar[int]

    def _validate(self):
        object.__setattr__(self, "k", as_fraction(self.k))
        object.__setattr__(self, "ka", float(self.ka))
        object.__setattr__(self, "kb", float(self.kb))

    @property
    def has_barrier(self) -> bool:
        return self.ka != 0.0 or self.kb != 0.0

    def angular(self, phi):
        if not self.has_barrier:
            return 0.0 * phi
        fn = rotated_angular_barrier if self.rotated else angular_barrier
        return fn(self.k, self.ka, self.kb, phi)

    def angular_derivative(self, phi):
        if not self.has_barrier:
            return 0.0 * phi
        fn = _rotated_angular_barrier_derivative if self.rotated else _angular_barrier_derivative
        return fn(self.k, self.ka, self.kb, phi)

    def singular_distance(self, r, phi):
        if not self.has_barrier:
            return r
        xp = xp_for(phi)
        trig = xp.cos if self.rotated else xp.sin
        a = abs(trig(float(self.k) * phi))
        return np.minimum(r, a) if xp is np else min(r, a)

    def potential(self, r, phi):
        return self.radial(r) + self.angular(phi) / (2.0 * r * r)

    def gradient(self, r, phi):
        f = self.angular(phi)
        return (
            self.radial_derivative(r) - f / (r * r * r),
            self.angular_derivative(phi) / (2.0 * r * r),
        )


@dataclass(frozen=True)
class AngularOscillator(_AngularFamily):
    """``1/2 w^2 r^2 + F_k(phi) / (2 r^2)`` (tag ``Vak``); the TTW family."""

    omega: float
    k: Fraction
    ka: float = 0.0
    kb: float = 0.0

    family: ClassVar[str] = "Vak"
    radial_rate: ClassVar[int] = 2

    def __post_init__(self):
        self._validate()
        if not self.omega > 0.0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        object.__setattr__(self, "omega", float(self.omega))

    def radial(self, r):
        return 0.5 * self.omega**2 * r * r

    def radial_derivative(self, r):
        return self.omega**2 * r


@dataclass(frozen=True)
class AngularKepler(_AngularFamily):
    """``-g/r + F_k(phi) / (2 r^2)`` (tag ``Vck``); the Post-Winternitz family."""

    g: float
    k: Fraction
    ka: float = 0.0
    kb: float = 0.0

    family: ClassVar[str] = "Vck"
    radial_rate: ClassVar[int] = 1

    def __post_init__(self):
        self._validate()
        object.__setattr__(self, "g", float(self.g))

    def radial(self, r):
        return -self.g / r

    def radial_derivative(self, r):
        return self.g / (r * r)


@dataclass(frozen=True)
class RotatedAngularKepler(AngularKepler):
    """``-g/r + G_k(phi) / (2 r^2)`` (tag ``VckRot``), sin and cos interchanged."""

    family: ClassVar[str] = "VckRot"
    rotated: ClassVar[bool] = True


FAMILIES = {
    cls.family: cls
    for cls in (SeparableOscillator, LinearForceOscillator, AngularOscillator, AngularKepler, RotatedAngularKepler)
}


def _check_cartesian_params(spec):
    for name in ("nx", "ny"):
        value = getattr(spec, name)
        if isinstance(value, bool) or int(value) != value or value < 1:
            raise ValueError(f"{name} must be a positive integer, got {value!r}")
        object.__setattr__(spec, name, int(value))
    if not spec.omega > 0.0:
        raise ValueError(f"omega must be positive, got {spec.omega}")
    for name in ("omega", "k1", "k2"):
        object.__setattr__(spec, name, float(getattr(spec, name)))


def _cartesian_distance(x, y, x_singular, y_singular):
    xp = xp_for(x)
    if not (x_singular or y_singular):
        return math.inf if xp is math else np.full(np.shape(x), np.inf)
    if x_singular and y_singular:
        return np.minimum(np.abs(x), np.abs(y)) if xp is np else min(abs(x), abs(y))
    return abs(x) if x_singular else abs(y)


def is_polar(spec) -> bool:
    return spec.chart == POLAR


def system_to_dict(spec) -> dict:
    d = {"family": spec.family}
    for key, value in asdict(spec).items():
        d[key] = str(value) if isinstance(value, Fraction) else value
    return d


def system_from_dict(d: dict):
    """Build a system from ``{"family": tag, **parameters}``."""
    d = dict(d)
    try:
        cls = FAMILIES[d.pop("family")]
    except KeyError as exc:
        raise ValueError(f"unknown or missing family: {exc}") from None
    return cls(**d)


# --- evaluation ----------------------------------------------------------------


def checked_position(spec, s):
    if isinstance(s, PhaseState) and s.chart != spec.chart:
        raise ChartError(f"{spec.family} is evaluated in the {spec.chart} chart, got a {s.chart} state")
    q1, q2, _, _ = components(s)
    if spec.chart == POLAR and _any_below(q1, DELTA_SING):
        raise SingularityError("r must be positive")
    if _any_below(spec.singular_distance(q1, q2), DELTA_SING):
        raise SingularityError(f"position lies on a singular set of {spec.family}")
    return q1, q2


def singular_distance(spec, q1, q2):
    """Distance-like measure of ``(q1, q2)`` from the singular sets of ``spec``."""
    return spec.singular_distance(q1, q2)


def eval_potential(spec, s):
    """Potential energy at the position of ``s`` (momenta are ignored)."""
    return spec.potential(*checked_position(spec, s))


def grad_potential(spec, s):
    """Analytic ``(dV/dq1, dV/dq2)``."""
    return spec.gradient(*checked_position(spec, s))


# --- parameter maps to the TTW / PW forms ----------------------------------------


def map_ttw_to_ak(alpha, beta, k):
    """``(ka, kb, 2k)`` such that the ``Vak`` angular part at ``2k`` equals TTW at ``k``."""
    return 2.0 * (alpha + beta), 2.0 * (beta - alpha), 2 * as_fraction(k)


def map_pw_to_ck(alpha, beta, k):
    """Same coefficient map as :func:`map_ttw_to_ak`, for the Kepler family."""
    return map_ttw_to_ak(alpha, beta, k)


def _ttw_angular(alpha, beta, k, phi):
    xp = xp_for(phi)
    kf = float(k)
    c, s = xp.cos(kf * phi), xp.sin(kf * phi)
    return alpha / (c * c) + beta / (s * s)


def ttw_potential(omega, alpha, beta, k, r, phi):
    """TTW potential written directly in its cos^-2 / sin^-2 form."""
    return 0.5 * omega**2 * r * r + _ttw_angular(alpha, beta, k, phi) / (2.0 * r * r)


def pw_potential(g, alpha, beta, k, r, phi):
    """Post-Winternitz potential written directly in its cos^-2 / sin^-2 form."""
    return -g / r + _ttw_angular(alpha, beta, k, phi) / (2.0 * r * r)
