"""Constants of motion: quadratic integrals, complex factors and their products.

Every invariant is a genuine phase-space function, so it can be evaluated at
arbitrary points (scalars or ``(4, n)`` arrays), differentiated and bracketed
with the Hamiltonian.  Complex quantities are returned as Python / numpy
complex numbers.

Rational deformation parameters ``k = p/q`` are handled by clearing
denominators: the composite constant is ``M^p conj(N)^(c q)`` where ``c`` is
the radial rotation rate (2 for the oscillator, 1 for the Kepler family).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import CARTESIAN, PhaseState, SingularityError, FamilyMismatchError, complex_pow_int, components, xp_for
from .hamiltonians import PhaseGradient, eval_H, raw_grad_H
from .potentials import LinearForceOscillator, SeparableOscillator, checked_position, is_polar


class NonPositiveJ2Error(SingularityError):
    """The angular constant is not positive, so its square root is undefined."""


SEPARABLE_KINDS = ("H", "Ex", "Ey", "Bxx", "Byy", "ReBxy", "ImBxy")
LINEAR_FORCE_KINDS = ("H", "Ex", "Ey", "ReCxy", "ImCxy", "I3_12")
POLAR_KINDS = ("H", "J1", "J2", "ReMr", "ImMr", "ReNphi", "ImNphi", "ReKk", "ImKk", "Pphi2")
ALL_KINDS = tuple(dict.fromkeys(SEPARABLE_KINDS + LINEAR_FORCE_KINDS + POLAR_KINDS))

# kinds with closed-form gradients; the rest use Richardson-extrapolated differences
ANALYTIC_KINDS = frozenset({"H", "J1", "J2", "Ex", "Ey", "I3_12", "Pphi2"})


def applicable_kinds(system) -> tuple:
    if isinstance(system, SeparableOscillator):
        return SEPARABLE_KINDS
    if isinstance(system, LinearForceOscillator):
        if (system.nx, system.ny) == (1, 2):
            return LINEAR_FORCE_KINDS
        return LINEAR_FORCE_KINDS[:-1]
    return POLAR_KINDS


@dataclass(frozen=True)
class InvariantSpec:
    """A named invariant of a particular system.

    The system carried here may differ from the one being integrated; that is
    how mismatched-parameter negative controls are expressed.
    """

    kind: str
    system: object

    def __post_init__(self):
        if self.kind not in ALL_KINDS:
            raise ValueError(f"unknown invariant kind {self.kind!r}")
        if self.kind not in applicable_kinds(self.system):
            raise FamilyMismatchError(f"{self.kind} is not defined for family {self.system.family}")

    @property
    def analytic(self) -> bool:
        return self.kind in ANALYTIC_KINDS


def _split(system, s):
    q1, q2 = checked_position(system, s)
    _, _, p1, p2 = components(s)
    return q1, q2, p1, p2


def _require(system, cls_or_polar, what):
    ok = is_polar(system) if cls_or_polar == "polar" else isinstance(system, cls_or_polar)
    if not ok:
        raise FamilyMismatchError(f"{what} is not defined for family {system.family}")


# --- polar families --------------------------------------------------------------


def angular_constant(system, s):
    """``p_phi^2 + F(phi)``, the separation constant of the angular motion."""
    _require(system, "polar", "the angular constant")
    _, phi, _, pphi = _split(system, s)
    return pphi * pphi + system.angular(phi)


def radial_constant(system, s):
    """``p_r^2 + p_phi^2/r^2 + 2 U(r) + F(phi)/r^2``, i.e. twice the energy."""
    _require(system, "polar", "the radial constant")
    r, phi, pr, pphi = _split(system, s)
    return pr * pr + (pphi * pphi + system.angular(phi)) / (r * r) + 2.0 * system.radial(r)


def rotation_factors(system, s):
    """Radial factor ``M``, angular factor ``N`` and rotation rate ``lambda``.

    Along trajectories ``dM/dt = i c lambda M`` (``c`` = ``system.radial_rate``)
    and ``dN/dt = i k lambda N`` with ``lambda = sqrt(J2) / r^2``.
    """
    _require(system, "polar", "the radial/angular factors")
    r, phi, pr, pphi = _split(system, s)
    xp = xp_for(r)
    j2 = pphi * pphi + system.angular(phi)
    if np.any(np.asarray(j2) <= 0.0):
        raise NonPositiveJ2Error("the angular constant must be positive for the complex factors")
    root = xp.sqrt(j2)
    lam = root / (r * r)
    if system.radial_rate == 2:
        m = 2.0 * pr * root / r + 1j * (pr * pr + system.omega**2 * r * r - j2 / (r * r))
    else:
        m = pr * root + 1j * (system.g - j2 / r)
    kphi = float(system.k) * phi
    if system.rotated:
        n = 0.5 * system.kb + j2 * xp.sin(kphi) - 1j * root * pphi * xp.cos(kphi)
    else:
        n = 0.5 * system.kb + j2 * xp.cos(kphi) + 1j * root * pphi * xp.sin(kphi)
    return m, n, lam


def composite_exponents(system) -> tuple[int, int]:
    """Integer powers ``(a, b)`` in ``M^a conj(N)^b``."""
    k = system.k
    return k.numerator, system.radial_rate * k.denominator


def composite_constant(system, s):
    """The higher-order complex constant ``M^p conj(N)^(c q)`` for ``k = p/q``."""
    m, n, _ = rotation_factors(system, s)
    a, b = composite_exponents(system)
    return complex_pow_int(m, a) * complex_pow_int(np.conj(n), b)


# --- Cartesian families ------------------------------------------------------------


def axis_energy(system, s, axis):
    """One-dimensional energy along ``axis`` ('x' or 'y')."""
    if system.chart != CARTESIAN:
        raise FamilyMismatchError(f"axis energies are not defined for family {system.family}")
    x, y, px, py = _split(system, s)
    w2 = system.omega**2
    if axis == "x":
        e = 0.5 * px * px + 0.5 * w2 * system.nx**2 * x * x
        return e + system.k1 / (2.0 * x * x) if system.k1 else e
    if axis != "y":
        raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")
    e = 0.5 * py * py + 0.5 * w2 * system.ny**2 * y * y
    if isinstance(system, LinearForceOscillator):
        return e + system.k2 * y
    return e + system.k2 / (2.0 * y * y) if system.k2 else e


def _axis_factor(n, omega, coupling, q, p):
    a = p + 1j * (n * omega * q)
    b = a * a
    return b + coupling / (q * q) if coupling else b


def axis_factor(system, s, axis):
    """``(p + i n w q)^2 + k / q^2`` along ``axis``; rotates at rate ``2 n w``."""
    x, y, px, py = _split(system, s)
    if axis == "x":
        return _axis_factor(system.nx, system.omega, system.k1, x, px)
    _require(system, SeparableOscillator, "the y-axis factor")
    if axis != "y":
        raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")
    return _axis_factor(system.ny, system.omega, system.k2, y, py)


def axis_product(system, s):
    """``Bx^ny conj(By)^nx``, the complex higher-order constant of ``VaN``."""
    _require(system, SeparableOscillator, "the axis product")
    bx, by = axis_factor(system, s, "x"), axis_factor(system, s, "y")
    return complex_pow_int(bx, system.ny) * complex_pow_int(np.conj(by), system.nx)


def self_product(system, s, axis):
    """``Bi^ni conj(Bi)^ni = |Bi|^(2 ni)``; a function of the matching axis energy."""
    _require(system, SeparableOscillator, "the self product")
    b = axis_factor(system, s, axis)
    n = system.nx if axis == "x" else system.ny
    return (complex_pow_int(b, n) * complex_pow_int(np.conj(b), n)).real


def shifted_product(system, s):
    """``Bx^ny conj(A~y)^(2 nx)`` with ``A~y = p_y + i (ny w y + k2/(ny w))``."""
    _require(system, LinearForceOscillator, "the shifted product")
    x, y, px, py = _split(system, s)
    bx = _axis_factor(system.nx, system.omega, system.k1, x, px)
    ny_w = system.ny * system.omega
    ay = py + 1j * (ny_w * y + system.k2 / ny_w)
    return complex_pow_int(bx, system.ny) * complex_pow_int(np.conj(ay), 2 * system.nx)


def parabolic_constant(system, s):
    """Quadratic constant of ``VbN(1, 2)`` from separability in parabolic coordinates.

    ``(x p_y - y p_x) p_x + w^2 x^2 y - k1 y / x^2 + k2 x^2 / 2``.  The last
    term is what keeps it conserved when the linear force ``k2`` is on.
    """
    _require(system, LinearForceOscillator, "the parabolic constant")
    if (system.nx, system.ny) != (1, 2):
        raise FamilyMismatchError("the parabolic constant needs nx = 1, ny = 2")
    x, y, px, py = _split(system, s)
    value = (x * py - y * px) * px + system.omega**2 * x * x * y + 0.5 * system.k2 * x * x
    return value - system.k1 * y / (x * x) if system.k1 else value


# --- dispatch ----------------------------------------------------------------------------


def _evaluate(kind, system, s):
    if kind == "H":
        return eval_H(system, s)
    if kind == "J1":
        return radial_constant(system, s)
    if kind == "J2":
        return angular_constant(system, s)
    if kind == "Pphi2":
        return components(s)[3] ** 2
    if kind in ("Ex", "Ey"):
        return axis_energy(system, s, kind[1])
    if kind in ("Bxx", "Byy"):
        return self_product(system, s, kind[1])
    if kind.endswith("Bxy"):
        z = axis_product(system, s)
    elif kind.endswith("Cxy"):
        z = shifted_product(system, s)
    elif kind == "I3_12":
        return parabolic_constant(system, s)
    elif kind.endswith("Kk"):
        z = composite_constant(system, s)
    elif kind.endswith("Mr"):
        z = rotation_factors(system, s)[0]
    elif kind.endswith("Nphi"):
        z = rotation_factors(system, s)[1]
    else:
        raise ValueError(f"unknown invariant kind {kind!r}")
    return z.real if kind.startswith("Re") else z.imag


def evaluate(inv: InvariantSpec, s):
    """Real value of ``inv`` at ``s`` (a state or a ``(4, n)`` array)."""
    if isinstance(s, PhaseState) and s.chart != inv.system.chart:
        raise FamilyMismatchError(f"{inv.system.family} invariants need a {inv.system.chart} state")
    return _evaluate(inv.kind, inv.system, s)


# --- gradients --------------------------------------------------------------------------

FD_REL_STEP = 3e-5
FD_FLOOR = 0.1


def richardson_gradient(fn, z) -> PhaseGradient:
    """Central differences at steps ``h`` and ``h/2`` combined to fourth order.

    ``h = FD_REL_STEP * max(|z_i|, FD_FLOOR)`` per component.
    """
    z = [np.asarray(c, dtype=float) for c in z]
    out = []
    for i in range(4):
        h = FD_REL_STEP * np.maximum(np.abs(z[i]), FD_FLOOR)

        def central(step, i=i):
            up, down = list(z), list(z)
            up[i] = z[i] + step
            down[i] = z[i] - step
            return (fn(np.array(up)) - fn(np.array(down))) / (2.0 * step)

        out.append((4.0 * central(0.5 * h) - central(h)) / 3.0)
    return PhaseGradient(*out)


def _analytic_gradient(kind, system, q1, q2, p1, p2):
    zero = 0.0 * q1
    if kind == "H":
        return raw_grad_H(system, q1, q2, p1, p2)
    if kind == "J1":
        return PhaseGradient(*(2.0 * g for g in raw_grad_H(system, q1, q2, p1, p2)))
    if kind == "J2":
        return PhaseGradient(zero, system.angular_derivative(q2), zero, 2.0 * p2)
    if kind == "Pphi2":
        return PhaseGradient(zero, zero, zero, 2.0 * p2)
    w2 = system.omega**2
    if kind == "Ex":
        dx = w2 * system.nx**2 * q1
        if system.k1:
            dx = dx - system.k1 / (q1 * q1 * q1)
        return PhaseGradient(dx, zero, p1, zero)
    if kind == "Ey":
        dy = w2 * system.ny**2 * q2
        if isinstance(system, LinearForceOscillator):
            dy = dy + system.k2
        elif system.k2:
            dy = dy - system.k2 / (q2 * q2 * q2)
        return PhaseGradient(zero, dy, zero, p2)
    if kind == "I3_12":
        x, y, px, py = q1, q2, p1, p2
        dx = py * px + 2.0 * w2 * x * y + system.k2 * x
        dy = -px * px + w2 * x * x
        if system.k1:
            dx = dx + 2.0 * system.k1 * y / (x * x * x)
            dy = dy - system.k1 / (x * x)
        return PhaseGradient(dx, dy, x * py - 2.0 * y * px, x * px)
    raise ValueError(f"no closed-form gradient for {kind!r}")


def invariant_gradient(inv: InvariantSpec, s) -> PhaseGradient:
    """4-gradient of ``inv``: closed form for quadratic invariants, else finite differences."""
    q1, q2, p1, p2 = _split(inv.system, s)
    if inv.analytic:
        return _analytic_gradient(inv.kind, inv.system, q1, q2, p1, p2)
    return richardson_gradient(lambda z: _evaluate(inv.kind, inv.system, z), (q1, q2, p1, p2))
