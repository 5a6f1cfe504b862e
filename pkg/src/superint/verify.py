"""Checks that claimed constants of motion really are conserved and independent.

Five kinds of evidence are produced:

* drift of sampled invariants along integrated trajectories,
* normalized Poisson brackets ``{I, H}`` at random regular points,
* phase-rotation residuals ``dZ/dt - i c lambda Z`` of the complex factors,
* numerical rank of invariant gradients (functional independence),
* pointwise algebraic identities between the different forms of the potentials.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .core import PhaseState
from .hamiltonians import grad_H
from .invariants import ANALYTIC_KINDS, InvariantSpec, invariant_gradient, rotation_factors
from .potentials import (
    AngularKepler,
    AngularOscillator,
    LinearForceOscillator,
    RotatedAngularKepler,
    angular_barrier,
    eval_potential,
    is_polar,
    map_pw_to_ck,
    map_ttw_to_ak,
    pw_potential,
    rotated_angular_barrier,
    ttw_potential,
    _ttw_angular,
)
from .sampling import TESTED_K, sample_states

DRIFT_EPS = 1e-10
BRACKET_EPS = 1e-12
ROTATION_EPS = 1e-12
RANK_RTOL = 1e-8

DRIFT_TOL = 1e-7
BRACKET_TOL_ANALYTIC = 1e-6
BRACKET_TOL_FD = 1e-5
ROTATION_TOL = 1e-5
IDENTITY_TOL = 1e-11
RANK_FRACTION = 0.95


@dataclass
class DriftStats:
    max_rel: float
    mean_rel: float
    samples: int


@dataclass
class ResidualStats:
    max: float
    mean: float
    points: int
    skipped: int = 0


@dataclass
class RankResult:
    invariants: list
    expected: int
    fraction: float
    points: int
    ranks: list = field(repr=False, default_factory=list)
    min_singular_values: list = field(repr=False, default_factory=list)


@dataclass
class IdentityResult:
    name: str
    max_discrepancy: float
    points: int
    tolerance: float
    passed: bool


@dataclass
class VerificationReport:
    """Aggregated statistics with pass/fail against the recorded tolerances."""

    drift: dict = field(default_factory=dict)
    brackets: dict = field(default_factory=dict)
    phase_rotation: dict = field(default_factory=dict)
    independence: list = field(default_factory=list)
    identities: list = field(default_factory=list)
    tolerances: dict = field(default_factory=dict)
    termination: str | None = None

    def checks(self) -> dict:
        tol = {**default_tolerances(), **self.tolerances}
        out = {}
        for kind, st in self.drift.items():
            out[f"drift:{kind}"] = st.max_rel < tol["drift"]
        for kind, st in self.brackets.items():
            limit = tol["bracket_analytic"] if kind in ANALYTIC_KINDS else tol["bracket_fd"]
            out[f"bracket:{kind}"] = st.points > 0 and st.max < limit
        for which, st in self.phase_rotation.items():
            out[f"phase_rotation:{which}"] = st.max < tol["phase_rotation"]
        for res in self.independence:
            out["rank:" + ",".join(res.invariants)] = res.fraction >= tol["rank_fraction"]
        for res in self.identities:
            out[f"identity:{res.name}"] = res.passed
        if self.termination is not None:
            out["termination"] = self.termination == "completed"
        return out

    @property
    def passed(self) -> bool:
        checks = self.checks()
        return bool(checks) and all(checks.values())

    def to_dict(self) -> dict:
        return {
            "drift": {k: asdict(v) for k, v in self.drift.items()},
            "brackets": {k: asdict(v) for k, v in self.brackets.items()},
            "phase_rotation": {k: asdict(v) for k, v in self.phase_rotation.items()},
            "independence": [asdict(r) for r in self.independence],
            "identities": [asdict(r) for r in self.identities],
            "tolerances": {**default_tolerances(), **self.tolerances},
            "termination": self.termination,
            "checks": self.checks(),
            "passed": self.passed,
        }


def default_tolerances() -> dict:
    return {
        "drift": DRIFT_TOL,
        "bracket_analytic": BRACKET_TOL_ANALYTIC,
        "bracket_fd": BRACKET_TOL_FD,
        "phase_rotation": ROTATION_TOL,
        "rank_fraction": RANK_FRACTION,
        "identity": IDENTITY_TOL,
    }


# --- drift -------------------------------------------------------------------------


def relative_drift(values) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    return np.abs(values - values[0]) / max(abs(values[0]), DRIFT_EPS)


def drift_report(traj) -> dict:
    """``max_t |I(t) - I(0)| / max(|I(0)|, 1e-10)`` for every tracked invariant."""
    if not traj.invariant_tracks:
        raise ValueError("trajectory has no invariant tracks")
    out = {}
    for kind, values in traj.invariant_tracks.items():
        if len(values) < 2:
            raise ValueError(f"track {kind!r} needs at least 2 samples, has {len(values)}")
        d = relative_drift(values)
        out[kind] = DriftStats(float(d.max()), float(d.mean()), int(len(values)))
    return out


# --- Poisson brackets ------------------------------------------------------------------


def _as_point_array(points):
    if isinstance(points, PhaseState):
        return points.as_array()[:, None]
    if isinstance(points, (list, tuple)) and points and isinstance(points[0], PhaseState):
        return np.array([p.astuple() for p in points]).T
    z = np.asarray(points, dtype=float)
    return z[:, None] if z.ndim == 1 else z


def _regular_mask(inv, z):
    system = inv.system
    mask = np.asarray(system.singular_distance(z[0], z[1])) >= 1e-10
    mask = np.broadcast_to(mask, z.shape[1:]).copy()
    if is_polar(system):
        mask &= z[0] > 0
        if inv.kind[2:] in ("Mr", "Nphi", "Kk"):
            j2 = np.full(z.shape[1], -np.inf)
            j2[mask] = z[3, mask] ** 2 + system.angular(z[1, mask])
            mask &= j2 > 0
    return mask


def poisson_bracket(grad_f, grad_g):
    """``{f, g} = df/dq . dg/dp - df/dp . dg/dq``."""
    # grouped per degree of freedom so that {f, f} is exactly zero
    return (grad_f.dq1 * grad_g.dp1 - grad_f.dp1 * grad_g.dq1) + (grad_f.dq2 * grad_g.dp2 - grad_f.dp2 * grad_g.dq2)


def normalized_brackets(inv: InvariantSpec, spec, points) -> tuple[np.ndarray, int]:
    """Per-point ``|{I, H}| / (|grad I| |grad H| + eps)`` and the number of skipped points."""
    z = _as_point_array(points)
    mask = _regular_mask(inv, z) & _regular_mask(InvariantSpec("H", spec), z)
    z = z[:, mask]
    skipped = int((~mask).sum())
    if z.shape[1] == 0:
        return np.zeros(0), skipped
    gi = invariant_gradient(inv, z)
    gh = grad_H(spec, z)
    norm_i = np.sqrt(sum(np.square(c) for c in gi))
    norm_h = np.sqrt(sum(np.square(c) for c in gh))
    return np.abs(poisson_bracket(gi, gh)) / (norm_i * norm_h + BRACKET_EPS), skipped


def bracket_residual(inv: InvariantSpec, spec, points) -> ResidualStats:
    """Statistics of the normalized bracket of ``inv`` with the Hamiltonian of ``spec``."""
    res, skipped = normalized_brackets(inv, spec, points)
    if res.size == 0:
        return ResidualStats(math.inf, math.inf, 0, skipped)
    return ResidualStats(float(res.max()), float(res.mean()), int(res.size), skipped)


# --- phase rotation ---------------------------------------------------------------------


def _five_point_derivative(values, dt):
    v = values
    return (v[:-4] - 8.0 * v[1:-3] + 8.0 * v[3:-1] - v[4:]) / (12.0 * dt)


def phase_rotation_residuals(traj, which: str) -> np.ndarray:
    """Normalized ``|dZ/dt - i c lambda Z| / (|lambda| |Z| + eps)`` at interior samples.

    ``Z`` is the radial factor (``which="M"``, ``c`` = radial rate) or the
    angular factor (``which="N"``, ``c = k``).  Derivatives are fourth-order
    central differences over uniformly spaced samples.
    """
    system = traj.system
    if not is_polar(system):
        raise ValueError("phase-rotation checks need a polar family")
    if which not in ("M", "N"):
        raise ValueError(f"which must be 'M' or 'N', got {which!r}")
    t = np.asarray(traj.t)
    dt = t[1] - t[0] if t.size > 1 else 0.0
    n = t.size
    # a shortened final step is dropped
    if n > 2 and not math.isclose(t[-1] - t[-2], dt, rel_tol=1e-6):
        n -= 1
    if n < 5:
        raise ValueError(f"phase-rotation check needs at least 5 uniform samples, got {n}")
    m, nphi, lam = rotation_factors(system, traj.states[:n].T)
    z, rate = (m, system.radial_rate) if which == "M" else (nphi, float(system.k))
    dz = _five_point_derivative(z, dt)
    zc, lc = z[2:-2], lam[2:-2]
    return np.abs(dz - 1j * rate * lc * zc) / (np.abs(lc) * np.abs(zc) + ROTATION_EPS)


def phase_rotation_check(traj, which: str) -> ResidualStats:
    res = phase_rotation_residuals(traj, which)
    return ResidualStats(float(res.max()), float(res.mean()), int(res.size))


# --- functional independence -------------------------------------------------------------


def _resolve(invs, spec):
    return [InvariantSpec(i, spec) if isinstance(i, str) else i for i in invs]


def gradient_matrix(invs, spec, points) -> np.ndarray:
    """``(n_points, n_invariants, 4)`` stack of unit-normalized invariant gradients."""
    z = _as_point_array(points)
    rows = []
    for inv in _resolve(invs, spec):
        g = np.array([np.broadcast_to(c, z.shape[1:]) for c in invariant_gradient(inv, z)])
        rows.append(g / np.linalg.norm(g, axis=0))
    return np.moveaxis(np.array(rows), 2, 0)


def independence_rank(invs, spec, point) -> tuple[int, list]:
    """Numerical rank of the gradient rows at ``point``; ``sigma_i > 1e-8 sigma_max``."""
    mat = gradient_matrix(invs, spec, point)[0]
    sv = np.linalg.svd(mat, compute_uv=False)
    return int(np.sum(sv > RANK_RTOL * sv[0])), [float(v) for v in sv]


def ranks_at(invs, spec, points) -> tuple[np.ndarray, np.ndarray]:
    """Ranks and singular values at many points at once."""
    sv = np.linalg.svd(gradient_matrix(invs, spec, points), compute_uv=False)
    return np.sum(sv > RANK_RTOL * sv[:, :1], axis=1), sv


def rank_check(invs, spec, points, expected: int) -> RankResult:
    invs = _resolve(invs, spec)
    ranks, sv = ranks_at(invs, spec, points)
    return RankResult(
        invariants=[i.kind for i in invs],
        expected=int(expected),
        fraction=float(np.mean(ranks == expected)),
        points=int(ranks.size),
        ranks=[int(r) for r in ranks],
        min_singular_values=[float(v) for v in sv[:, -1]],
    )


# --- algebraic identities ---------------------------------------------------------------

IDENTITIES = (
    "ttw_trig",
    "ttw_potential",
    "pw_potential",
    "cartesian_forms",
    "rotation",
    "parabolic_reduction",
)
PARABOLIC_POINTS = 100


def _rand_k(rng, n):
    return [TESTED_K[i] for i in rng.integers(len(TESTED_K), size=n)]


def _angles(rng, k, trig, n_max=10_000):
    """Angles in ``[0, 2 pi)`` with ``|trig(k phi)| > 0.1``, one per entry of ``k``."""
    out = []
    for kk in k:
        for _ in range(n_max):
            phi = rng.uniform(0.0, 2.0 * math.pi)
            if abs(trig(float(kk) * phi)) > 0.1:
                out.append(phi)
                break
    return np.array(out)


def _check_ttw_trig(rng, n):
    k = _rand_k(rng, n)
    alpha, beta = rng.uniform(0.1, 2.0, n), rng.uniform(0.1, 2.0, n)
    phi = _angles(rng, [2 * kk for kk in k], math.sin)
    worst = 0.0
    for kk, a, b, ph in zip(k, alpha, beta, phi):
        ka, kb, k2 = map_ttw_to_ak(a, b, kk)
        lhs = angular_barrier(k2, ka, kb, ph)
        rhs = _ttw_angular(a, b, kk, ph)
        scale = a / math.cos(float(kk) * ph) ** 2 + b / math.sin(float(kk) * ph) ** 2
        worst = max(worst, abs(lhs - rhs) / scale)
    return worst


def _check_reduced_potential(rng, n, kepler):
    k = _rand_k(rng, n)
    alpha, beta = rng.uniform(0.1, 2.0, n), rng.uniform(0.1, 2.0, n)
    coupling = rng.uniform(0.5, 1.5, n)
    r = rng.uniform(0.3, 3.0, n)
    phi = _angles(rng, [2 * kk for kk in k], math.sin)
    worst = 0.0
    for kk, a, b, c, rr, ph in zip(k, alpha, beta, coupling, r, phi):
        if kepler:
            ka, kb, k2 = map_pw_to_ck(a, b, kk)
            lhs = eval_potential(AngularKepler(c, k2, ka, kb), PhaseState(rr, ph, 0.0, 0.0, "polar"))
            rhs = pw_potential(c, a, b, kk, rr, ph)
            radial = c / rr
        else:
            ka, kb, k2 = map_ttw_to_ak(a, b, kk)
            lhs = eval_potential(AngularOscillator(c, k2, ka, kb), PhaseState(rr, ph, 0.0, 0.0, "polar"))
            rhs = ttw_potential(c, a, b, kk, rr, ph)
            radial = 0.5 * c * c * rr * rr
        angular = a / math.cos(float(kk) * ph) ** 2 + b / math.sin(float(kk) * ph) ** 2
        worst = max(worst, abs(lhs - rhs) / (radial + angular / (2.0 * rr * rr)))
    return worst


def cartesian_angular_form(k, ka, kb, x, y):
    """``F_k(phi) / r^2`` written in Cartesian coordinates, for k = 1, 2, 3."""
    rho = math.sqrt(x * x + y * y)
    if k == 1:
        return ka / (y * y) + kb * x / (y * y * rho)
    if k == 2:
        return (ka - kb) / (4.0 * x * x) + (ka + kb) / (4.0 * y * y)
    if k == 3:
        return (ka * (x * x + y * y) ** 2 + kb * (x * x - 3.0 * y * y) * x * rho) / (
            (3.0 * x * x - y * y) ** 2 * y * y
        )
    raise ValueError("Cartesian forms are only tabulated for k = 1, 2, 3")


def _check_cartesian_forms(rng, n):
    worst, done = 0.0, 0
    while done < n:
        k = int(rng.integers(1, 4))
        ka, kb = rng.uniform(0.1, 2.0), rng.uniform(-2.0, 2.0)
        x, y = rng.choice([-1.0, 1.0], 2) * rng.uniform(0.3, 3.0, 2)
        phi = math.atan2(y, x)
        s = math.sin(k * phi)
        if abs(s) < 0.1:
            continue
        rho2 = x * x + y * y
        lhs = angular_barrier(k, ka, kb, phi) / rho2
        rhs = cartesian_angular_form(k, ka, kb, x, y)
        worst = max(worst, abs(lhs - rhs) / ((abs(ka) + abs(kb)) / (s * s * rho2)))
        done += 1
    return worst


def _check_rotation(rng, n):
    k = _rand_k(rng, n)
    ka, kb = rng.uniform(0.1, 2.0, n), rng.uniform(-2.0, 2.0, n)
    g, r = rng.uniform(0.5, 1.5, n), rng.uniform(0.3, 3.0, n)
    phi = _angles(rng, k, math.cos)
    worst = 0.0
    for kk, a, b, gg, rr, ph in zip(k, ka, kb, g, r, phi):
        shift = math.pi / (2.0 * float(kk))
        c = math.cos(float(kk) * ph)
        scale = (abs(a) + abs(b)) / (c * c)
        lhs = rotated_angular_barrier(kk, a, b, ph)
        rhs = angular_barrier(kk, a, b, ph - shift)
        worst = max(worst, abs(lhs - rhs) / scale)
        v_rot = eval_potential(RotatedAngularKepler(gg, kk, a, b), PhaseState(rr, ph, 0.0, 0.0, "polar"))
        v = eval_potential(AngularKepler(gg, kk, a, b), PhaseState(rr, ph - shift, 0.0, 0.0, "polar"))
        worst = max(worst, abs(v_rot - v) / (gg / rr + scale / (2.0 * rr * rr)))
    return worst


def parabolic_reduction_ranks(system, points):
    """Per-point booleans: {H, Ex, Im C}, {H, Ex, I3} and their union all have rank 3."""
    with_c, _ = ranks_at(["H", "Ex", "ImCxy"], system, points)
    with_i3, _ = ranks_at(["H", "Ex", "I3_12"], system, points)
    union, _ = ranks_at(["H", "Ex", "ImCxy", "I3_12"], system, points)
    return (with_c == 3) & (with_i3 == 3) & (union == 3)


def _check_parabolic(rng, n):
    ok = []
    for _ in range(n):
        system = LinearForceOscillator(1, 2, rng.uniform(0.5, 1.5), rng.uniform(0.1, 1.0), rng.uniform(-1.0, 1.0))
        ok.append(bool(parabolic_reduction_ranks(system, sample_states(system, 1, rng))[0]))
    return 1.0 - float(np.mean(ok))


def identity_suite(names=IDENTITIES, sample_count=1000, seed=0) -> list:
    """Evaluate each named identity at ``sample_count`` seeded random regular points.

    ``parabolic_reduction`` is a rank statement; its discrepancy is the
    fraction of (at most 100) points where the rank equality fails, and it
    passes when that fraction is at most 5 %.
    """
    if sample_count < 1:
        raise ValueError("sample_count must be at least 1")
    results = []
    for name in names:
        if name not in IDENTITIES:
            raise ValueError(f"unknown identity {name!r}")
        rng = np.random.default_rng([seed, IDENTITIES.index(name)])
        if name == "parabolic_reduction":
            n = min(sample_count, PARABOLIC_POINTS)
            bad = _check_parabolic(rng, n)
            results.append(IdentityResult(name, bad, n, 1.0 - RANK_FRACTION, bad <= 1.0 - RANK_FRACTION + 1e-12))
            continue
        check = {
            "ttw_trig": _check_ttw_trig,
            "ttw_potential": lambda r, n: _check_reduced_potential(r, n, kepler=False),
            "pw_potential": lambda r, n: _check_reduced_potential(r, n, kepler=True),
            "cartesian_forms": _check_cartesian_forms,
            "rotation": _check_rotation,
        }[name]
        worst = float(check(rng, sample_count))
        results.append(IdentityResult(name, worst, sample_count, IDENTITY_TOL, worst < IDENTITY_TOL))
    return results
