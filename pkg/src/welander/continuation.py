"""Pseudo-arclength continuation of equilibria and their bifurcation curves.

A small generic engine (secant predictor, Newton corrector on the bordered
system, finite-difference Jacobians) traces one-dimensional solution sets of
F(z) = 0. It drives three defining systems:

* equilibrium branches in mu at fixed eta:    z = (x, y, mu), F = f;
* Hopf curves in (mu, eta):                   z = (x, y, mu, eta), F = (f, tr J);
* fold curves in (mu, eta), bordered with a null vector:
                                              z = (x, y, v, mu, eta),
                                              F = (f, J v, |v|^2 - 1).

In the plane, tr J = 0 with det J > 0 characterizes Hopf points, so no
eigenvalue solver is needed. Bogdanov-Takens points are polished on the
4-unknown system {f, tr J, det J} = 0; the point N where the Hopf and fold
curves meet is located by polyline segment intersection.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, StepUnderflowError
from .model import (
    Equilibrium,
    ModelParams,
    State,
    exchange,
    exchange_deriv,
    find_equilibria,
    jacobian,
    rhs,
)

__all__ = [
    "BranchPoint",
    "EquilibriumBranch",
    "CurvePoint",
    "SpecialPoint",
    "ParamCurve",
    "continue_equilibria",
    "hopf_curve",
    "fold_curve",
    "snic_probe",
    "flag_snic",
    "intersect_curves",
    "bifurcation_diagram",
]

STEP_MIN = 1e-5
STEP_MAX = 1e-2
RESIDUAL_TOL = 1e-11
DEFAULT_WINDOW = {"mu": (1e-4, 1.0), "eta": (-0.9, 0.3)}


# ---------------------------------------------------------------------------
# domain types

@dataclass(frozen=True)
class BranchPoint:
    mu: float
    state: State
    stability: str
    det: float
    tr: float


@dataclass
class EquilibriumBranch:
    eta: float
    epsilon: float
    points: list[BranchPoint]
    folds: list[BranchPoint] = field(default_factory=list)
    hopfs: list[BranchPoint] = field(default_factory=list)


@dataclass(frozen=True)
class CurvePoint:
    mu: float
    eta: float
    tr: float
    det: float
    state: State
    snic: bool | None = None


@dataclass(frozen=True)
class SpecialPoint:
    kind: str  # "BT" | "N"
    mu: float
    eta: float


@dataclass
class ParamCurve:
    kind: str  # "H" | "S" | "T+" | "T-"
    points: list[CurvePoint]
    special_points: list[SpecialPoint] = field(default_factory=list)

    def mu_eta(self) -> np.ndarray:
        return np.array([(p.mu, p.eta) for p in self.points])


# ---------------------------------------------------------------------------
# generic engine

def _fd_jacobian(F, z, f0=None):
    z = np.asarray(z, dtype=float)
    f0 = np.asarray(F(z)) if f0 is None else f0
    n = z.size
    J = np.empty((f0.size, n))
    for i in range(n):
        h = 1e-7 * max(1.0, abs(z[i]))
        zp = z.copy(); zp[i] += h
        zm = z.copy(); zm[i] -= h
        J[:, i] = (np.asarray(F(zp)) - np.asarray(F(zm))) / (2.0 * h)
    return J


def _newton(F, z0, tol=RESIDUAL_TOL, max_iter=20):
    """Damped Newton; returns (z, converged, iterations)."""
    z = np.asarray(z0, dtype=float).copy()
    r = np.asarray(F(z))
    for it in range(1, max_iter + 1):
        if np.max(np.abs(r)) < tol:
            return z, True, it - 1
        J = _fd_jacobian(F, z, r)
        try:
            dz = np.linalg.solve(J, -r)
        except np.linalg.LinAlgError:
            return z, False, it
        lam = 1.0
        base = np.max(np.abs(r))
        while lam > 1e-4:
            z_try = z + lam * dz
            r_try = np.asarray(F(z_try))
            if np.max(np.abs(r_try)) < base or lam == 1.0:
                if np.max(np.abs(r_try)) < base or np.max(np.abs(r_try)) < 10 * tol:
                    z, r = z_try, r_try
                    break
            lam *= 0.5
        else:
            return z, False, it
    return z, np.max(np.abs(np.asarray(F(z)))) < tol, max_iter


def _corrector(F, z_pred, tangent, tol=RESIDUAL_TOL):
    def G(z):
        return np.concatenate([np.asarray(F(z)), [tangent @ (z - z_pred)]])

    return _newton(G, z_pred, tol)


def _nullspace_tangent(F, z):
    J = _fd_jacobian(F, z)
    _, _, vt = np.linalg.svd(J)
    t = vt[-1]
    return t / np.linalg.norm(t)


def _trace(F, z0, tangent0, stop, h0=1e-3, max_steps=4000):
    """Trace F(z)=0 from z0 along tangent0 until stop(z) or step underflow.

    Returns (points, reason); points[0] is the converged seed. reason is the
    stop label, "max-steps", or "step-underflow".
    """
    t0 = np.asarray(tangent0, float)
    t0 = t0 / np.linalg.norm(t0)
    z, ok, _ = _corrector(F, np.asarray(z0, float), t0)
    if not ok:
        raise ConvergenceError("continuation seed failed to converge")
    points = [z]
    tangent = t0
    h = h0
    reason = "max-steps"
    for _ in range(max_steps):
        z_pred = z + h * tangent
        z_new, ok, iters = _corrector(F, z_pred, tangent)
        if not ok or (len(points) > 1 and np.linalg.norm(z_new - z) > 5 * h):
            h *= 0.5
            if h < STEP_MIN:
                reason = "step-underflow"
                break
            continue
        points.append(z_new)
        tangent = (z_new - z) / np.linalg.norm(z_new - z)
        z = z_new
        label = stop(z_new)
        if label:
            reason = label
            break
        if iters <= 4:
            h = min(1.3 * h, STEP_MAX)
    return points, reason


def _bisect_on_curve(F, z_a, z_b, g, tol=1e-10, max_iter=80):
    """Locate g = 0 between two consecutive curve points, staying on F = 0."""
    ga = g(z_a)
    for _ in range(max_iter):
        if np.linalg.norm(z_b - z_a) < tol:
            break
        t = (z_b - z_a) / np.linalg.norm(z_b - z_a)
        z_m, ok, _ = _corrector(F, 0.5 * (z_a + z_b), t)
        if not ok:
            break
        if np.sign(g(z_m)) == np.sign(ga):
            z_a, ga = z_m, g(z_m)
        else:
            z_b = z_m
    return 0.5 * (z_a + z_b)


# ---------------------------------------------------------------------------
# defining systems

def _tr_det(params: ModelParams, state: State):
    J = jacobian(params, state)
    return float(np.trace(J)), float(np.linalg.det(J))


def _stability(tr, det):
    if det < 0:
        return "saddle"
    if tr < 0:
        return "stable"
    if tr > 0:
        return "unstable"
    return "degenerate"


def continue_equilibria(
    params: ModelParams, mu_range: tuple, h0: float = 1e-3, max_steps: int = 20000
) -> EquilibriumBranch:
    """Equilibrium branch over a mu interval at fixed eta, with markers.

    Pseudo-arclength continuation in (x, y, mu) from a converged equilibrium
    at the lower end of the range; folds are located where det J changes
    sign, Hopf markers where tr J changes sign with det J > 0, each by
    bisection along the branch.
    """
    mu_lo, mu_hi = mu_range
    p0 = params.replace(mu=mu_lo)
    eqs = find_equilibria(p0)
    if not eqs:
        raise ConvergenceError(f"no equilibrium at mu = {mu_lo} to seed the branch")
    seed = min(eqs, key=lambda e: e.state.rho)

    def F(z):
        return np.asarray(rhs(params.replace(mu=z[2]), State(z[0], z[1])))

    z0 = np.array([seed.state.x, seed.state.y, mu_lo])
    t0 = _nullspace_tangent(F, z0)
    if t0[2] < 0:
        t0 = -t0

    def stop(z):
        if not (mu_lo - 1e-9 <= z[2] <= mu_hi + 1e-9):
            return "window"
        return None

    zs, reason = _trace(F, z0, t0, stop, h0=h0, max_steps=max_steps)
    if reason == "step-underflow":
        raise StepUnderflowError(
            f"equilibrium continuation stalled near mu = {zs[-1][2]:.6g}", last_time=None
        )

    def point(z):
        st = State(z[0], z[1])
        tr, det = _tr_det(params.replace(mu=z[2]), st)
        return BranchPoint(float(z[2]), st, _stability(tr, det), det, tr)

    pts = [point(z) for z in zs]
    branch = EquilibriumBranch(params.eta, params.epsilon, pts)
    for a, b, za, zb in zip(pts[:-1], pts[1:], zs[:-1], zs[1:]):
        if a.det * b.det < 0:
            z = _bisect_on_curve(F, za, zb, lambda z: _tr_det(params.replace(mu=z[2]), State(z[0], z[1]))[1])
            branch.folds.append(point(z))
        if a.tr * b.tr < 0 and a.det > 0 and b.det > 0:
            z = _bisect_on_curve(F, za, zb, lambda z: _tr_det(params.replace(mu=z[2]), State(z[0], z[1]))[0])
            branch.hopfs.append(point(z))
    return branch


def _hopf_seed_grid(epsilon, window, kappa1, kappa2, n=4001):
    """Closed-form Hopf parametrization by u = rho - eta; feasible samples.

    At an equilibrium, tr J = -1 - 2K - rho K' with K, K' functions of u
    alone, so tr J = 0 gives eta(u) = -u - (1 + 2K)/K', and the equilibrium
    parametrization gives mu(u) = K (u + eta + 1/(1+K)).
    """
    base = ModelParams(mu=0.1, eta=0.0, epsilon=epsilon, kappa1=kappa1, kappa2=kappa2)
    u = np.linspace(-12 * epsilon, 12 * epsilon, n)
    K = np.asarray(exchange(base, u))
    Kp = np.asarray(exchange_deriv(base, u))
    with np.errstate(divide="ignore", invalid="ignore"):
        eta = -u - (1.0 + 2.0 * K) / Kp
    mu = K * (u + eta + 1.0 / (1.0 + K))
    y = mu / K
    det = K * (1.0 + K) + Kp * (y + K * (u + eta))
    good = (
        np.isfinite(eta)
        & (mu > window["mu"][0])
        & (mu < window["mu"][1])
        & (eta > window["eta"][0])
        & (eta < window["eta"][1])
        & (det > 0)
    )
    return u[good], eta[good], mu[good], K[good]


def hopf_curve(
    epsilon: float,
    kappa1: float = 0.1,
    kappa2: float = 1.0,
    window: dict = None,
    h0: float = 1e-3,
    max_steps: int = 6000,
) -> ParamCurve:
    """Two-parameter Hopf curve H in the (mu, eta)-plane at fixed epsilon.

    Continues {f = 0, tr J = 0} in (x, y, mu, eta); each accepted point is
    re-verified to have det J > 0. Each end terminates either at a
    Bogdanov-Takens point (det J -> 0, polished on the 4-unknown system and
    recorded as a special point) or at the window boundary.
    """
    window = window or DEFAULT_WINDOW

    def pars(z):
        return ModelParams(mu=z[2], eta=z[3], epsilon=epsilon, kappa1=kappa1, kappa2=kappa2)

    def F(z):
        p = pars(z)
        st = State(z[0], z[1])
        f = rhs(p, st)
        return np.array([f[0], f[1], np.trace(jacobian(p, st))])

    def det_of(z):
        return _tr_det(pars(z), State(z[0], z[1]))[1]

    us, etas, mus, Ks = _hopf_seed_grid(epsilon, window, kappa1, kappa2)
    if us.size == 0:
        raise ConvergenceError(f"no Hopf point exists in the window at epsilon = {epsilon}")
    i = int(np.argmax(mus))
    z0 = np.array([1.0 / (1.0 + Ks[i]), mus[i] / Ks[i], mus[i], etas[i]])

    def stop(z):
        if not window["mu"][0] <= z[2] <= window["mu"][1]:
            return "window"
        if not window["eta"][0] <= z[3] <= window["eta"][1]:
            return "window"
        if det_of(z) <= 0:
            return "BT"
        return None

    t0 = _nullspace_tangent(F, z0)
    halves = []
    specials = []
    for sgn in (1.0, -1.0):
        zs, reason = _trace(F, z0, sgn * t0, stop, h0=h0, max_steps=max_steps)
        if reason == "BT" and len(zs) >= 2:
            z_bt = _bisect_on_curve(F, zs[-2], zs[-1], det_of)
            z_bt = _polish_bt(z_bt, epsilon, kappa1, kappa2)
            zs[-1] = z_bt
            specials.append(SpecialPoint("BT", float(z_bt[2]), float(z_bt[3])))
        halves.append(zs)

    zs_all = list(reversed(halves[1][1:])) + halves[0]
    pts = []
    for z in zs_all:
        tr, det = _tr_det(pars(z), State(z[0], z[1]))
        pts.append(CurvePoint(float(z[2]), float(z[3]), tr, det, State(z[0], z[1])))
    return ParamCurve("H", pts, specials)


def _polish_bt(z, epsilon, kappa1, kappa2):
    def F(z):
        p = ModelParams(mu=z[2], eta=z[3], epsilon=epsilon, kappa1=kappa1, kappa2=kappa2)
        st = State(z[0], z[1])
        f = rhs(p, st)
        J = jacobian(p, st)
        return np.array([f[0], f[1], np.trace(J), np.linalg.det(J)])

    z_bt, ok, _ = _newton(F, z, tol=1e-12)
    return z_bt if ok else z


def _fold_seed_grid(epsilon, window, kappa1, kappa2, n=4001):
    """Closed-form fold parametrization: det J = 0 gives
    eta(u) = -u - K/K' - 1/(1+K)^2 at an equilibrium."""
    base = ModelParams(mu=0.1, eta=0.0, epsilon=epsilon, kappa1=kappa1, kappa2=kappa2)
    u = np.linspace(-12 * epsilon, 12 * epsilon, n)
    K = np.asarray(exchange(base, u))
    Kp = np.asarray(exchange_deriv(base, u))
    with np.errstate(divide="ignore", invalid="ignore"):
        eta = -u - K / Kp - 1.0 / (1.0 + K) ** 2
    mu = K * (u + eta + 1.0 / (1.0 + K))
    good = (
        np.isfinite(eta)
        & (mu > window["mu"][0])
        & (mu < window["mu"][1])
        & (eta > window["eta"][0])
        & (eta < window["eta"][1])
    )
    return u[good], eta[good], mu[good], K[good]


def fold_curve(
    epsilon: float,
    kappa1: float = 0.1,
    kappa2: float = 1.0,
    window: dict = None,
    h0: float = 1e-3,
    max_steps: int = 6000,
) -> ParamCurve:
    """Two-parameter saddle-node curve S in the (mu, eta)-plane.

    Continues the bordered system {f = 0, J v = 0, |v|^2 = 1} in
    (x, y, v, mu, eta). A Bogdanov-Takens special point is recorded where
    tr J changes sign along the curve. SNIC tagging of sub-segments is done
    separately by flag_snic / snic_probe.
    """
    window = window or DEFAULT_WINDOW

    def pars(z):
        return ModelParams(mu=z[4], eta=z[5], epsilon=epsilon, kappa1=kappa1, kappa2=kappa2)

    def F(z):
        p = pars(z)
        st = State(z[0], z[1])
        f = rhs(p, st)
        J = jacobian(p, st)
        Jv = J @ z[2:4]
        return np.array([f[0], f[1], Jv[0], Jv[1], z[2] ** 2 + z[3] ** 2 - 1.0])

    def tr_of(z):
        return _tr_det(pars(z), State(z[0], z[1]))[0]

    us, etas, mus, Ks = _fold_seed_grid(epsilon, window, kappa1, kappa2)
    if us.size == 0:
        raise ConvergenceError(f"no fold point exists in the window at epsilon = {epsilon}")
    i = us.size // 2
    p_seed = ModelParams(mu=mus[i], eta=etas[i], epsilon=epsilon, kappa1=kappa1, kappa2=kappa2)
    st_seed = State(1.0 / (1.0 + Ks[i]), mus[i] / Ks[i])
    J = jacobian(p_seed, st_seed)
    _, _, vt = np.linalg.svd(J)
    v = vt[-1]
    z0 = np.array([st_seed.x, st_seed.y, v[0], v[1], mus[i], etas[i]])

    def stop(z):
        if not window["mu"][0] <= z[4] <= window["mu"][1]:
            return "window"
        if not window["eta"][0] <= z[5] <= window["eta"][1]:
            return "window"
        return None

    t0 = _nullspace_tangent(F, z0)
    halves = []
    for sgn in (1.0, -1.0):
        zs, _ = _trace(F, z0, sgn * t0, stop, h0=h0, max_steps=max_steps)
        halves.append(zs)
    zs_all = list(reversed(halves[1][1:])) + halves[0]

    specials = []
    for za, zb in zip(zs_all[:-1], zs_all[1:]):
        if tr_of(za) * tr_of(zb) < 0:
            z_bt = _bisect_on_curve(F, za, zb, tr_of)
            z4 = _polish_bt(np.array([z_bt[0], z_bt[1], z_bt[4], z_bt[5]]), epsilon, kappa1, kappa2)
            specials.append(SpecialPoint("BT", float(z4[2]), float(z4[3])))

    pts = []
    for z in zs_all:
        tr, det = _tr_det(pars(z), State(z[0], z[1]))
        pts.append(CurvePoint(float(z[4]), float(z[5]), tr, det, State(z[0], z[1])))
    return ParamCurve("S", pts, specials)


# ---------------------------------------------------------------------------
# codim-2 and SNIC classification

def intersect_curves(a: ParamCurve, b: ParamCurve) -> list[tuple]:
    """(mu, eta) intersection points of two polylines, by segment pairs."""
    A = a.mu_eta()
    B = b.mu_eta()
    out = []
    for p0, p1 in zip(A[:-1], A[1:]):
        d1 = p1 - p0
        for q0, q1 in zip(B[:-1], B[1:]):
            d2 = q1 - q0
            M = np.column_stack([d1, -d2])
            if abs(np.linalg.det(M)) < 1e-14:
                continue
            st = np.linalg.solve(M, q0 - p0)
            if -1e-9 <= st[0] <= 1 + 1e-9 and -1e-9 <= st[1] <= 1 + 1e-9:
                out.append(tuple(p0 + st[0] * d1))
    return out


def snic_probe(
    params: ModelParams,
    fold_state: State,
    offset: float = 1e-4,
    reference_period: float = 3.0,
    proximity: float = 1e-2,
    max_time: float = 5000.0,
) -> str:
    """Classify a converged fold point as "SNIC", "fold", or "inconclusive".

    Perturbs mu by the given offset toward the side where the local
    equilibrium pair has vanished and simulates. The fold is a SNIC when a
    periodic attractor appears that passes close to the vanished saddle-node
    location and whose period far exceeds a mid-region orbit period.
    """
    from .dynamics import EquilibriumAttractor, find_attractor

    side = None
    for s in (offset, -offset):
        eqs = find_equilibria(params.replace(mu=params.mu + s))
        near = [
            e
            for e in eqs
            if np.hypot(e.state.x - fold_state.x, e.state.y - fold_state.y) < 0.05
        ]
        if not near:
            side = s
            break
    if side is None:
        return "inconclusive"
    p = params.replace(mu=params.mu + side)
    try:
        att = find_attractor(
            p, initial=fold_state.as_array() + 1e-3, max_time=max_time
        )
    except ConvergenceError:
        return "inconclusive"
    if isinstance(att, EquilibriumAttractor):
        return "fold"
    dist = np.min(np.hypot(att.states[:, 0] - fold_state.x, att.states[:, 1] - fold_state.y))
    if att.period > 10.0 * reference_period and dist < proximity:
        return "SNIC"
    return "fold"


def flag_snic(curve: ParamCurve, epsilon: float, every: int = 25, **probe_kwargs) -> ParamCurve:
    """Probe every k-th fold point and return the curve with snic tags set."""
    tags: list[bool | None] = [None] * len(curve.points)
    for i in range(0, len(curve.points), every):
        p = curve.points[i]
        params = ModelParams(mu=p.mu, eta=p.eta, epsilon=epsilon)
        tags[i] = snic_probe(params, p.state, **probe_kwargs) == "SNIC"
    pts = [
        CurvePoint(p.mu, p.eta, p.tr, p.det, p.state, snic=t)
        for p, t in zip(curve.points, tags)
    ]
    return ParamCurve(curve.kind, pts, curve.special_points)


def bifurcation_diagram(epsilon: float, window: dict = None, probe_snic: bool = False) -> dict:
    """Hopf and fold curves with their BT and N special points.

    Returns {"H": ParamCurve, "S": ParamCurve, "N": list of (mu, eta)}.
    """
    H = hopf_curve(epsilon, window=window)
    S = fold_curve(epsilon, window=window)
    crossings = intersect_curves(H, S)
    bt = [(sp.mu, sp.eta) for sp in H.special_points + S.special_points]
    n_points = [
        c for c in crossings if all(np.hypot(c[0] - m, c[1] - e) > 1e-3 for m, e in bt)
    ]
    for c in n_points:
        sp = SpecialPoint("N", float(c[0]), float(c[1]))
        H.special_points.append(sp)
        S.special_points.append(sp)
    if probe_snic:
        S = flag_snic(S, epsilon)
    return {"H": H, "S": S, "N": n_points}
