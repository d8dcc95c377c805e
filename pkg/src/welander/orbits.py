"""Periodic orbits as boundary-value problems, anchoring, and tangencies.

Orbits are computed by collocation over normalized time [0, 1] with the
period as a free parameter, closed by periodicity conditions and a phase
condition. Two phase conditions are used:

* a local Poincare condition against a reference loop (generic solves);
* an anchored condition pinning rho(0) to one of the switching-zone
  boundaries rho+- (equivalently, a root of the boundary-curvature
  function), used for tangency work.

A tangency T+- of the orbit with a boundary line L+- is the fold of the
anchored family in mu. It is computed directly from the grazing extended
system: the boundary crossing at t = 0 is required to be tangential
(d rho/dt = 0) with mu freed as a second unknown parameter, which is the
double-root condition for the anchored phase equation. The fold can then be
continued in a second parameter, yielding the tangency curves.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_bvp
from scipy.optimize import brentq

from .continuation import CurvePoint, ParamCurve, _tr_det
from .dynamics import PeriodicAttractor, ZoneDurations, find_attractor, phase_durations
from .errors import ConvergenceError, MeshLimitError, NoCrossingError
from .model import ModelParams, State, switching_zone

__all__ = [
    "PeriodicOrbit",
    "AnchoredOrbit",
    "TangencyPoint",
    "solve_periodic_bvp",
    "anchor_phase",
    "detect_tangency",
    "tangency_curve",
]

BVP_TOL = 1e-9
MAX_NODES = 4000
DEFAULT_MESH = 200


@dataclass
class PeriodicOrbit:
    """A periodic solution over normalized time s in [0, 1]."""

    params: ModelParams
    period: float
    s: np.ndarray
    states: np.ndarray  # shape (2, n)
    sol: object  # C1 interpolant of s -> state
    rho_min: float
    rho_max: float
    durations: ZoneDurations
    closure: float  # max |u(0) - u(1)| componentwise

    def rho(self, s):
        u = self.sol(s)
        return u[1] - u[0]

    def amplitude(self) -> float:
        return self.rho_max - self.rho_min


@dataclass
class AnchoredOrbit:
    orbit: PeriodicOrbit
    anchor: str  # "L-" | "L+"
    rho_target: float


@dataclass
class TangencyPoint:
    kind: str  # "T+" | "T-"
    mu: float
    eta: float
    orbit: AnchoredOrbit


def _field(params: ModelParams):
    mu, eta, eps = params.mu, params.eta, params.epsilon
    k1, k2 = params.kappa1, params.kappa2

    def f(u):
        x, y = u[0], u[1]
        K = k1 + 0.5 * (k2 - k1) * (1.0 + np.tanh((y - x - eta) / eps))
        return np.vstack([1.0 - x - K * x, mu - K * y])

    return f


def _orbit_from_sol(params, sol, period) -> PeriodicOrbit:
    ss = np.linspace(0.0, 1.0, 2001)
    u = sol.sol(ss)
    rho = u[1] - u[0]

    def rho_at(t):
        v = sol.sol(t / period)
        return float(v[1] - v[0])

    from scipy.optimize import minimize_scalar

    def refine(i, sign):
        a, b = ss[max(i - 1, 0)], ss[min(i + 1, 2000)]
        res = minimize_scalar(
            lambda s: sign * (sol.sol(s)[1] - sol.sol(s)[0]),
            bounds=(a, b), method="bounded", options={"xatol": 1e-13},
        )
        return sign * res.fun

    rho_min = min(float(rho.min()), refine(int(np.argmin(rho)), 1.0))
    rho_max = max(float(rho.max()), refine(int(np.argmax(rho)), -1.0))
    zone = switching_zone(params)
    durations = phase_durations(rho_at, period, zone)
    closure = float(np.max(np.abs(sol.sol(0.0) - sol.sol(1.0))))
    return PeriodicOrbit(
        params, float(period), sol.x, sol.y, sol.sol, rho_min, rho_max, durations, closure
    )


def _guess_arrays(guess):
    if isinstance(guess, PeriodicAttractor):
        return guess.times, guess.states, guess.period
    if isinstance(guess, PeriodicOrbit):
        return guess.s * guess.period, guess.states.T, guess.period
    times, states, period = guess
    return np.asarray(times), np.asarray(states), float(period)


def _interp_guess(times, states, period, n_mesh):
    s_in = np.asarray(times) / period
    s = np.linspace(0.0, 1.0, n_mesh + 1)
    y = np.vstack([np.interp(s, s_in, states[:, k]) for k in range(2)])
    y[:, -1] = y[:, 0]
    return s, y


def _solve(params, fun_bc, s, y, p0, tol, max_nodes):
    f = _field(params)

    def fun(s_, u, p):
        return p[0] * f(u)

    sol = solve_bvp(fun, fun_bc, s, y, p=p0, tol=tol, max_nodes=max_nodes, bc_tol=1e-11)
    if sol.status == 1:
        raise MeshLimitError(
            f"collocation mesh exceeded {max_nodes} nodes at "
            f"(mu, eta, eps) = ({params.mu}, {params.eta}, {params.epsilon})",
            params=params,
        )
    if not sol.success:
        raise ConvergenceError(f"periodic BVP failed to converge: {sol.message}")
    return sol


def solve_periodic_bvp(
    params: ModelParams,
    guess,
    n_mesh: int = DEFAULT_MESH,
    tol: float = BVP_TOL,
    max_nodes: int = MAX_NODES,
) -> PeriodicOrbit:
    """Converge a periodic orbit by collocation from a sampled loop guess.

    The guess is a PeriodicAttractor, a PeriodicOrbit, or a tuple
    (times, states, period) winding once around the loop. The period is a
    free parameter; the phase is fixed by a local Poincare condition
    through the guess's initial point.
    """
    times, states, period = _guess_arrays(guess)
    s, y = _interp_guess(times, states, period, n_mesh)
    u_ref = y[:, 0].copy()
    f_ref = _field(params)(u_ref.reshape(2, 1))[:, 0]

    def bc(ua, ub, p):
        return np.array([ub[0] - ua[0], ub[1] - ua[1], f_ref @ (ua - u_ref)])

    sol = _solve(params, bc, s, y, [period], tol, max_nodes)
    return _orbit_from_sol(params, sol, sol.p[0])


def _anchor_targets(params):
    zone = switching_zone(params)
    return {"L-": zone.rho_minus, "L+": zone.rho_plus}


def _rotate_guess(orbit: PeriodicOrbit, s_star: float, n_mesh: int):
    s = np.linspace(0.0, 1.0, n_mesh + 1)
    y = orbit.sol((s + s_star) % 1.0)
    y[:, -1] = y[:, 0]
    return s, y


def _increasing_crossing(orbit: PeriodicOrbit, target: float) -> float:
    """Normalized time of the rho-increasing crossing of the target level."""
    ss = np.linspace(0.0, 1.0, 4001)
    rho = orbit.rho(ss) - target
    idx = np.nonzero((rho[:-1] < 0) & (rho[1:] >= 0))[0]
    if idx.size == 0:
        raise NoCrossingError(
            f"orbit rho-range [{orbit.rho_min:.6g}, {orbit.rho_max:.6g}] "
            f"does not cross the boundary at rho = {target:.6g}"
        )
    i = idx[0]
    return brentq(lambda s: orbit.rho(s) - target, ss[i], ss[i + 1], xtol=1e-14)


def anchor_phase(
    orbit: PeriodicOrbit,
    which: str,
    n_mesh: int = DEFAULT_MESH,
    tol: float = BVP_TOL,
    max_nodes: int = MAX_NODES,
) -> AnchoredOrbit:
    """Rotate the orbit so u(0) lies on the chosen boundary and re-converge.

    which is "L-" or "L+". The anchored phase condition rho(0) = rho+- is
    the (scaled) defining root of the boundary-curvature function; of the
    two crossings, the one with rho increasing at t = 0 is selected.
    """
    params = orbit.params
    target = _anchor_targets(params)[which]
    if not orbit.rho_min < target < orbit.rho_max:
        raise NoCrossingError(
            f"orbit rho-range [{orbit.rho_min:.6g}, {orbit.rho_max:.6g}] "
            f"does not straddle {which} at rho = {target:.6g}"
        )
    s_star = _increasing_crossing(orbit, target)
    s, y = _rotate_guess(orbit, s_star, n_mesh)

    def bc(ua, ub, p):
        return np.array([ub[0] - ua[0], ub[1] - ua[1], (ua[1] - ua[0]) - target])

    sol = _solve(params, bc, s, y, [orbit.period], tol, max_nodes)
    return AnchoredOrbit(_orbit_from_sol(params, sol, sol.p[0]), which, target)


_KIND_TO_ANCHOR = {"T+": "L+", "T-": "L-"}


def _grazing_solve(
    params: ModelParams,
    anchored: AnchoredOrbit,
    tol: float = BVP_TOL,
    max_nodes: int = MAX_NODES,
):
    """Solve the grazing extended system: anchored orbit with a tangential
    boundary contact at t = 0, mu freed. Returns (sol, mu)."""
    target = anchored.rho_target
    eta, eps = params.eta, params.epsilon
    k1, k2 = params.kappa1, params.kappa2

    def fun(s_, u, p):
        x, y = u[0], u[1]
        K = k1 + 0.5 * (k2 - k1) * (1.0 + np.tanh((y - x - eta) / eps))
        return p[0] * np.vstack([1.0 - x - K * x, p[1] - K * y])

    def bc(ua, ub, p):
        x, y = ua
        K = k1 + 0.5 * (k2 - k1) * (1.0 + np.tanh((y - x - eta) / eps))
        fx = 1.0 - x - K * x
        fy = p[1] - K * y
        return np.array([ub[0] - ua[0], ub[1] - ua[1], (y - x) - target, fy - fx])

    # resample the guess onto a moderate uniform mesh: the converged orbit's
    # adapted mesh is near the node cap and leaves no headroom for refinement
    orb = anchored.orbit
    s0 = np.linspace(0.0, 1.0, 801)
    y0 = orb.sol(s0)
    y0[:, -1] = y0[:, 0]
    sol = solve_bvp(
        fun, bc, s0, y0, p=[orb.period, params.mu],
        tol=tol, max_nodes=max_nodes, bc_tol=1e-11,
    )
    if sol.status == 1:
        raise MeshLimitError(
            f"grazing BVP mesh exceeded {max_nodes} nodes near "
            f"(mu, eta, eps) = ({params.mu}, {params.eta}, {params.epsilon})",
            params=params,
        )
    if not sol.success:
        raise ConvergenceError(f"grazing BVP failed: {sol.message}")
    return sol, float(sol.p[1])


def _anchored_at(params: ModelParams, which: str, n_mesh=DEFAULT_MESH) -> AnchoredOrbit:
    att = find_attractor(params)
    if not isinstance(att, PeriodicAttractor):
        raise NoCrossingError(f"no periodic attractor at mu = {params.mu}, eta = {params.eta}")
    orbit = solve_periodic_bvp(params, att, n_mesh=n_mesh)
    return anchor_phase(orbit, which, n_mesh=n_mesh)


def detect_tangency(params: ModelParams, kind: str, mu_step: float = 0.02) -> TangencyPoint:
    """Tangency of the periodic orbit family with a boundary line.

    kind is "T+" (contact with L+) or "T-" (contact with L-); params.mu
    seeds the family at fixed eta. The fold of the anchored family in mu is
    solved directly from the grazing extended system; if the solve doesn't
    converge from the seed orbit, nearby seeds at mu +- k*mu_step are tried.
    """
    which = _KIND_TO_ANCHOR[kind]
    last_err = None
    for k in range(6):
        for sgn in (1, -1) if k else (1,):
            mu_try = params.mu + sgn * k * mu_step
            if mu_try <= 0:
                continue
            p_try = params.replace(mu=mu_try)
            try:
                anchored = _anchored_at(p_try, which)
                sol, mu_star = _grazing_solve(p_try, anchored)
            except (ConvergenceError, NoCrossingError, MeshLimitError) as exc:
                last_err = exc
                continue
            p_star = params.replace(mu=mu_star)
            orbit = _orbit_from_sol(p_star, sol, sol.p[0])
            if orbit.amplitude() < 1e-3:
                # Newton collapsed onto the trivial branch: an equilibrium
                # sitting exactly on the boundary satisfies the system too
                last_err = ConvergenceError("grazing solve collapsed to an equilibrium")
                continue
            target = _anchor_targets(p_star)[which]
            return TangencyPoint(
                kind, mu_star, params.eta, AnchoredOrbit(orbit, which, target)
            )
    raise ConvergenceError(f"no {kind} tangency found near mu = {params.mu}") from last_err


def tangency_curve(
    kind: str,
    epsilon: float,
    seed: TangencyPoint = None,
    eta_window: tuple = (-0.7, 0.0),
    mu_window: tuple = (1e-3, 1.0),
    h0: float = 5e-3,
    h_max: float = 2e-2,
    h_min: float = 1e-7,
    max_steps: int = 400,
    amplitude_floor: float = 1e-4,
    seed_params: ModelParams = None,
) -> ParamCurve:
    """Two-parameter continuation of a tangency in the (mu, eta)-plane.

    Steps the grazing extended system with local parametrization: at each
    step the parameter that moved most is stepped and held fixed while the
    other is freed as an unknown. Each direction terminates when the orbit
    amplitude drops below amplitude_floor (the curve meets the Hopf curve),
    the window is left, or the step underflows.
    """
    if seed is None:
        if seed_params is None:
            seed_params = ModelParams(mu=0.22, eta=-0.17, epsilon=epsilon)
        seed = detect_tangency(seed_params, kind)

    which = _KIND_TO_ANCHOR[kind]
    eps = epsilon
    k1 = seed.orbit.orbit.params.kappa1
    k2 = seed.orbit.orbit.params.kappa2

    def solve_at(mu_fix, eta_fix, free, guess_sol, guess_p):
        """One grazing solve with `free` in {"mu","eta"} as the unknown."""
        def make_par(p):
            mu = p[1] if free == "mu" else mu_fix
            eta = p[1] if free == "eta" else eta_fix
            return mu, eta

        def fun(s_, u, p):
            mu, eta = make_par(p)
            x, y = u[0], u[1]
            K = k1 + 0.5 * (k2 - k1) * (1.0 + np.tanh((y - x - eta) / eps))
            return p[0] * np.vstack([1.0 - x - K * x, mu - K * y])

        def bc(ua, ub, p):
            mu, eta = make_par(p)
            par = ModelParams(mu=mu, eta=eta, epsilon=eps, kappa1=k1, kappa2=k2)
            target = _anchor_targets(par)[which]
            x, y = ua
            K = k1 + 0.5 * (k2 - k1) * (1.0 + np.tanh((y - x - eta) / eps))
            fx = 1.0 - x - K * x
            fy = mu - K * y
            return np.array([ub[0] - ua[0], ub[1] - ua[1], (y - x) - target, fy - fx])

        sol = solve_bvp(
            fun, bc, guess_sol.x, guess_sol.y, p=guess_p,
            tol=BVP_TOL, max_nodes=MAX_NODES, bc_tol=1e-11,
        )
        if not sol.success:
            raise ConvergenceError(sol.message)
        mu, eta = make_par(sol.p)
        return sol, float(mu), float(eta)

    def curve_point(sol, mu, eta):
        par = ModelParams(mu=mu, eta=eta, epsilon=eps, kappa1=k1, kappa2=k2)
        orbit = _orbit_from_sol(par, sol, sol.p[0])
        st = State(*sol.sol(0.0))
        return CurvePoint(mu, eta, np.nan, np.nan, st), orbit

    class _SolShim:
        def __init__(self, x, y):
            self.x, self.y = x, y

    s_seed = np.linspace(0.0, 1.0, 801)
    y_seed = seed.orbit.orbit.sol(s_seed)
    y_seed[:, -1] = y_seed[:, 0]
    seed_sol = _SolShim(s_seed, y_seed)
    halves = []
    for direction in (1.0, -1.0):
        pts = []
        mu_prev, eta_prev = seed.mu, seed.eta
        sol_prev = seed_sol
        period_prev = seed.orbit.orbit.period
        d_mu, d_eta = 0.0, direction  # first step: move in eta
        h = h0
        while len(pts) < max_steps:
            norm = np.hypot(d_mu, d_eta)
            mu_pred = mu_prev + h * d_mu / norm
            eta_pred = eta_prev + h * d_eta / norm
            free = "mu" if abs(d_eta) >= abs(d_mu) else "eta"
            guess_p = [period_prev, mu_pred if free == "mu" else eta_pred]
            try:
                sol, mu, eta = solve_at(mu_pred, eta_pred, free, sol_prev, guess_p)
            except (ConvergenceError, MeshLimitError):
                h *= 0.5
                if h < h_min:
                    break
                continue
            pt, orbit = curve_point(sol, mu, eta)
            if orbit.amplitude() < amplitude_floor:
                # the family has shrunk to the Hopf point: terminus
                break
            pts.append(pt)
            d_mu, d_eta = mu - mu_prev, eta - eta_prev
            # resample onto a uniform mesh so the next solve has refinement headroom
            s_r = np.linspace(0.0, 1.0, 801)
            y_r = sol.sol(s_r)
            y_r[:, -1] = y_r[:, 0]
            mu_prev, eta_prev, sol_prev, period_prev = mu, eta, _SolShim(s_r, y_r), sol.p[0]
            if not (mu_window[0] <= mu <= mu_window[1] and eta_window[0] <= eta <= eta_window[1]):
                break
            h = min(1.5 * h, h_max)
        halves.append(pts)

    seed_pt = CurvePoint(
        seed.mu, seed.eta, np.nan, np.nan, State(*seed.orbit.orbit.sol(0.0))
    )
    points = list(reversed(halves[1])) + [seed_pt] + halves[0]
    return ParamCurve(kind, points, [])
