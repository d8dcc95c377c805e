"""Time integration of the smooth model and attractor detection.

Simulations use an adaptive high-order Runge-Kutta scheme with dense output;
all switching-zone boundary crossings are located by root-finding on the dense
output and recorded as trajectory events. Attractors are detected from long
integrations via a Poincare section on the switching threshold.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq, minimize_scalar

from .errors import ConvergenceError, NonSmoothError, StepUnderflowError
from .model import ModelParams, State, SwitchingZone, find_equilibria, rhs, switching_zone

__all__ = [
    "Trajectory",
    "TrajectoryEvent",
    "EquilibriumAttractor",
    "PeriodicAttractor",
    "ZoneDurations",
    "simulate",
    "find_attractor",
    "phase_durations",
]

DEFAULT_REL_TOL = 1e-9
DEFAULT_ABS_TOL = 1e-11


@dataclass(frozen=True)
class TrajectoryEvent:
    time: float
    kind: str  # cross_rho_minus_up | cross_rho_minus_down | cross_rho_plus_up | cross_rho_plus_down | cross_sigma | sliding_start | sliding_end
    state: State


@dataclass
class Trajectory:
    """Time-stamped state path with zone-crossing event annotations."""

    params: ModelParams
    times: np.ndarray
    states: np.ndarray  # shape (n, 2)
    events: list[TrajectoryEvent] = field(default_factory=list)
    sol: object = None  # dense-output interpolant, if available

    def rho(self) -> np.ndarray:
        return self.states[:, 1] - self.states[:, 0]

    def kappa(self) -> np.ndarray:
        from .model import exchange

        return np.asarray(exchange(self.params, self.rho()))

    def zone_tags(self, zone: SwitchingZone) -> list[str]:
        from .model import classify_state

        return [classify_state(zone, self.params, s) for s in self.states]

    def at(self, t):
        """Dense-output state at time(s) t; requires the interpolant."""
        if self.sol is None:
            raise ValueError("trajectory carries no dense output")
        return self.sol(t)


@dataclass(frozen=True)
class EquilibriumAttractor:
    state: State


@dataclass(frozen=True)
class ZoneDurations:
    """Per-period time spent in each zone, plus the individual S transits."""

    R1: float
    S: float
    R2: float
    transits: tuple  # durations of maximal S intervals, period-wrapped


@dataclass
class PeriodicAttractor:
    period: float
    rho_min: float
    rho_max: float
    times: np.ndarray  # one period, starting on the section {rho = eta, increasing}
    states: np.ndarray
    durations: ZoneDurations


def _field(params: ModelParams):
    mu, eta, eps = params.mu, params.eta, params.epsilon
    k1, k2 = params.kappa1, params.kappa2

    def f(t, u):
        x, y = u
        K = k1 + 0.5 * (k2 - k1) * (1.0 + np.tanh((y - x - eta) / eps))
        return (1.0 - x - K * x, mu - K * y)

    return f


def _check_tols(rel_tol, abs_tol):
    for name, tol in (("rel_tol", rel_tol), ("abs_tol", abs_tol)):
        if not 0.0 < tol <= 1e-2:
            raise ValueError(f"{name} must lie in (0, 1e-2], got {tol}")


def _initial_array(initial) -> np.ndarray:
    if isinstance(initial, State):
        return initial.as_array()
    return np.asarray(initial, dtype=float)


def simulate(
    params: ModelParams,
    initial,
    t_end: float,
    rel_tol: float = DEFAULT_REL_TOL,
    abs_tol: float = DEFAULT_ABS_TOL,
) -> Trajectory:
    """Integrate the smooth field over [0, t_end] with zone-crossing events.

    Requires epsilon > 0. Crossings of the switching-zone boundaries rho+-
    are located on the dense output and annotated with their direction.
    """
    if params.epsilon == 0.0:
        raise NonSmoothError("simulate requires epsilon > 0; use filippov_simulate")
    _check_tols(rel_tol, abs_tol)
    zone = switching_zone(params)
    f = _field(params)

    def ev_minus(t, u):
        return (u[1] - u[0]) - zone.rho_minus

    def ev_plus(t, u):
        return (u[1] - u[0]) - zone.rho_plus

    sol = solve_ivp(
        f,
        (0.0, t_end),
        _initial_array(initial),
        method="DOP853",
        rtol=rel_tol,
        atol=abs_tol,
        dense_output=True,
        events=[ev_minus, ev_plus],
    )
    if sol.status == -1:
        raise StepUnderflowError(
            f"integrator failed at t = {sol.t[-1]:.6g}: {sol.message}",
            last_time=float(sol.t[-1]),
        )
    events = []
    for which, kind in ((0, "cross_rho_minus"), (1, "cross_rho_plus")):
        for t_ev, u_ev in zip(sol.t_events[which], sol.y_events[which]):
            fx, fy = f(t_ev, u_ev)
            direction = "up" if fy - fx > 0 else "down"
            events.append(
                TrajectoryEvent(float(t_ev), f"{kind}_{direction}", State(*u_ev))
            )
    events.sort(key=lambda e: e.time)
    return Trajectory(params, sol.t, sol.y.T, events, sol=sol.sol)


def phase_durations(rho_fun, period: float, zone: SwitchingZone, n_grid: int = 4000) -> ZoneDurations:
    """Zone durations of a rho-periodic signal over one period.

    rho_fun is rho as a callable of time on [0, period]. Boundary crossings
    are bracketed on a uniform grid and refined by bisection; the maximal S
    intervals are merged across the period wrap.
    """
    ts = np.linspace(0.0, period, n_grid)
    rho = np.array([rho_fun(t) for t in ts])
    cuts = [0.0]
    for level in (zone.rho_minus, zone.rho_plus):
        g = rho - level
        idx = np.nonzero(np.sign(g[:-1]) * np.sign(g[1:]) < 0)[0]
        for i in idx:
            cuts.append(brentq(lambda t: rho_fun(t) - level, ts[i], ts[i + 1], xtol=1e-12))
    cuts = sorted(set(cuts)) + [period]

    def tag(t):
        r = rho_fun(t)
        if r < zone.rho_minus:
            return "R1"
        if r > zone.rho_plus:
            return "R2"
        return "S"

    totals = {"R1": 0.0, "S": 0.0, "R2": 0.0}
    intervals = []
    for a, b in zip(cuts[:-1], cuts[1:]):
        z = tag(0.5 * (a + b))
        totals[z] += b - a
        intervals.append((a, b, z))
    transits = [b - a for a, b, z in intervals if z == "S"]
    # merge the wrap-around S interval split by t = 0
    if len(intervals) > 1 and intervals[0][2] == "S" and intervals[-1][2] == "S":
        first = transits.pop(0)
        transits[-1] += first
    return ZoneDurations(totals["R1"], totals["S"], totals["R2"], tuple(transits))


def find_attractor(
    params: ModelParams,
    initial=None,
    settle_time: float = 500.0,
    max_time: float = 5000.0,
    rel_tol: float = DEFAULT_REL_TOL,
    abs_tol: float = DEFAULT_ABS_TOL,
    velocity_tol: float = 1e-9,
    spread_tol: float = 1e-6,
    n_loop: int = 2001,
):
    """Long-run attractor of the smooth field: equilibrium or periodic orbit.

    Integrates past settle_time, then collects crossings of a Poincare
    section {rho = rho*, rho increasing}, where rho* is the density of the
    most unstable equilibrium (every oscillation encircles an equilibrium
    inside the switching zone, but small cycles near a Hopf point need not
    reach rho = eta itself). A periodic attractor is accepted once
    successive section periods agree to the relative spread tolerance; an
    equilibrium once the state velocity norm drops below velocity_tol.
    """
    if params.epsilon == 0.0:
        raise NonSmoothError("find_attractor requires epsilon > 0")
    _check_tols(rel_tol, abs_tol)
    f = _field(params)
    section_level = params.eta
    try:
        eqs = find_equilibria(params)
    except Exception:
        eqs = []
    if eqs:
        worst = max(eqs, key=lambda e: max(np.real(e.eigenvalues)))
        section_level = worst.state.rho
    if initial is not None:
        u = _initial_array(initial)
    else:
        if not eqs:
            raise ConvergenceError("no equilibrium found to seed the attractor search")
        u = worst.state.as_array() + 1e-3

    def speed(u):
        return float(np.hypot(*f(0.0, u)))

    t = 0.0
    while t < settle_time:
        sol = solve_ivp(
            f, (t, min(t + 100.0, settle_time)), u, method="DOP853", rtol=rel_tol, atol=abs_tol
        )
        t, u = float(sol.t[-1]), sol.y[:, -1]
        if speed(u) < velocity_tol:
            return EquilibriumAttractor(State(*u))

    def section(tt, uu):
        return (uu[1] - uu[0]) - section_level

    section.direction = 1.0
    section.terminal = True

    hits_t, hits_u = [], []
    while t < max_time and len(hits_t) < 50:
        # hop clear of the section before re-arming the terminal event
        sol = solve_ivp(f, (t, t + 0.01), u, method="DOP853", rtol=rel_tol, atol=abs_tol)
        t, u = float(sol.t[-1]), sol.y[:, -1]
        sol = solve_ivp(
            f, (t, max_time), u, method="DOP853", rtol=rel_tol, atol=abs_tol, events=section
        )
        if sol.status != 1:
            t, u = float(sol.t[-1]), sol.y[:, -1]
            break
        t = float(sol.t_events[0][0])
        u = sol.y_events[0][0]
        hits_t.append(t)
        hits_u.append(u.copy())
        if speed(u) < velocity_tol:
            return EquilibriumAttractor(State(*u))
        if len(hits_t) >= 4:
            periods = np.diff(hits_t[-4:])
            if np.ptp(periods) / periods[-1] < spread_tol:
                return _sample_periodic(params, f, u, float(periods[-1]), rel_tol, abs_tol, n_loop)
    if speed(u) < velocity_tol:
        return EquilibriumAttractor(State(*u))
    raise ConvergenceError(
        f"no attractor detected by t = {max_time} at mu={params.mu}, eta={params.eta}"
    )


def _sample_periodic(params, f, u0, period, rel_tol, abs_tol, n_loop) -> PeriodicAttractor:
    sol = solve_ivp(
        f, (0.0, period), u0, method="DOP853", rtol=rel_tol, atol=abs_tol, dense_output=True
    )
    ts = np.linspace(0.0, period, n_loop)
    ys = sol.sol(ts)
    rho = ys[1] - ys[0]

    def rho_at(t):
        s = sol.sol(t)
        return s[1] - s[0]

    def refine(i, sign):
        a = ts[max(i - 1, 0)]
        b = ts[min(i + 1, n_loop - 1)]
        res = minimize_scalar(
            lambda t: sign * rho_at(t), bounds=(a, b), method="bounded",
            options={"xatol": 1e-12},
        )
        return sign * res.fun

    rho_min = min(float(rho.min()), refine(int(np.argmin(rho)), 1.0))
    rho_max = max(float(rho.max()), refine(int(np.argmax(rho)), -1.0))
    zone = switching_zone(params)
    durations = phase_durations(rho_at, period, zone)
    return PeriodicAttractor(period, rho_min, rho_max, ts, ys.T, durations)
