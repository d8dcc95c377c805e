"""Oscillation classes, parameter-plane scans, and the drifting-mu run.

An attractor is classified by where its rho-extrema fall relative to the
switching-zone boundaries rho+-:

    P_S: confined to the zone;           P_1: deep-decoupling phase only;
    P_2: deep-coupling phase only;       W:   both phases present.

Scans brute-force a (mu, eta) grid of such classifications and extract
class-boundary polylines by marching squares. The drift run integrates the
nonautonomous system with a slow linear ramp in mu and annotates where the
ramp crosses the frozen-parameter tangency values.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .dynamics import (
    DEFAULT_ABS_TOL,
    DEFAULT_REL_TOL,
    EquilibriumAttractor,
    Trajectory,
    TrajectoryEvent,
    ZoneDurations,
    find_attractor,
    phase_durations,
)
from .errors import ConvergenceError, StepUnderflowError, TooFewCyclesError
from .model import ModelParams, State, SwitchingZone, find_equilibria, switching_zone

__all__ = [
    "OscillationClass",
    "ScanResult",
    "DriftRun",
    "classify",
    "region_scan",
    "run_drift",
    "window_signature",
    "hopf_window",
    "bracket_cutoff",
]

GRAZING_TOL = 1e-6


@dataclass(frozen=True)
class OscillationClass:
    tag: str  # "P_S" | "P_1" | "P_2" | "W" | "EQUILIBRIUM"
    rho_min: float | None = None
    rho_max: float | None = None
    period: float | None = None
    durations: ZoneDurations | None = None
    grazing: bool = False


def _tag_from_extrema(rho_min, rho_max, zone: SwitchingZone, tol=GRAZING_TOL):
    deep_decoupling = rho_min < zone.rho_minus
    deep_coupling = rho_max > zone.rho_plus
    grazing = (
        abs(rho_min - zone.rho_minus) < tol or abs(rho_max - zone.rho_plus) < tol
    )
    tag = {
        (False, False): "P_S",
        (True, False): "P_1",
        (False, True): "P_2",
        (True, True): "W",
    }[(deep_decoupling, deep_coupling)]
    return tag, grazing


def classify(params: ModelParams, **attractor_kwargs) -> OscillationClass:
    """Oscillation class of the attractor at the given parameters."""
    att = find_attractor(params, **attractor_kwargs)
    if isinstance(att, EquilibriumAttractor):
        return OscillationClass("EQUILIBRIUM")
    zone = switching_zone(params)
    tag, grazing = _tag_from_extrema(att.rho_min, att.rho_max, zone)
    return OscillationClass(
        tag, att.rho_min, att.rho_max, att.period, att.durations, grazing
    )


def _maybe_oscillatory(params: ModelParams) -> bool:
    """Cheap pre-filter: a stable periodic attractor reached from a small
    perturbation of the most unstable equilibrium requires an unstable
    (non-saddle) equilibrium; nodes without one settle to an equilibrium."""
    try:
        eqs = find_equilibria(params)
    except Exception:
        return True
    return any(e.stability == "unstable" for e in eqs)


@dataclass
class ScanResult:
    mus: np.ndarray
    etas: np.ndarray
    epsilon: float
    tags: np.ndarray  # shape (n_eta, n_mu), dtype str
    rho_min: np.ndarray
    rho_max: np.ndarray

    def any_periodic(self) -> bool:
        return bool(np.isin(self.tags, ("P_S", "P_1", "P_2", "W")).any())

    def boundaries(self) -> dict:
        """Class-boundary polylines in (mu, eta), by marching squares."""
        from skimage import measure

        out = {}
        for tag in np.unique(self.tags):
            mask = (self.tags == tag).astype(float)
            lines = []
            for contour in measure.find_contours(mask, 0.5):
                mu = np.interp(contour[:, 1], np.arange(self.mus.size), self.mus)
                eta = np.interp(contour[:, 0], np.arange(self.etas.size), self.etas)
                lines.append(np.column_stack([mu, eta]))
            out[str(tag)] = lines
        return out


def region_scan(
    mu_range: tuple,
    eta_range: tuple,
    n_mu: int,
    n_eta: int,
    epsilon: float,
    quick: bool = True,
    stop_on_periodic: bool = False,
    **attractor_kwargs,
) -> ScanResult:
    """Classify every node of a (mu, eta) grid at fixed epsilon.

    Per-node failures are recorded as "UNKNOWN" and never abort the scan.
    With quick=True, nodes whose equilibria are all stable or saddles are
    tagged EQUILIBRIUM without integration. stop_on_periodic short-circuits
    the scan once any oscillatory node is found (existence queries).
    """
    if n_mu < 2 or n_eta < 2:
        raise ValueError("grid resolution must be at least 2 per axis")
    mus = np.linspace(*mu_range, n_mu)
    etas = np.linspace(*eta_range, n_eta)
    tags = np.full((n_eta, n_mu), "EQUILIBRIUM", dtype=object)
    rmin = np.full((n_eta, n_mu), np.nan)
    rmax = np.full((n_eta, n_mu), np.nan)
    done = False
    for i, eta in enumerate(etas):
        for j, mu in enumerate(mus):
            p = ModelParams(mu=float(mu), eta=float(eta), epsilon=epsilon)
            if quick and not _maybe_oscillatory(p):
                continue
            try:
                c = classify(p, **attractor_kwargs)
            except (ConvergenceError, StepUnderflowError):
                tags[i, j] = "UNKNOWN"
                continue
            tags[i, j] = c.tag
            if c.tag != "EQUILIBRIUM":
                rmin[i, j], rmax[i, j] = c.rho_min, c.rho_max
                if stop_on_periodic:
                    done = True
                    break
        if done:
            break
    return ScanResult(mus, etas, epsilon, tags, rmin, rmax)


# ---------------------------------------------------------------------------
# drift experiment

@dataclass
class DriftRun:
    mu_start: float
    mu_end: float
    rate: float
    trajectory: Trajectory
    transitions: list = field(default_factory=list)  # (kind, time)

    def mu(self, t):
        """The linear ramp mu(t) = (1 - r t) mu_start + r t mu_end."""
        rt = self.rate * np.asarray(t)
        return (1.0 - rt) * self.mu_start + rt * self.mu_end


def run_drift(
    params: ModelParams,
    mu_start: float,
    mu_end: float,
    rate: float,
    initial,
    tangency_mus: dict | None = None,
    rel_tol: float = DEFAULT_REL_TOL,
    abs_tol: float = DEFAULT_ABS_TOL,
) -> DriftRun:
    """Integrate the system with mu ramped linearly over t in [0, 1/r].

    params supplies eta, epsilon, kappa1, kappa2; mu is time-dependent.
    tangency_mus maps "T+"/"T-" to frozen-parameter tangency values; ramp
    crossings of those values are annotated as transitions. If omitted, no
    tangency annotations are made.
    """
    if rate <= 0:
        raise ValueError("drift rate must be positive")
    if mu_start == mu_end:
        raise ValueError("mu_start and mu_end must differ")
    eta, eps = params.eta, params.epsilon
    k1, k2 = params.kappa1, params.kappa2
    t_end = 1.0 / rate

    def mu_of(t):
        rt = rate * t
        return (1.0 - rt) * mu_start + rt * mu_end

    def f(t, u):
        x, y = u
        K = k1 + 0.5 * (k2 - k1) * (1.0 + np.tanh((y - x - eta) / eps))
        return (1.0 - x - K * x, mu_of(t) - K * y)

    zone = switching_zone(params)

    def ev_minus(t, u):
        return (u[1] - u[0]) - zone.rho_minus

    def ev_plus(t, u):
        return (u[1] - u[0]) - zone.rho_plus

    u0 = initial.as_array() if isinstance(initial, State) else np.asarray(initial, float)
    sol = solve_ivp(
        f, (0.0, t_end), u0, method="DOP853", rtol=rel_tol, atol=abs_tol,
        dense_output=True, events=[ev_minus, ev_plus],
    )
    if sol.status == -1:
        raise StepUnderflowError(
            f"drift integration failed at t = {sol.t[-1]:.6g}", last_time=float(sol.t[-1])
        )
    events = []
    for which, kind in ((0, "cross_rho_minus"), (1, "cross_rho_plus")):
        for t_ev, u_ev in zip(sol.t_events[which], sol.y_events[which]):
            fx, fy = f(t_ev, u_ev)
            direction = "up" if fy - fx > 0 else "down"
            events.append(TrajectoryEvent(float(t_ev), f"{kind}_{direction}", State(*u_ev)))
    events.sort(key=lambda e: e.time)
    traj = Trajectory(params, sol.t, sol.y.T, events, sol=sol.sol)

    transitions = []
    for kind, mu_t in (tangency_mus or {}).items():
        t_cross = (mu_start - mu_t) / (rate * (mu_start - mu_end))
        if 0.0 <= t_cross <= t_end:
            transitions.append((kind, float(t_cross)))
    transitions.sort(key=lambda kt: kt[1])
    return DriftRun(mu_start, mu_end, rate, traj, transitions)


def window_signature(
    trajectory: Trajectory,
    t0: float,
    t1: float,
    zone: SwitchingZone,
    eta: float | None = None,
) -> tuple:
    """Local oscillation class over a time window of a (drifting) run.

    Cycles are delimited by increasing crossings of rho = eta inside the
    window; the class is assigned from the median per-cycle rho-extrema, and
    phase durations are measured on the middle cycle. Returns
    (tag, ZoneDurations). Requires at least two full cycles in the window.
    """
    if trajectory.sol is None:
        raise ValueError("window_signature needs a trajectory with dense output")
    eta = trajectory.params.eta if eta is None else eta

    def rho_at(t):
        u = trajectory.sol(t)
        return float(u[1] - u[0])

    ts = np.linspace(t0, t1, 4001)
    rho = np.array([rho_at(t) for t in ts]) - eta
    idx = np.nonzero((rho[:-1] < 0) & (rho[1:] >= 0))[0]
    from scipy.optimize import brentq

    crossings = [brentq(lambda t: rho_at(t) - eta, ts[i], ts[i + 1]) for i in idx]
    if len(crossings) < 3:
        raise TooFewCyclesError(
            f"window [{t0}, {t1}] contains {max(len(crossings) - 1, 0)} full cycles; need 2"
        )
    mins, maxs = [], []
    for a, b in zip(crossings[:-1], crossings[1:]):
        tt = np.linspace(a, b, 400)
        rr = np.array([rho_at(t) for t in tt])
        mins.append(rr.min())
        maxs.append(rr.max())
    rho_min = float(np.median(mins))
    rho_max = float(np.median(maxs))
    tag, _ = _tag_from_extrema(rho_min, rho_max, zone)
    mid = (len(crossings) - 1) // 2
    a, b = crossings[mid], crossings[mid + 1]
    durations = phase_durations(lambda t: rho_at(a + t), b - a, zone)
    return tag, durations


# ---------------------------------------------------------------------------
# oscillation cutoff in epsilon

def hopf_window(epsilon: float, margin: float = 0.3, kappa1=0.1, kappa2=1.0):
    """Bounding box in (mu, eta) of the closed-form Hopf locus, inflated.

    Returns (mu_range, eta_range), or None when no Hopf point exists (no
    oscillations possible at this epsilon). Used to aim scan grids as the
    oscillation region shrinks with growing epsilon.
    """
    from .continuation import DEFAULT_WINDOW, _hopf_seed_grid

    window = {"mu": (1e-6, 2.0), "eta": (-3.0, 1.0)}
    us, etas, mus, _ = _hopf_seed_grid(epsilon, window, kappa1, kappa2)
    if us.size == 0:
        return None
    dmu = max(margin * np.ptp(mus), 0.01)
    deta = max(margin * np.ptp(etas), 0.01)
    return (
        (max(float(mus.min() - dmu), 1e-4), float(mus.max() + dmu)),
        (float(etas.min() - deta), float(etas.max() + deta)),
    )


def _oscillates(epsilon: float, grid: int, max_time: float) -> bool:
    win = hopf_window(epsilon)
    if win is None:
        return False
    scan = region_scan(
        win[0], win[1], grid, grid, epsilon,
        stop_on_periodic=True, max_time=max_time,
    )
    return scan.any_periodic()


def bracket_cutoff(
    lo: float = 0.12,
    hi: float = 0.16,
    iters: int = 3,
    grid: int = 40,
    max_time: float = 3000.0,
) -> tuple:
    """Bisection bracket of the oscillation cutoff epsilon*.

    lo must oscillate and hi must not; the bracket is refined by whether a
    region scan finds any periodic attractor.
    """
    if not _oscillates(lo, grid, max_time):
        raise ConvergenceError(f"epsilon = {lo} shows no oscillation; bad lower bound")
    if _oscillates(hi, grid, max_time):
        raise ConvergenceError(f"epsilon = {hi} still oscillates; bad upper bound")
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if _oscillates(mid, grid, max_time):
            lo = mid
        else:
            hi = mid
    return lo, hi
