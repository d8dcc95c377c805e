"""Two-box vertical-mixing model: parameters, vector field, switching-zone geometry.

The model evolves nondimensional surface temperature x and salinity y,

    dx/dt = 1 - x - K(rho) * x
    dy/dt = mu - K(rho) * y,      rho = y - x,

where the convective exchange function K interpolates smoothly between a
diffusive mixing coefficient kappa1 (stable stratification) and a convective
coefficient kappa2 (unstable stratification) over a density interval of width
O(epsilon) around the threshold eta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import brentq

from .errors import BracketError, NonSmoothError, ScanWindowError

__all__ = [
    "ModelParams",
    "State",
    "SwitchingZone",
    "Equilibrium",
    "exchange",
    "exchange_deriv",
    "rhs",
    "jacobian",
    "curvature_root_function",
    "switching_zone",
    "classify_state",
    "find_equilibria",
]

#: eigenvalue real-part tolerance for stability tagging
STABILITY_TOL = 1e-9

#: absolute rho tolerance for tagging a state as lying on a zone boundary
BOUNDARY_TOL = 1e-10


@dataclass(frozen=True)
class ModelParams:
    """Nondimensional model parameters.

    mu is the virtual salinity flux, eta the density threshold, epsilon the
    switching timescale (epsilon = 0 gives the piecewise-smooth limit), and
    kappa1 < kappa2 are the diffusive and convective mixing coefficients.
    """

    mu: float
    eta: float
    epsilon: float
    kappa1: float = 0.1
    kappa2: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.kappa1 < self.kappa2:
            raise ValueError(
                f"need 0 < kappa1 < kappa2, got kappa1={self.kappa1}, kappa2={self.kappa2}"
            )
        if self.epsilon < 0.0:
            raise ValueError(f"epsilon must be >= 0, got {self.epsilon}")

    def replace(self, **kwargs) -> "ModelParams":
        return replace(self, **kwargs)


@dataclass(frozen=True)
class State:
    """Phase-plane state (nondimensional temperature, salinity)."""

    x: float
    y: float

    @property
    def rho(self) -> float:
        """Surface density relative to the deep box; always y - x, never cached."""
        return self.y - self.x

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y])


@dataclass(frozen=True)
class SwitchingZone:
    """Boundaries of the switching zone in density and exchange value.

    rho_minus and rho_plus are the densities of the two maximal-curvature
    points of the switching profile; L_minus and L_plus are the exchange
    values there. The zones are R1 (rho < rho_minus), S (between), and
    R2 (rho > rho_plus).
    """

    rho_minus: float
    rho_plus: float
    L_minus: float
    L_plus: float


@dataclass(frozen=True)
class Equilibrium:
    state: State
    stability: str  # stable | unstable | saddle | degenerate
    eigenvalues: tuple


def exchange(params: ModelParams, rho):
    """Convective exchange coefficient K(rho).

    Strictly inside (kappa1, kappa2) and monotone for epsilon > 0. For
    epsilon = 0 this is the step function, with the midpoint value exactly
    on the threshold (consistent with the tanh limit).
    """
    k1, k2 = params.kappa1, params.kappa2
    if params.epsilon == 0.0:
        return np.where(
            rho < params.eta, k1, np.where(rho > params.eta, k2, 0.5 * (k1 + k2))
        )[()]
    w = (np.asarray(rho) - params.eta) / params.epsilon
    return (k1 + 0.5 * (k2 - k1) * (1.0 + np.tanh(w)))[()]


def exchange_deriv(params: ModelParams, rho):
    """dK/drho; requires epsilon > 0."""
    if params.epsilon == 0.0:
        raise NonSmoothError("exchange is not differentiable for epsilon = 0")
    w = (np.asarray(rho) - params.eta) / params.epsilon
    return ((params.kappa2 - params.kappa1) / (2.0 * params.epsilon) / np.cosh(w) ** 2)[()]


def _state_xy(state):
    if isinstance(state, State):
        return state.x, state.y
    x, y = state
    return x, y


def rhs(params: ModelParams, state) -> np.ndarray:
    """Vector field (dx/dt, dy/dt) at a state (State or (x, y) pair)."""
    x, y = _state_xy(state)
    K = exchange(params, y - x)
    return np.array([1.0 - x - K * x, params.mu - K * y])


def jacobian(params: ModelParams, state) -> np.ndarray:
    """Analytic 2x2 Jacobian of the vector field; requires epsilon > 0."""
    if params.epsilon == 0.0:
        raise NonSmoothError("the epsilon = 0 field is non-smooth; no Jacobian on Sigma")
    x, y = _state_xy(state)
    rho = y - x
    K = exchange(params, rho)
    Kp = exchange_deriv(params, rho)
    return np.array(
        [
            [-1.0 - K + x * Kp, -x * Kp],
            [y * Kp, -K - y * Kp],
        ]
    )


def curvature_root_function(params: ModelParams, rho) -> float:
    """Maximal-curvature root function G(rho) of the switching profile.

    G vanishes exactly at the two points of maximal curvature of the graph of
    the normalized switching profile tanh((rho - eta)/epsilon); the kappa
    amplitude of the exchange function drops out of the zone geometry. G is
    even about eta, positive between its two roots and negative outside.

    For arguments far enough from eta that cosh would overflow, a saturated
    negative value is returned (G -> -inf there), preserving bracketing signs.
    """
    if params.epsilon == 0.0:
        raise NonSmoothError("curvature root function undefined for epsilon = 0")
    eps = params.epsilon
    w = (rho - params.eta) / eps
    if abs(6.0 * w) > 700.0:
        return -1e300
    return (
        8.0 * eps**2
        - 16.0
        + (9.0 * eps**2 + 32.0) * math.cosh(2.0 * w)
        - eps**2 * math.cosh(6.0 * w)
    )


def switching_zone(params: ModelParams) -> SwitchingZone:
    """Compute the switching-zone boundaries rho+-, L+- for the given parameters.

    For epsilon > 0 the boundaries are the two roots of the curvature root
    function bracketing eta, located by bisection after a geometric bracket
    expansion; for epsilon = 0 the zone degenerates to the switching line.
    """
    eta, eps = params.eta, params.epsilon
    if eps == 0.0:
        return SwitchingZone(eta, eta, params.kappa1, params.kappa2)
    limit = 10.0 * eps * (1.0 + abs(math.log(eps)))
    b = eps
    while curvature_root_function(params, eta + b) > 0.0:
        b *= 2.0
        if b > limit:
            raise BracketError(
                f"no sign change of G within |rho - eta| <= {limit:.3g}; "
                "parameters are likely corrupted"
            )
    rho_plus = brentq(
        lambda r: curvature_root_function(params, r), eta, eta + b, xtol=1e-14
    )
    rho_minus = 2.0 * eta - rho_plus  # G is even about eta
    return SwitchingZone(
        rho_minus,
        rho_plus,
        float(exchange(params, rho_minus)),
        float(exchange(params, rho_plus)),
    )


def classify_state(zone: SwitchingZone, params: ModelParams, state) -> str:
    """Zone tag for a state: 'R1', 'S', 'R2', or 'boundary' (within rho tolerance)."""
    x, y = _state_xy(state)
    rho = y - x
    if abs(rho - zone.rho_minus) <= BOUNDARY_TOL or abs(rho - zone.rho_plus) <= BOUNDARY_TOL:
        return "boundary"
    if rho < zone.rho_minus:
        return "R1"
    if rho > zone.rho_plus:
        return "R2"
    return "S"


def _stability_tag(eigenvalues) -> str:
    re = np.real(eigenvalues)
    if np.any(np.abs(re) <= STABILITY_TOL):
        return "degenerate"
    if np.all(re < 0.0):
        return "stable"
    if np.all(re > 0.0):
        return "unstable"
    return "saddle"


def equilibrium_residual(params: ModelParams, rho: float) -> float:
    """Scalar equilibrium reduction h(rho) = rho - mu/K + 1/(1+K).

    Equilibria of the full field satisfy x = 1/(1+K), y = mu/K with
    h(rho) = 0, which turns root-finding in the plane into a 1-D scan.
    """
    K = exchange(params, rho)
    return rho - params.mu / K + 1.0 / (1.0 + K)


def _lift_equilibrium(params: ModelParams, rho: float) -> State:
    K = exchange(params, rho)
    return State(1.0 / (1.0 + K), params.mu / K)


def find_equilibria(params: ModelParams, n_scan: int = 2000) -> list[Equilibrium]:
    """All equilibria of the field, each with a stability tag.

    For epsilon > 0 the roots of the scalar reduction are bracketed on a scan
    window around the switching zone and refined by bisection. For epsilon = 0
    the per-zone linear systems give closed-form candidates which are kept
    only if they lie in their own zone (non-virtual).
    """
    if params.epsilon == 0.0:
        out = []
        for kappa, zone in ((params.kappa1, "R1"), (params.kappa2, "R2")):
            x = 1.0 / (1.0 + kappa)
            y = params.mu / kappa
            rho = y - x
            real = rho < params.eta if zone == "R1" else rho > params.eta
            if real:
                eigs = (-(1.0 + kappa), -kappa)  # frozen-kappa linear field
                out.append(Equilibrium(State(x, y), _stability_tag(eigs), eigs))
        return out

    lo = params.eta - 20.0 * params.epsilon - 5.0
    hi = params.eta + 20.0 * params.epsilon + 5.0
    rr = np.linspace(lo, hi, n_scan)
    K = exchange(params, rr)
    hh = rr - params.mu / K + 1.0 / (1.0 + K)
    sign = np.sign(hh)
    change = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
    exact = np.nonzero(hh == 0.0)[0]
    if any(i in (0, n_scan - 2) for i in change) or any(i in (0, n_scan - 1) for i in exact):
        raise ScanWindowError(
            f"equilibrium sign change at the scan boundary [{lo:.3g}, {hi:.3g}]"
        )
    roots = [float(rr[i]) for i in exact]
    f = lambda r: equilibrium_residual(params, r)
    roots += [brentq(f, rr[i], rr[i + 1], xtol=1e-14) for i in change]
    out = []
    for rho in sorted(roots):
        st = _lift_equilibrium(params, rho)
        eigs = np.linalg.eigvals(jacobian(params, st))
        out.append(Equilibrium(st, _stability_tag(eigs), tuple(eigs)))
    return out
