"""Periodic-orbit collocation, phase anchoring, and boundary tangencies."""

import numpy as np
import pytest

from oracles import hausdorff
from welander import (
    ModelParams,
    NoCrossingError,
    anchor_phase,
    detect_tangency,
    find_attractor,
    rhs,
    solve_periodic_bvp,
    switching_zone,
    tangency_curve,
)

P_W = ModelParams(mu=0.14, eta=-0.3, epsilon=0.009)


@pytest.fixture(scope="module")
def orbit():
    return solve_periodic_bvp(P_W, find_attractor(P_W))


def test_orbit_period_and_extent(orbit):
    assert orbit.period == pytest.approx(5.6083144, abs=1e-6)
    assert orbit.rho_min == pytest.approx(-0.4506941, abs=1e-6)
    assert orbit.rho_max == pytest.approx(-0.2308947, abs=1e-6)


def test_orbit_closure_invariant(orbit):
    assert orbit.closure < 1e-10


def test_orbit_residual_along_loop(orbit):
    # collocation solution satisfies the ODE pointwise to solver tolerance
    for s in np.linspace(0.05, 0.95, 13):
        u = orbit.sol(s)[:2]
        du_ds = (np.asarray(orbit.sol(s + 1e-7)[:2]) - np.asarray(orbit.sol(s - 1e-7)[:2])) / 2e-7
        f = orbit.period * np.asarray(rhs(P_W, u))
        assert np.allclose(du_ds, f, atol=1e-5)


def test_orbit_matches_attractor_hausdorff(orbit):
    att = find_attractor(P_W, n_loop=20001)
    fine = orbit.sol(np.linspace(0.0, 1.0, 20001)).T
    assert hausdorff(fine, att.states) < 1e-4


def test_durations_match_attractor(orbit):
    att = find_attractor(P_W)
    assert orbit.durations.S == pytest.approx(att.durations.S, abs=1e-4)
    assert len(orbit.durations.transits) == 2


def test_anchor_phase_minus(orbit):
    z = switching_zone(P_W)
    anchored = anchor_phase(orbit, "L-")
    rho0 = float(anchored.orbit.rho(0.0))
    assert rho0 == pytest.approx(z.rho_minus, abs=1e-9)
    assert anchored.orbit.period == pytest.approx(orbit.period, abs=1e-8)


def test_anchor_phase_plus(orbit):
    z = switching_zone(P_W)
    anchored = anchor_phase(orbit, "L+")
    rho0 = float(anchored.orbit.rho(0.0))
    assert rho0 == pytest.approx(z.rho_plus, abs=1e-9)


def test_anchor_phase_out_of_range():
    # a small cycle that never reaches L- cannot be anchored there
    p = ModelParams(mu=0.32, eta=-0.05, epsilon=0.009)
    small = solve_periodic_bvp(p, find_attractor(p))
    if small.rho_min > switching_zone(p).rho_minus:
        with pytest.raises(NoCrossingError):
            anchor_phase(small, "L-")


def test_detect_tangency_values():
    p = ModelParams(mu=0.18, eta=-0.17, epsilon=0.009)
    tp = detect_tangency(p, "T+")
    assert tp.mu == pytest.approx(0.16161045, abs=1e-6)
    tm = detect_tangency(p.replace(mu=0.28), "T-")
    assert tm.mu == pytest.approx(0.30915306, abs=1e-6)


def test_tangency_orbit_grazes_boundary():
    p = ModelParams(mu=0.18, eta=-0.17, epsilon=0.009)
    z = switching_zone(p)
    tp = detect_tangency(p, "T+")
    orbit = tp.orbit.orbit
    assert orbit.rho_max == pytest.approx(z.rho_plus, abs=1e-8)
    assert orbit.amplitude() > 1e-2


def test_tangency_curve_passes_reference_point():
    curve = tangency_curve("T-", 0.009, max_steps=60)
    pts = curve.mu_eta()
    etas = [e for _, e in pts]
    assert min(etas) < -0.17 < max(etas)
    # interpolate mu at eta = -0.17
    from oracles import line_crossings

    mus = line_crossings(pts, -0.17)
    assert any(abs(m - 0.30915306) < 5e-4 for m in mus)
