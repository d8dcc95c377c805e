"""Adaptive simulation, event logging, and attractor detection."""

import numpy as np
import pytest

from oracles import rk4
from welander import (
    EquilibriumAttractor,
    ModelParams,
    NonSmoothError,
    PeriodicAttractor,
    find_attractor,
    find_equilibria,
    phase_durations,
    simulate,
    switching_zone,
)

P_OSC = ModelParams(mu=0.14, eta=-0.3, epsilon=0.009)
P_EQ = ModelParams(mu=0.5, eta=-0.17, epsilon=0.009)


def test_simulate_matches_rk4():
    u0 = (0.5, 0.2)
    traj = simulate(P_OSC, u0, 2.0)
    ref = rk4(P_OSC, u0, 2.0, dt=2e-5)
    assert np.allclose(traj.states[-1], ref, atol=1e-8)


def test_simulate_dense_evaluation():
    traj = simulate(P_OSC, (0.5, 0.2), 5.0)
    t = 2.345
    u = traj.at(t)
    ref = rk4(P_OSC, (0.5, 0.2), t, dt=2e-5)
    assert np.allclose(u, ref, atol=1e-8)


def test_events_are_zone_boundary_crossings():
    z = switching_zone(P_OSC)
    traj = simulate(P_OSC, (0.5, 0.2), 30.0)
    kinds = {e.kind for e in traj.events}
    assert kinds <= {
        "cross_rho_minus_up", "cross_rho_minus_down",
        "cross_rho_plus_up", "cross_rho_plus_down",
    }
    for e in traj.events:
        rho = e.state.y - e.state.x
        target = z.rho_minus if "rho_minus" in e.kind else z.rho_plus
        assert rho == pytest.approx(target, abs=1e-8)


def test_zone_tags_partition_trajectory():
    traj = simulate(P_OSC, (0.5, 0.2), 30.0)
    tags = traj.zone_tags(switching_zone(P_OSC))
    assert set(tags) <= {"R1", "S", "R2"}
    assert len(tags) == traj.times.size


def test_tolerance_validation():
    with pytest.raises(ValueError):
        simulate(P_OSC, (0.5, 0.2), 1.0, rel_tol=0.0)
    with pytest.raises(ValueError):
        simulate(P_OSC, (0.5, 0.2), 1.0, abs_tol=1.0)


def test_find_attractor_equilibrium():
    att = find_attractor(P_EQ)
    assert isinstance(att, EquilibriumAttractor)
    eq = find_equilibria(P_EQ)[0]
    assert np.allclose(att.state.as_array(), eq.state.as_array(), atol=1e-6)


def test_find_attractor_periodic():
    att = find_attractor(P_OSC)
    assert isinstance(att, PeriodicAttractor)
    assert att.period == pytest.approx(5.6083144, abs=1e-4)
    assert att.rho_min == pytest.approx(-0.4506941, abs=1e-4)
    assert att.rho_max == pytest.approx(-0.2308947, abs=1e-4)


def test_find_attractor_loop_closes():
    att = find_attractor(P_OSC)
    assert np.linalg.norm(att.states[-1] - att.states[0]) < 1e-6


def test_find_attractor_rejects_nonsmooth():
    with pytest.raises(NonSmoothError):
        find_attractor(P_OSC.replace(epsilon=0.0))


def test_phase_durations_sum_to_period():
    att = find_attractor(P_OSC)
    d = att.durations
    assert d.R1 + d.S + d.R2 == pytest.approx(att.period, rel=1e-6)
    assert len(d.transits) == 2
    assert sum(d.transits) == pytest.approx(d.S, rel=1e-9)


def test_small_cycle_detected_without_crossing_eta():
    # near the Hopf point the cycle encircles the equilibrium inside the
    # switching zone and never reaches rho = eta; detection must still work
    p = ModelParams(mu=0.093, eta=-0.17, epsilon=0.009)
    att = find_attractor(p, max_time=20000.0)
    assert isinstance(att, PeriodicAttractor)
    assert att.rho_max < p.eta
    d = att.durations
    assert d.R2 == 0.0 and d.S > 0.0
