"""Piecewise-smooth limit: exact zone flows, boundary maps, fixed points."""

import numpy as np
import pytest

from oracles import zone_flow_quadrature
from welander import (
    ModelParams,
    NonSmoothError,
    ReturnMapPoint,
    filippov_simulate,
    return_map,
    return_map_fixed_point,
)
from welander.filippov import _zone_flow

P0 = ModelParams(mu=0.219, eta=-0.17, epsilon=0.0)


def test_zone_flow_matches_quadrature():
    for kappa in (P0.kappa1, P0.kappa2):
        for t in (0.3, 1.7):
            flow, _, _ = _zone_flow(P0, kappa, np.array([0.55, 0.31]))
            x, y = flow(t)
            xq, yq = zone_flow_quadrature(kappa, 0.55, 0.31, P0.mu, t)
            assert abs(x - xq) < 1e-10
            assert abs(y - yq) < 1e-10


def test_filippov_requires_nonsmooth():
    with pytest.raises(NonSmoothError):
        filippov_simulate(P0.replace(epsilon=0.01), (0.5, 0.2), 1.0)


def test_crossings_lie_on_sigma():
    traj = filippov_simulate(P0, (0.5, 0.2), 40.0)
    crossings = [e for e in traj.events if e.kind == "cross_sigma"]
    assert crossings
    for e in crossings:
        assert e.state.y - e.state.x == pytest.approx(P0.eta, abs=1e-12)


def test_return_map_alternates_direction():
    pt = ReturnMapPoint(0.52, "entering-R1")
    q = return_map(P0, pt)
    r = return_map(P0, q)
    assert q.direction == "entering-R2"
    assert r.direction == "entering-R1"


def test_fixed_point_values():
    pt, period, deriv = return_map_fixed_point(P0)
    assert pt.s == pytest.approx(0.5334139, abs=1e-5)
    assert period == pytest.approx(3.2288265, abs=1e-5)
    assert abs(deriv) < 1.0
    assert deriv == pytest.approx(0.01749, abs=1e-3)


def test_fixed_point_is_invariant():
    from welander.filippov import _half_map

    pt, period, _ = return_map_fixed_point(P0)
    q, t1 = _half_map(P0, pt, 1e4)
    r, t2 = _half_map(P0, q, 1e4)
    assert r.s == pytest.approx(pt.s, abs=1e-9)
    assert t1 + t2 == pytest.approx(period, abs=1e-9)


def test_two_crossings_per_period():
    pt, period, _ = return_map_fixed_point(P0)
    traj = filippov_simulate(P0, pt.state(P0), period * 1.001)
    crossings = [e for e in traj.events if e.kind == "cross_sigma"]
    # starting on Sigma: one interior crossing plus the closure at t = T
    assert len(crossings) == 2
    assert crossings[-1].time == pytest.approx(period, abs=1e-8)


def test_orbit_closes_over_one_period():
    pt, period, _ = return_map_fixed_point(P0)
    u0 = pt.state(P0).as_array()
    traj = filippov_simulate(P0, u0, period)
    assert np.allclose(traj.states[-1], u0, atol=1e-8)


def test_event_driven_vs_map_consistency():
    # the simulated crossing after one half-map equals the map image
    from welander.filippov import _half_map

    pt, period, _ = return_map_fixed_point(P0)
    q, t_half = _half_map(P0, pt, 1e4)
    traj = filippov_simulate(P0, pt.state(P0), t_half * 1.001)
    crossings = [e for e in traj.events if e.kind == "cross_sigma"]
    assert crossings[-1].time == pytest.approx(t_half, abs=1e-8)
    assert crossings[-1].state.x == pytest.approx(q.s, abs=1e-8)
