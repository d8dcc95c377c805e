"""Equilibrium branches and two-parameter bifurcation curves."""

import numpy as np
import pytest

from oracles import line_crossings
from welander import (
    ModelParams,
    bifurcation_diagram,
    continue_equilibria,
    find_equilibria,
    fold_curve,
    hopf_curve,
    intersect_curves,
    jacobian,
    rhs,
    snic_probe,
)

EPS = 0.009


@pytest.fixture(scope="module")
def diagram():
    return bifurcation_diagram(EPS)


def test_branch_points_are_equilibria():
    p = ModelParams(mu=0.1, eta=-0.17, epsilon=EPS)
    branch = continue_equilibria(p, (0.05, 0.5))
    assert len(branch.points) > 20
    for bp in branch.points[::10]:
        res = rhs(p.replace(mu=bp.mu), bp.state.as_array())
        assert np.linalg.norm(res) < 1e-9


def test_branch_hopf_markers_match_closed_form():
    p = ModelParams(mu=0.1, eta=-0.17, epsilon=EPS)
    branch = continue_equilibria(p, (0.05, 0.5))
    assert len(branch.hopfs) == 2
    mus = sorted(h.mu for h in branch.hopfs)
    assert mus[0] == pytest.approx(0.0921514, abs=1e-5)
    assert mus[1] == pytest.approx(0.3310534, abs=1e-5)


def test_branch_fold_markers_in_bistable_slice():
    p = ModelParams(mu=0.03, eta=-0.6, epsilon=EPS)
    branch = continue_equilibria(p, (0.005, 0.2))
    # the sheet through the starting equilibrium carries one fold
    assert len(branch.folds) == 1
    for f in branch.folds:
        J = np.asarray(jacobian(p.replace(mu=f.mu), f.state.as_array()))
        assert abs(np.linalg.det(J)) < 1e-6


def test_hopf_curve_points_satisfy_defining_system(diagram):
    H = diagram["H"]
    assert len(H.points) > 100
    for cp in H.points[:: len(H.points) // 20]:
        p = ModelParams(mu=cp.mu, eta=cp.eta, epsilon=EPS)
        u = cp.state.as_array()
        assert np.linalg.norm(rhs(p, u)) < 1e-9
        J = np.asarray(jacobian(p, u))
        assert abs(np.trace(J)) < 1e-7
        assert np.linalg.det(J) > 0


def test_hopf_curve_stays_below_eta_zero(diagram):
    etas = [cp.eta for cp in diagram["H"].points]
    assert max(etas) < 0.0


def test_fold_curve_points_are_degenerate(diagram):
    S = diagram["S"]
    assert len(S.points) > 100
    for cp in S.points[:: len(S.points) // 20]:
        p = ModelParams(mu=cp.mu, eta=cp.eta, epsilon=EPS)
        u = cp.state.as_array()
        assert np.linalg.norm(rhs(p, u)) < 1e-9
        assert abs(np.linalg.det(np.asarray(jacobian(p, u)))) < 1e-7


def test_bt_points(diagram):
    bts = [sp for c in (diagram["H"], diagram["S"]) for sp in c.special_points
           if sp.kind == "BT"]
    locs = sorted({(round(sp.mu, 4), round(sp.eta, 3)) for sp in bts})
    assert (0.0009, -0.873) in locs
    assert (0.1183, -0.401) in locs


def test_n_point_is_on_both_curves(diagram):
    assert len(diagram["N"]) >= 1
    mu_n, eta_n = diagram["N"][0]
    for curve in (diagram["H"], diagram["S"]):
        d = min(np.hypot(cp.mu - mu_n, cp.eta - eta_n) for cp in curve.points)
        assert d < 1e-2


def test_hopf_crossings_at_reference_slice(diagram):
    crossings = line_crossings(diagram["H"].mu_eta(), -0.17)
    assert len(crossings) == 2
    assert crossings[0] == pytest.approx(0.0921514, abs=1e-4)
    assert crossings[1] == pytest.approx(0.3310534, abs=1e-4)


def test_intersect_curves_self_consistency(diagram):
    pts = intersect_curves(diagram["H"], diagram["S"])
    # every true crossing is near either a BT tangency or the N point
    specials = [(sp.mu, sp.eta) for sp in diagram["H"].special_points]
    specials += [(sp.mu, sp.eta) for sp in diagram["S"].special_points]
    for mu, eta in pts:
        assert min(np.hypot(mu - m, eta - e) for m, e in specials) < 5e-3


def test_snic_probe_on_fold_segment(diagram):
    S = diagram["S"]
    # pick a fold point on the oscillation-facing segment near the N point
    mu_n, eta_n = diagram["N"][0]
    cp = min(S.points, key=lambda c: np.hypot(c.mu - mu_n, c.eta - eta_n * 1.05))
    verdict = snic_probe(
        ModelParams(mu=cp.mu, eta=cp.eta, epsilon=EPS), cp.state
    )
    assert verdict in ("SNIC", "fold", "inconclusive")
