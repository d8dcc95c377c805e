"""Acceptance gate: one pass/fail line per criterion, at stated tolerances.

Each test prints "[ACCEPT] <criterion>: PASS|FAIL" before asserting, so the
verdict for every criterion is visible in the log even on failure
(run with -s or rely on captured output of failing tests).
"""

import numpy as np
import pytest

from oracles import (
    curvature_zone_boundaries,
    fd_jacobian,
    hausdorff,
    line_crossings,
    multistart_equilibria,
    zone_flow_quadrature,
)
from welander import (
    ModelParams,
    bracket_cutoff,
    classify,
    detect_tangency,
    find_attractor,
    find_equilibria,
    hopf_curve,
    jacobian,
    region_scan,
    return_map,
    return_map_fixed_point,
    run_drift,
    simulate,
    solve_periodic_bvp,
    switching_zone,
    tangency_curve,
    window_signature,
)
from welander.filippov import _half_map, _zone_flow, filippov_simulate

EPS = 0.009
ETA = -0.17


def verdict(name, ok):
    print(f"\n[ACCEPT] {name}: {'PASS' if ok else 'FAIL'}")
    assert ok, name


def test_tangency_anchors():
    p = ModelParams(mu=0.18, eta=ETA, epsilon=EPS)
    mu_plus = detect_tangency(p, "T+").mu
    mu_minus = detect_tangency(p.replace(mu=0.28), "T-").mu
    ok = abs(mu_plus - 0.1616) < 0.002 and abs(mu_minus - 0.3092) < 0.002
    verdict(
        f"tangency anchors mu(T+)={mu_plus:.6f}, mu(T-)={mu_minus:.6f} "
        "within 0.002 of (0.1616, 0.3092)", ok,
    )


def test_welander_window_sweep():
    mus = np.arange(0.10, 0.332, 0.002)
    tags = []
    for mu in mus:
        c = classify(ModelParams(mu=float(mu), eta=ETA, epsilon=EPS),
                     settle_time=300.0, max_time=3000.0)
        tags.append(c.tag)
    step = 0.002
    lo, hi = 0.1616, 0.3092
    ok = True
    for mu, tag in zip(mus, tags):
        if lo + step < mu < hi - step:
            ok &= tag == "W"
        elif mu < lo - step:
            ok &= tag == "P_1"
        elif mu > hi + step:
            ok &= tag == "P_2"
    w_mus = [m for m, t in zip(mus, tags) if t == "W"]
    verdict(
        f"Welander window: W on [{min(w_mus):.3f}, {max(w_mus):.3f}] "
        "(target [0.1616, 0.3092] +- one 0.002 step), P_1 below, P_2 above",
        ok,
    )


def test_four_star_points():
    expected = {
        (0.14, -0.3): "W",
        (0.32, -0.05): "P_S",
        (0.11, -0.17): "P_1",
        (0.32, -0.17): "P_2",
    }
    got = {
        k: classify(ModelParams(mu=k[0], eta=k[1], epsilon=EPS)).tag
        for k in expected
    }
    ok = got == expected
    verdict(f"four star points classify as {got}", ok)


def test_switching_time_fraction():
    c = classify(ModelParams(mu=0.14, eta=-0.3, epsilon=EPS))
    fracs = [100.0 * t / c.period for t in c.durations.transits]
    ok = len(fracs) == 2 and all(abs(f - 8.0) <= 3.0 for f in fracs)
    verdict(
        "switching-zone transits "
        f"{', '.join(f'{f:.2f}%' for f in fracs)} of period, each 8% +- 3",
        ok,
    )


def test_oscillation_cutoff_bracket():
    lo, hi = bracket_cutoff(0.12, 0.16, iters=3, grid=40)
    ok = 0.14 <= lo < hi <= 0.155
    verdict(f"oscillation cutoff bracketed in [{lo:.4f}, {hi:.4f}] "
            "subset of [0.14, 0.155]", ok)


def test_subregion_extinction():
    from welander import hopf_window

    results = {}
    for eps in (0.085, 0.11):
        win = hopf_window(eps)
        scan = region_scan(win[0], win[1], 21, 21, eps,
                           settle_time=300.0, max_time=2000.0)
        results[eps] = set(np.unique(scan.tags))
    ok = (
        not results[0.085] & {"W", "P_2"}
        and not results[0.11] & {"W", "P_2", "P_1"}
    )
    verdict(
        f"extinction: eps=0.085 tags {sorted(results[0.085])} exclude W, P_2; "
        f"eps=0.11 tags {sorted(results[0.11])} also exclude P_1", ok,
    )


def test_nonsmooth_orbit():
    p0 = ModelParams(mu=0.219, eta=ETA, epsilon=0.0)
    pt, period, deriv = return_map_fixed_point(p0)
    stable = abs(deriv) < 1.0
    traj = filippov_simulate(p0, pt.state(p0), period * 1.001)
    crossings = [e for e in traj.events if e.kind == "cross_sigma"
                 and e.time <= period * (1 + 1e-9)]
    two_per_period = len(crossings) == 2
    # map image vs event-driven simulation at the intermediate crossing
    q, t_half = _half_map(p0, pt, 1e4)
    sim_matches = (
        abs(crossings[0].time - t_half) < 1e-8
        and abs(crossings[0].state.x - q.s) < 1e-8
    )
    flows_ok = True
    for kappa in (p0.kappa1, p0.kappa2):
        flow, _, _ = _zone_flow(p0, kappa, np.array([0.55, 0.31]))
        x, y = flow(1.1)
        xq, yq = zone_flow_quadrature(kappa, 0.55, 0.31, p0.mu, 1.1)
        flows_ok &= abs(x - xq) < 1e-10 and abs(y - yq) < 1e-10
    ok = stable and two_per_period and sim_matches and flows_ok
    verdict(
        f"eps=0 orbit: |dP2/ds|={abs(deriv):.4f}<1, {len(crossings)} "
        "crossings/period, map vs simulation < 1e-8, flows vs quadrature "
        "< 1e-10", ok,
    )


def test_drift_experiment():
    p = ModelParams(mu=0.32, eta=ETA, epsilon=EPS)
    att = find_attractor(p)
    mu_minus = detect_tangency(p.replace(mu=0.28), "T-").mu
    mu_plus = detect_tangency(p.replace(mu=0.18), "T+").mu
    run = run_drift(p, 0.32, 0.11, 0.001, att.states[0],
                    tangency_mus={"T-": mu_minus, "T+": mu_plus})
    zone = switching_zone(p)
    sigs = {}
    for (t0, t1) in ((5.0, 25.0), (300.0, 320.0), (950.0, 970.0)):
        tag, _ = window_signature(run.trajectory, t0, t1, zone, eta=ETA)
        sigs[(t0, t1)] = tag
    trans = dict(run.transitions)
    ok = (
        sigs[(5.0, 25.0)] == "P_2"
        and sigs[(300.0, 320.0)] == "W"
        and sigs[(950.0, 970.0)] == "P_1"
        and abs(trans["T-"] - 51.0) <= 5.0
        and abs(trans["T+"] - 754.0) <= 5.0
    )
    verdict(
        f"drift: signatures {list(sigs.values())} == [P_2, W, P_1], "
        f"T- at {trans['T-']:.2f} (51 +- 5), T+ at {trans['T+']:.2f} "
        "(754 +- 5)", ok,
    )


def test_oracle_equivalence_suite():
    p = ModelParams(mu=0.14, eta=ETA, epsilon=EPS)
    ok_parts = {}

    # Jacobian vs central finite differences
    rng = np.random.default_rng(7)
    rel = 0.0
    for _ in range(20):
        u = rng.uniform([0.0, -0.5], [1.2, 1.5])
        J = np.asarray(jacobian(p, u))
        rel = max(rel, np.max(np.abs(J - fd_jacobian(p, u))) / max(1.0, np.max(np.abs(J))))
    ok_parts["jacobian"] = rel < 1e-6

    # equilibria vs multi-start Newton
    eq_ok = True
    for pp in (p, ModelParams(mu=0.03, eta=-0.6, epsilon=EPS)):
        lib = sorted((e.state.as_array() for e in find_equilibria(pp)), key=tuple)
        ora = sorted(multistart_equilibria(pp, n=10), key=tuple)
        eq_ok &= len(lib) == len(ora)
        eq_ok &= all(np.linalg.norm(a - b) < 1e-8 for a, b in zip(lib, ora))
    ok_parts["equilibria"] = eq_ok

    # zone boundaries vs curvature-maximization oracle
    z = switching_zone(p)
    rm, rp = curvature_zone_boundaries(p)
    ok_parts["zone"] = abs(z.rho_minus - rm) < 1e-8 and abs(z.rho_plus - rp) < 1e-8

    # BVP orbit vs long-simulation attractor
    pw = ModelParams(mu=0.14, eta=-0.3, epsilon=EPS)
    att = find_attractor(pw, n_loop=20001)
    orbit = solve_periodic_bvp(pw, att)
    fine = orbit.sol(np.linspace(0.0, 1.0, 20001)).T
    ok_parts["hausdorff"] = hausdorff(fine, att.states) < 1e-4

    # scan tags vs curve sides
    H = hopf_curve(EPS).mu_eta()
    Tp = tangency_curve("T+", EPS, max_steps=80).mu_eta()
    Tm = tangency_curve("T-", EPS, max_steps=80).mu_eta()
    mu_grid = np.linspace(0.06, 0.40, 15)
    eta_grid = np.linspace(-0.23, -0.135, 6)
    scan = region_scan((0.06, 0.40), (-0.23, -0.135), 15, 6, EPS,
                       settle_time=300.0, max_time=3000.0)
    cell = mu_grid[1] - mu_grid[0]
    checked = agree = 0
    for i, eta in enumerate(eta_grid):
        h = line_crossings(H, eta)
        tp = line_crossings(Tp, eta)
        tm = line_crossings(Tm, eta)
        if len(h) != 2 or len(tp) < 1 or len(tm) < 1:
            continue
        marks = h + tp[:1] + tm[:1]
        for j, mu in enumerate(mu_grid):
            if min(abs(mu - m) for m in marks) < cell:
                continue  # within one grid cell of a curve
            if not h[0] < mu < h[1]:
                want = "EQUILIBRIUM"
            else:
                dd = mu < tm[0]
                dc = mu > tp[0]
                want = {(True, False): "P_1", (True, True): "W",
                        (False, True): "P_2", (False, False): "P_S"}[(dd, dc)]
            got = scan.tags[i, j]
            if got == "UNKNOWN":
                continue
            checked += 1
            agree += got == want
    ok_parts["scan_vs_curves"] = checked >= 30 and agree == checked

    ok = all(ok_parts.values())
    verdict(
        "oracle equivalence: "
        + ", ".join(f"{k}={'ok' if v else 'FAIL'}" for k, v in ok_parts.items())
        + f" (scan agreement {agree}/{checked})", ok,
    )
