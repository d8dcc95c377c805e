"""Self-describing CSV output for trajectories, orbits, curves, and scans.

Every file starts with '#'-prefixed header lines carrying the schema name
and version, a timestamp, and the fully-resolved parameters that produced
the data, followed by a column-name line. Numeric values are written with
shortest round-trip precision (full double precision).
"""

from __future__ import annotations

import datetime
import os

import numpy as np

from .model import ModelParams, classify_state, exchange, switching_zone

SCHEMA_VERSION = 1

__all__ = [
    "write_csv",
    "trajectory_csv",
    "events_csv",
    "orbit_csv",
    "branch_csv",
    "curve_csv",
    "special_points_csv",
    "scan_csv",
    "boundaries_csv",
    "drift_csv",
]


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def write_csv(path, schema: str, columns, rows, header: dict | None = None):
    """Write rows with a self-describing comment header."""
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w") as fh:
        fh.write(f"# schema={schema}/{SCHEMA_VERSION}\n")
        fh.write(f"# generated={datetime.datetime.now(datetime.timezone.utc).isoformat()}\n")
        for k, v in (header or {}).items():
            fh.write(f"# {k}={_fmt(v)}\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")
    return path


def _params_header(params: ModelParams) -> dict:
    zone = switching_zone(params)
    return {
        "mu": params.mu,
        "eta": params.eta,
        "epsilon": params.epsilon,
        "kappa1": params.kappa1,
        "kappa2": params.kappa2,
        "rho_minus": zone.rho_minus,
        "rho_plus": zone.rho_plus,
    }


def _zone_tags(params, states):
    zone = switching_zone(params)
    return [classify_state(zone, params, s) for s in states]


def trajectory_csv(path, traj, header: dict | None = None):
    params = traj.params
    rho = traj.rho()
    kappa = np.asarray(exchange(params, rho))
    zones = _zone_tags(params, traj.states)
    rows = (
        (t, s[0], s[1], r, k, z)
        for t, s, r, k, z in zip(traj.times, traj.states, rho, kappa, zones)
    )
    hdr = {**_params_header(params), **(header or {})}
    return write_csv(path, "trajectory", ["t", "x", "y", "rho", "kappa", "zone"], rows, hdr)


def events_csv(path, traj, header: dict | None = None):
    rows = ((e.time, e.kind, e.state.x, e.state.y) for e in traj.events)
    hdr = {**_params_header(traj.params), **(header or {})}
    return write_csv(path, "events", ["t", "kind", "x", "y"], rows, hdr)


def orbit_csv(path, orbit, n_samples: int = 1001, header: dict | None = None):
    params = orbit.params
    s = np.linspace(0.0, 1.0, n_samples)
    u = orbit.sol(s)
    rho = u[1] - u[0]
    kappa = np.asarray(exchange(params, rho))
    zones = _zone_tags(params, u.T)
    d = orbit.durations
    hdr = {
        **_params_header(params),
        "period": orbit.period,
        "rho_min": orbit.rho_min,
        "rho_max": orbit.rho_max,
        "duration_R1": d.R1,
        "duration_S": d.S,
        "duration_R2": d.R2,
        **(header or {}),
    }
    rows = (
        (si, si * orbit.period, u[0, i], u[1, i], rho[i], kappa[i], zones[i])
        for i, si in enumerate(s)
    )
    return write_csv(
        path, "orbit", ["normalized_t", "t", "x", "y", "rho", "kappa", "zone"], rows, hdr
    )


def branch_csv(path, branch, header: dict | None = None):
    hdr = {"eta": branch.eta, "epsilon": branch.epsilon, **(header or {})}
    rows = (
        (p.mu, p.state.x, p.state.y, p.state.rho, p.stability, p.det, p.tr)
        for p in branch.points
    )
    return write_csv(
        path, "branch", ["mu", "x", "y", "rho", "stability", "detJ", "trJ"], rows, hdr
    )


def branch_markers_csv(path, branch, header: dict | None = None):
    hdr = {"eta": branch.eta, "epsilon": branch.epsilon, **(header or {})}
    rows = [("fold", p.mu, p.state.x, p.state.y) for p in branch.folds] + [
        ("hopf", p.mu, p.state.x, p.state.y) for p in branch.hopfs
    ]
    return write_csv(path, "branch_markers", ["kind", "mu", "x", "y"], rows, hdr)


def curve_csv(path, curves, header: dict | None = None):
    """One or more ParamCurves in the shared curve schema."""
    if not isinstance(curves, (list, tuple)):
        curves = [curves]
    rows = []
    for c in curves:
        for p in c.points:
            rows.append((c.kind, p.mu, p.eta, p.tr, p.det))
    return write_csv(path, "curve", ["kind", "mu", "eta", "aux1", "aux2"], rows, header)


def special_points_csv(path, curves, header: dict | None = None):
    if not isinstance(curves, (list, tuple)):
        curves = [curves]
    seen = set()
    rows = []
    for c in curves:
        for sp in c.special_points:
            key = (sp.kind, round(sp.mu, 12), round(sp.eta, 12))
            if key not in seen:
                seen.add(key)
                rows.append((sp.kind, sp.mu, sp.eta))
    return write_csv(path, "special_points", ["kind", "mu", "eta"], rows, header)


def scan_csv(path, scan, header: dict | None = None):
    hdr = {"epsilon": scan.epsilon, **(header or {})}
    rows = (
        (scan.mus[j], scan.etas[i], scan.tags[i, j], scan.rho_min[i, j], scan.rho_max[i, j])
        for i in range(scan.etas.size)
        for j in range(scan.mus.size)
    )
    return write_csv(path, "scan", ["mu", "eta", "tag", "rho_min", "rho_max"], rows, hdr)


def boundaries_csv(path, scan, header: dict | None = None):
    hdr = {"epsilon": scan.epsilon, **(header or {})}
    rows = []
    for tag, lines in scan.boundaries().items():
        for k, line in enumerate(lines):
            for mu, eta in line:
                rows.append((tag, k, mu, eta))
    return write_csv(path, "scan_boundaries", ["tag", "polyline", "mu", "eta"], rows, hdr)


def drift_csv(path, run, header: dict | None = None):
    traj = run.trajectory
    params = traj.params
    rho = traj.rho()
    kappa = np.asarray(exchange(params, rho))
    zones = _zone_tags(params, traj.states)
    mu = run.mu(traj.times)
    zone = switching_zone(params)
    hdr = {
        "eta": params.eta,
        "epsilon": params.epsilon,
        "kappa1": params.kappa1,
        "kappa2": params.kappa2,
        "rho_minus": zone.rho_minus,
        "rho_plus": zone.rho_plus,
        "mu_start": run.mu_start,
        "mu_end": run.mu_end,
        "rate": run.rate,
        **{f"transition_{k}": t for k, t in run.transitions},
        **(header or {}),
    }
    rows = (
        (t, s[0], s[1], r, k, z, m)
        for t, s, r, k, z, m in zip(traj.times, traj.states, rho, kappa, zones, mu)
    )
    return write_csv(path, "drift", ["t", "x", "y", "rho", "kappa", "zone", "mu"], rows, hdr)
