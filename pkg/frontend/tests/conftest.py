"""Synthetic CSV fixtures matching the exporter schemas."""

import numpy as np
import pytest


def write_csv(path, schema, columns, rows, header=None):
    with open(path, "w") as fh:
        fh.write(f"# schema={schema}/1\n")
        for k, v in (header or {}).items():
            fh.write(f"# {k}={v}\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(str(v) for v in row) + "\n")


PARAMS_HEADER = {
    "mu": 0.14, "eta": -0.3, "epsilon": 0.009, "kappa1": 0.1, "kappa2": 1.0,
    "rho_minus": -0.329, "rho_plus": -0.271,
}


def _orbit_rows(n=200, period=5.0):
    s = np.linspace(0.0, 1.0, n)
    rho = -0.3 + 0.08 * np.sin(2 * np.pi * s)
    x = 0.6 + 0.05 * np.cos(2 * np.pi * s)
    y = x + rho
    kappa = 0.55 + 0.45 * np.tanh((rho + 0.3) / 0.009)
    zone = np.where(rho < -0.329, "R1", np.where(rho > -0.271, "R2", "S"))
    return [
        (si, si * period, xi, yi, ri, ki, zi)
        for si, xi, yi, ri, ki, zi in zip(s, x, y, rho, kappa, zone)
    ]


ORBIT_COLS = ["normalized_t", "t", "x", "y", "rho", "kappa", "zone"]


@pytest.fixture
def data_dir(tmp_path):
    """A directory populated with schema-valid data for every figure."""
    d = tmp_path / "data"
    d.mkdir()
    hdr = dict(PARAMS_HEADER)

    # figure 2: nonsmooth trajectory + one loop
    t = np.linspace(0.0, 10.0, 300)
    x = 0.55 + 0.1 * np.cos(t)
    y = x - 0.17 + 0.1 * np.sin(t)
    rho = y - x
    zone = np.where(rho < -0.17, "R1", "R2")
    rows = list(zip(t, x, y, rho, np.where(rho < -0.17, 0.1, 1.0), zone))
    traj_hdr = {**hdr, "eta": -0.17, "epsilon": 0.0}
    write_csv(d / "fig2_timeseries.csv", "trajectory",
              ["t", "x", "y", "rho", "kappa", "zone"], rows, traj_hdr)
    write_csv(d / "fig2_orbit.csv", "trajectory",
              ["t", "x", "y", "rho", "kappa", "zone"], rows[:80], traj_hdr)

    # figure 3: exchange profile + zone widths
    rho_g = np.linspace(-0.39, -0.21, 60)
    kap = 0.55 + 0.45 * np.tanh((rho_g + 0.3) / 0.02)
    write_csv(d / "fig3_exchange.csv", "exchange_profile", ["rho", "kappa"],
              zip(rho_g, kap), hdr)
    eps = np.linspace(0.0, 0.3, 30)
    write_csv(d / "fig3_zones.csv", "zones_vs_epsilon",
              ["epsilon", "rho_minus", "rho_plus", "L_minus", "L_plus"],
              zip(eps, -0.3 - 3 * eps, -0.3 + 3 * eps,
                  0.1 + 0.01 * eps, 1.0 - 0.01 * eps), {"eta": -0.3})

    # figures 4, 5, 7: orbits
    for name in ("fig4_orbit.csv", "fig7_PS.csv", "fig7_P1.csv", "fig7_P2.csv"):
        write_csv(d / name, "orbit", ORBIT_COLS, _orbit_rows(), hdr)
    for name in ("fig5_tangency_plus.csv", "fig5_tangency_minus.csv"):
        write_csv(d / name, "orbit", ORBIT_COLS, _orbit_rows(),
                  {**hdr, "mu_star": 0.1616})

    # figure 6: curves, points, one slice
    etas = np.linspace(-0.5, -0.05, 40)
    rows = []
    for kind, off in (("H", 0.0), ("S", -0.05), ("T+", 0.03), ("T-", 0.12)):
        for e in etas:
            rows.append((kind, 0.1 + off + 0.3 * (e + 0.5), e, 0.0, 0.0))
    # upper branch of H so each eta row has two Hopf crossings
    for e in etas[::-1]:
        rows.append(("H", 0.5 + 0.3 * (e + 0.5), e, 0.0, 0.0))
    write_csv(d / "fig6_curves.csv", "curve",
              ["kind", "mu", "eta", "aux1", "aux2"], rows, {"epsilon": 0.009})
    write_csv(d / "fig6_points.csv", "special_points", ["kind", "mu", "eta"],
              [("BT", 0.1, -0.5), ("N", 0.2, -0.3)], {"epsilon": 0.009})
    mus = np.linspace(0.05, 0.5, 50)
    write_csv(d / "fig6_branch_etam017.csv", "branch",
              ["mu", "x", "y", "rho", "stability", "detJ", "trJ"],
              [(m, 0.6, 0.3, -0.3, "stable" if m > 0.3 else "unstable", 0.5, -0.1)
               for m in mus], {"eta": -0.17, "epsilon": 0.009})
    write_csv(d / "fig6_orbits_etam017.csv", "orbit_family",
              ["mu", "rho_min", "rho_max", "period", "tag"],
              [(m, -0.35, -0.25, 5.0, "W") for m in mus[10:40]],
              {"eta": -0.17, "epsilon": 0.009})

    # figure 8: drift run
    t = np.linspace(0.0, 1000.0, 500)
    mu = 0.32 - 0.00021 * t
    rho = -0.17 + 0.05 * np.sin(t)
    write_csv(d / "fig8_drift.csv", "drift",
              ["t", "x", "y", "rho", "kappa", "zone", "mu"],
              [(ti, 0.6, 0.6 + ri, ri, 0.5, "S", mi)
               for ti, ri, mi in zip(t, rho, mu)],
              {**hdr, "eta": -0.17, "transition_T-": 51.65,
               "transition_T+": 754.24})

    # figure 9: two scans
    mus = np.round(np.linspace(0.05, 0.3, 6), 10)
    etas = np.round(np.linspace(-0.5, -0.1, 5), 10)
    rows = []
    for e in etas:
        for m in mus:
            tag = "W" if (0.1 < m < 0.25 and -0.4 < e < -0.2) else "EQUILIBRIUM"
            rows.append((m, e, tag, -0.4, -0.2))
    for eps_label in ("002", "0085"):
        write_csv(d / f"fig9_scan_eps{eps_label}.csv", "scan",
                  ["mu", "eta", "tag", "rho_min", "rho_max"], rows,
                  {"epsilon": "0.02"})
    return d
