"""Renderers for the standard figure set, one per figure id.

Each renderer consumes only exported CSV files from the given data
directory and returns a matplotlib Figure; it performs no numerics beyond
axis scaling and polygon assembly for shading. Colors follow the shared
convention: zones R1 blue, S gray, R2 red; oscillation classes P_S gray,
P_1 blue, P_2 red, W purple.
"""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .reader import Dataset, SchemaError, read_dataset

ZONE_COLORS = {"R1": "tab:blue", "S": "0.6", "R2": "tab:red", "boundary": "0.3"}
CLASS_COLORS = {
    "P_S": "0.7",
    "P_1": "tab:blue",
    "P_2": "tab:red",
    "W": "tab:purple",
    "EQUILIBRIUM": "white",
    "UNKNOWN": "1.0",
}
CURVE_STYLES = {
    "H": dict(color="k", lw=1.5),
    "S": dict(color="k", lw=1.5, ls="--"),
    "T+": dict(color="tab:red", lw=1.2),
    "T-": dict(color="tab:blue", lw=1.2),
}


def _path(data_dir, name):
    return os.path.join(data_dir, name)


def _zone_bands(ax, header, axis="y"):
    """Shade the switching zone between rho_minus and rho_plus if known."""
    lo, hi = header.get("rho_minus"), header.get("rho_plus")
    if lo is None or hi is None:
        return
    lo, hi = float(lo), float(hi)
    if axis == "y":
        ax.axhspan(lo, hi, color="0.9", zorder=0)
        ax.axhline(lo, color="0.5", lw=0.6)
        ax.axhline(hi, color="0.5", lw=0.6)
    else:
        ax.axvspan(lo, hi, color="0.9", zorder=0)
        ax.axvline(lo, color="0.5", lw=0.6)
        ax.axvline(hi, color="0.5", lw=0.6)


def _series_by_zone(ax, t, v, zones):
    """Plot a series broken into zone-colored segments."""
    zones = np.asarray(zones)
    start = 0
    for i in range(1, len(t) + 1):
        if i == len(t) or zones[i] != zones[start]:
            ax.plot(t[start:i], v[start:i], color=ZONE_COLORS[str(zones[start])], lw=1.0)
            start = i


def fig_2(data_dir):
    ts = read_dataset(_path(data_dir, "fig2_timeseries.csv"), "trajectory")
    loop = read_dataset(_path(data_dir, "fig2_orbit.csv"), "trajectory")
    fig, (ax_orbit, ax_series) = plt.subplots(
        1, 2, figsize=(9, 3.4), constrained_layout=True
    )
    eta = float(ts.header["eta"])
    ax_orbit.plot(loop["x"], loop["y"], color="k", lw=1.2)
    xs = np.linspace(min(loop["x"]), max(loop["x"]), 2)
    ax_orbit.plot(xs, xs + eta, color="0.5", lw=0.8, ls=":")
    ax_orbit.set_xlabel("x")
    ax_orbit.set_ylabel("y")
    ax_orbit.set_title("(a) limit cycle and switching line")
    ax_series.plot(ts["t"], ts["x"], label="x", color="tab:blue")
    ax_series.plot(ts["t"], ts["y"], label="y", color="tab:red")
    ax_series.set_xlabel("t")
    ax_series.legend(frameon=False, loc="upper right")
    ax_series.set_title("(b) time series")
    return fig


def fig_3(data_dir):
    prof = read_dataset(_path(data_dir, "fig3_exchange.csv"), "exchange_profile")
    zones = read_dataset(_path(data_dir, "fig3_zones.csv"), "zones_vs_epsilon")
    fig, (ax_a, ax_b, ax_c) = plt.subplots(
        1, 3, figsize=(10.5, 3.2), constrained_layout=True
    )
    ax_a.plot(prof["rho"], prof["kappa"], color="k", lw=1.3)
    _zone_bands(ax_a, prof.header, axis="x")
    ax_a.set_xlabel(r"$\rho$")
    ax_a.set_ylabel(r"$K(\rho)$")
    ax_a.set_title("(a) exchange profile")
    ax_b.plot(zones["epsilon"], zones["rho_minus"], color="tab:blue", label=r"$\rho_-$")
    ax_b.plot(zones["epsilon"], zones["rho_plus"], color="tab:red", label=r"$\rho_+$")
    ax_b.set_xlabel(r"$\epsilon$")
    ax_b.legend(frameon=False, loc="center right")
    ax_b.set_title("(b) zone boundaries")
    ax_c.plot(zones["epsilon"], zones["L_minus"], color="tab:blue", label=r"$L_-$")
    ax_c.plot(zones["epsilon"], zones["L_plus"], color="tab:red", label=r"$L_+$")
    ax_c.set_xlabel(r"$\epsilon$")
    ax_c.legend(frameon=False, loc="center right")
    ax_c.set_title("(c) exchange levels at the boundaries")
    return fig


def _orbit_three_panel(orbit: Dataset, title):
    fig = plt.figure(figsize=(10.5, 3.4), constrained_layout=True)
    ax_3d = fig.add_subplot(1, 3, 1, projection="3d")
    ax_k = fig.add_subplot(1, 3, 2)
    ax_r = fig.add_subplot(1, 3, 3)
    ax_3d.plot(orbit["x"], orbit["y"], orbit["kappa"], color="k", lw=1.0)
    ax_3d.view_init(elev=25, azim=-60)  # fixed camera
    ax_3d.set_xlabel("x")
    ax_3d.set_ylabel("y")
    ax_3d.set_zlabel(r"$K$")
    ax_3d.set_title("(a) orbit on the exchange surface")
    t = orbit["t"]
    _series_by_zone(ax_k, t, orbit["kappa"], orbit["zone"])
    ax_k.set_xlabel("t")
    ax_k.set_ylabel(r"$K_\epsilon$")
    ax_k.set_title("(b) exchange series")
    _series_by_zone(ax_r, t, orbit["rho"], orbit["zone"])
    _zone_bands(ax_r, orbit.header, axis="y")
    ax_r.set_xlabel("t")
    ax_r.set_ylabel(r"$\rho$")
    ax_r.set_title("(c) density series")
    fig.suptitle(title)
    return fig


def fig_4(data_dir):
    orbit = read_dataset(_path(data_dir, "fig4_orbit.csv"), "orbit")
    return _orbit_three_panel(orbit, "both-sided (W) oscillation")


def fig_5(data_dir):
    plus = read_dataset(_path(data_dir, "fig5_tangency_plus.csv"), "orbit")
    minus = read_dataset(_path(data_dir, "fig5_tangency_minus.csv"), "orbit")
    fig, axes = plt.subplots(1, 2, figsize=(9, 3.4), constrained_layout=True)
    for ax, ds, label in zip(axes, (plus, minus), ("T+", "T-")):
        _series_by_zone(ax, ds["t"], ds["rho"], ds["zone"])
        _zone_bands(ax, ds.header, axis="y")
        mu_star = float(ds.header.get("mu_star", "nan"))
        ax.set_xlabel("t")
        ax.set_ylabel(r"$\rho$")
        ax.set_title(f"grazing orbit {label}, $\\mu^* = {mu_star:.4f}$")
    return fig


def _crossings(poly, eta):
    out = [m for m, e in poly if e == eta]
    for (m0, e0), (m1, e1) in zip(poly[:-1], poly[1:]):
        if (e0 - eta) * (e1 - eta) < 0:
            out.append(m0 + (eta - e0) / (e1 - e0) * (m1 - m0))
    return sorted(out)


def _shade_classes(ax, curves, eta_grid):
    """Shade the four oscillation-class sub-regions between the curves.

    Per eta row the Hopf crossings bound the oscillatory interval and the
    first T+/T- crossings split it into P_1 / W / P_2 (or P_S where the
    tangency curves are absent).
    """
    polys = {k: np.column_stack((m, e)) for k, (m, e) in curves.items()}
    bands = {tag: [] for tag in ("P_1", "W", "P_2", "P_S")}
    for eta in eta_grid:
        h = _crossings(polys["H"], eta) if "H" in polys else []
        if len(h) < 2:
            continue
        tp = _crossings(polys.get("T+", np.empty((0, 2))), eta)
        tm = _crossings(polys.get("T-", np.empty((0, 2))), eta)
        lo, hi = h[0], h[-1]
        if tp and tm:
            bands["P_1"].append((eta, lo, min(tp[0], hi)))
            bands["W"].append((eta, min(tp[0], hi), min(tm[0], hi)))
            bands["P_2"].append((eta, min(tm[0], hi), hi))
        else:
            bands["P_S"].append((eta, lo, hi))
    for tag, rows in bands.items():
        if not rows:
            continue
        rows = np.asarray(rows)
        ax.fill_betweenx(rows[:, 0], rows[:, 1], rows[:, 2],
                         color=CLASS_COLORS[tag], alpha=0.35, lw=0, label=tag)


def fig_6(data_dir):
    curves_ds = read_dataset(_path(data_dir, "fig6_curves.csv"), "curve")
    points = read_dataset(_path(data_dir, "fig6_points.csv"), "special_points")
    fig, axes = plt.subplots(1, 4, figsize=(13, 3.2), constrained_layout=True)
    ax_plane = axes[0]
    kinds = np.asarray(curves_ds["kind"])
    curves = {}
    for kind in dict.fromkeys(kinds):
        sel = kinds == kind
        curves[str(kind)] = (curves_ds["mu"][sel], curves_ds["eta"][sel])
    eta_all = curves_ds["eta"]
    _shade_classes(ax_plane, curves, np.linspace(eta_all.min(), eta_all.max(), 120))
    for kind, (mu, eta) in curves.items():
        ax_plane.plot(mu, eta, label=kind, **CURVE_STYLES.get(kind, {}))
    ax_plane.plot(points["mu"], points["eta"], "ko", ms=4)
    for kind, mu, eta in zip(points["kind"], points["mu"], points["eta"]):
        ax_plane.annotate(str(kind), (mu, eta), textcoords="offset points",
                          xytext=(4, 3), fontsize=8)
    ax_plane.set_xlabel(r"$\mu$")
    ax_plane.set_ylabel(r"$\eta$")
    ax_plane.set_title("(a) two-parameter diagram")
    ax_plane.legend(frameon=False, fontsize=7, loc="lower right")

    slice_files = sorted(
        f for f in os.listdir(data_dir)
        if f.startswith("fig6_branch_eta") and f.endswith(".csv")
    )
    for ax, fname in zip(axes[1:], slice_files):
        branch = read_dataset(_path(data_dir, fname), "branch")
        label = fname[len("fig6_branch_"):-len(".csv")]
        stab = np.asarray(branch["stability"])
        for style, sel in (("-", stab == "stable"), (":", stab != "stable")):
            ax.plot(np.where(sel, branch["mu"], np.nan), branch["rho"],
                    color="k", ls=style, lw=1.0)
        orb_name = fname.replace("branch", "orbits")
        if os.path.exists(_path(data_dir, orb_name)):
            fam = read_dataset(_path(data_dir, orb_name), "orbit_family")
            ax.plot(fam["mu"], fam["rho_min"], color="tab:blue", lw=1.0)
            ax.plot(fam["mu"], fam["rho_max"], color="tab:red", lw=1.0)
        ax.set_xlabel(r"$\mu$")
        ax.set_ylabel(r"$\rho$")
        ax.set_title(f"slice {label}")
    return fig


def fig_7(data_dir):
    names = ("fig7_PS.csv", "fig7_P1.csv", "fig7_P2.csv")
    labels = ("P_S", "P_1", "P_2")
    fig, axes = plt.subplots(1, 3, figsize=(10.5, 3.2), constrained_layout=True)
    for ax, name, label in zip(axes, names, labels):
        ds = read_dataset(_path(data_dir, name), "orbit")
        _series_by_zone(ax, ds["t"], ds["rho"], ds["zone"])
        _zone_bands(ax, ds.header, axis="y")
        ax.set_xlabel("t")
        ax.set_ylabel(r"$\rho$")
        ax.set_title(label, color=CLASS_COLORS[label])
    return fig


def fig_8(data_dir):
    ds = read_dataset(_path(data_dir, "fig8_drift.csv"), "drift")
    fig, (ax_r, ax_m) = plt.subplots(
        2, 1, figsize=(9, 4.6), sharex=True, constrained_layout=True,
        height_ratios=[3, 1],
    )
    ax_r.plot(ds["t"], ds["rho"], color="k", lw=0.5)
    _zone_bands(ax_r, ds.header, axis="y")
    for key, color in (("transition_T-", "tab:blue"), ("transition_T+", "tab:red")):
        if key in ds.header:
            t = float(ds.header[key])
            for ax in (ax_r, ax_m):
                ax.axvline(t, color=color, lw=1.0, ls="--")
            ax_r.annotate(key.split("_")[1], (t, ax_r.get_ylim()[1]),
                          fontsize=8, color=color)
    ax_r.set_ylabel(r"$\rho$")
    ax_m.plot(ds["t"], ds["mu"], color="k", lw=1.0)
    ax_m.set_xlabel("t")
    ax_m.set_ylabel(r"$\mu$")
    return fig


def fig_9(data_dir):
    files = sorted(
        f for f in os.listdir(data_dir)
        if f.startswith("fig9_scan_eps") and f.endswith(".csv")
    )
    if not files:
        raise SchemaError(f"no fig9_scan_eps*.csv files in {data_dir}")
    fig, axes = plt.subplots(
        2, 2, figsize=(8.6, 7.2), constrained_layout=True
    )
    order = ["EQUILIBRIUM", "P_S", "P_1", "P_2", "W", "UNKNOWN"]
    cmap = matplotlib.colors.ListedColormap(
        [CLASS_COLORS[t] for t in order]
    )
    for ax, fname in zip(axes.ravel(), files):
        ds = read_dataset(_path(data_dir, fname), "scan")
        mus = np.unique(ds["mu"])
        etas = np.unique(ds["eta"])
        idx = np.array([order.index(str(t)) for t in ds["tag"]])
        grid = idx.reshape(len(etas), len(mus))
        ax.pcolormesh(mus, etas, grid, cmap=cmap, vmin=-0.5, vmax=len(order) - 0.5)
        eps = ds.header.get("epsilon", "?")
        ax.set_title(f"$\\epsilon = {eps}$")
        ax.set_xlabel(r"$\mu$")
        ax.set_ylabel(r"$\eta$")
    for ax in axes.ravel()[len(files):]:
        ax.set_axis_off()
    return fig


RENDERERS = {2: fig_2, 3: fig_3, 4: fig_4, 5: fig_5, 6: fig_6, 7: fig_7, 8: fig_8, 9: fig_9}
