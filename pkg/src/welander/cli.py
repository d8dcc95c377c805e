"""Command-line front end: configuration, experiments, figure-data export.

Subcommands map 1:1 onto library operations and write self-describing CSV
files. Configuration values resolve with precedence: command-line flags,
then config-file values, then built-in defaults. The resolved configuration
is echoed into every output header.
"""

from __future__ import annotations

import argparse
import configparser
import os
import sys

import numpy as np

from . import io as wio
from .errors import ConfigError, WelanderError
from .model import ModelParams, find_equilibria, switching_zone

ENV_OUT = "WELANDER_OUT"

MODEL_DEFAULTS = {"mu": 0.14, "eta": -0.3, "epsilon": 0.009, "kappa1": 0.1, "kappa2": 1.0}

COMMAND_DEFAULTS = {
    "simulate": {"x0": 0.5, "y0": 0.2, "t_end": 100.0, "rel_tol": 1e-9, "abs_tol": 1e-11},
    "zones": {},
    "equilibria": {"mu_min": 0.02, "mu_max": 0.6},
    "orbit": {"anchor": ""},
    "curves": {"which": "H,S", "probe_snic": False},
    "scan": {
        "mu_min": np.nan, "mu_max": np.nan, "eta_min": np.nan, "eta_max": np.nan,
        "n_mu": 21, "n_eta": 21, "workers": 0,
    },
    "drift": {"mu_start": 0.32, "mu_end": 0.11, "rate": 0.001, "annotate_tangencies": True},
    "figure": {},
}


class ExperimentConfig:
    """Resolved settings for one command invocation."""

    def __init__(self, command, params: ModelParams, settings: dict, out: str):
        self.command = command
        self.params = params
        self.settings = settings
        self.out = out

    def header(self) -> dict:
        hdr = {"command": self.command, "out": self.out}
        hdr.update({f"config_{k}": v for k, v in sorted(self.settings.items())})
        return hdr

    def path(self, name: str) -> str:
        return os.path.join(self.out, name)


def _coerce(raw: str, like):
    if isinstance(like, bool):
        low = raw.strip().lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"expected a boolean, got {raw!r}")
    if isinstance(like, float):
        return float(raw)
    if isinstance(like, int):
        return int(raw)
    return raw


def load_config(path: str) -> dict:
    """Parse a sectioned key=value config file; strict about unknown keys."""
    parser = configparser.ConfigParser()
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except configparser.Error as exc:
        raise ConfigError(f"config parse error in {path}: {exc}") from exc
    known = {"model": MODEL_DEFAULTS, **COMMAND_DEFAULTS}
    out: dict = {}
    for section in parser.sections():
        if section not in known:
            raise ConfigError(f"unknown config section [{section}] in {path}")
        out[section] = {}
        for key, raw in parser.items(section):
            if key not in known[section]:
                raise ConfigError(f"unknown key '{key}' in section [{section}] of {path}")
            try:
                out[section][key] = _coerce(raw, known[section][key])
            except (ValueError, ConfigError) as exc:
                raise ConfigError(
                    f"bad value for '{key}' in section [{section}] of {path}: {exc}"
                ) from exc
    return out


def _resolve(args) -> ExperimentConfig:
    file_cfg = load_config(args.config) if args.config else {}
    model = dict(MODEL_DEFAULTS)
    model.update(file_cfg.get("model", {}))
    for k in model:
        v = getattr(args, k, None)
        if v is not None:
            model[k] = v
    settings = dict(COMMAND_DEFAULTS.get(args.command, {}))
    settings.update(file_cfg.get(args.command, {}))
    for k in settings:
        v = getattr(args, k, None)
        if v is not None:
            settings[k] = v
    out = args.out or os.environ.get(ENV_OUT) or "."
    params = ModelParams(**model)
    flat = {**model, **settings}
    return ExperimentConfig(args.command, params, flat, out)


# ---------------------------------------------------------------------------
# commands

def cmd_simulate(cfg: ExperimentConfig):
    from .dynamics import simulate
    from .filippov import filippov_simulate

    s = cfg.settings
    initial = (s["x0"], s["y0"])
    if cfg.params.epsilon == 0.0:
        traj = filippov_simulate(cfg.params, initial, s["t_end"])
    else:
        traj = simulate(cfg.params, initial, s["t_end"], s["rel_tol"], s["abs_tol"])
    wio.trajectory_csv(cfg.path("trajectory.csv"), traj, cfg.header())
    wio.events_csv(cfg.path("events.csv"), traj, cfg.header())
    print(f"wrote {cfg.path('trajectory.csv')} ({traj.times.size} samples, "
          f"{len(traj.events)} events)")


def cmd_zones(cfg: ExperimentConfig):
    z = switching_zone(cfg.params)
    print(f"rho_minus={z.rho_minus!r}")
    print(f"rho_plus={z.rho_plus!r}")
    print(f"L_minus={z.L_minus!r}")
    print(f"L_plus={z.L_plus!r}")


def cmd_equilibria(cfg: ExperimentConfig):
    from .continuation import continue_equilibria

    s = cfg.settings
    branch = continue_equilibria(cfg.params, (s["mu_min"], s["mu_max"]))
    wio.branch_csv(cfg.path("branch.csv"), branch, cfg.header())
    wio.branch_markers_csv(cfg.path("branch_markers.csv"), branch, cfg.header())
    print(f"wrote {cfg.path('branch.csv')} ({len(branch.points)} points, "
          f"{len(branch.folds)} folds, {len(branch.hopfs)} hopf markers)")


def cmd_orbit(cfg: ExperimentConfig):
    from .dynamics import PeriodicAttractor, find_attractor
    from .orbits import anchor_phase, solve_periodic_bvp

    att = find_attractor(cfg.params)
    if not isinstance(att, PeriodicAttractor):
        raise WelanderError(
            f"attractor at mu={cfg.params.mu}, eta={cfg.params.eta} is an equilibrium"
        )
    orbit = solve_periodic_bvp(cfg.params, att)
    anchor = cfg.settings["anchor"]
    hdr = cfg.header()
    if anchor:
        anchored = anchor_phase(orbit, anchor)
        orbit = anchored.orbit
        hdr["anchor"] = anchor
    wio.orbit_csv(cfg.path("orbit.csv"), orbit, header=hdr)
    print(f"wrote {cfg.path('orbit.csv')} (period {orbit.period!r})")


def cmd_curves(cfg: ExperimentConfig):
    from .continuation import flag_snic, fold_curve, hopf_curve, intersect_curves
    from .continuation import SpecialPoint
    from .orbits import tangency_curve

    eps = cfg.params.epsilon
    which = [w.strip() for w in cfg.settings["which"].split(",") if w.strip()]
    curves = {}
    for w in which:
        if w == "H":
            curves[w] = hopf_curve(eps, kappa1=cfg.params.kappa1, kappa2=cfg.params.kappa2)
        elif w == "S":
            curves[w] = fold_curve(eps, kappa1=cfg.params.kappa1, kappa2=cfg.params.kappa2)
        elif w in ("T+", "T-"):
            curves[w] = tangency_curve(w, eps)
        else:
            raise ConfigError(f"unknown curve kind {w!r}; expected H, S, T+ or T-")
    if "H" in curves and "S" in curves:
        bt = [(sp.mu, sp.eta) for c in curves.values() for sp in c.special_points]
        for c in intersect_curves(curves["H"], curves["S"]):
            if all(np.hypot(c[0] - m, c[1] - e) > 1e-3 for m, e in bt):
                sp = SpecialPoint("N", float(c[0]), float(c[1]))
                curves["H"].special_points.append(sp)
                curves["S"].special_points.append(sp)
    if "S" in curves and cfg.settings["probe_snic"]:
        curves["S"] = flag_snic(curves["S"], eps)
    wio.curve_csv(cfg.path("curves.csv"), list(curves.values()), cfg.header())
    wio.special_points_csv(cfg.path("special_points.csv"), list(curves.values()), cfg.header())
    print(f"wrote {cfg.path('curves.csv')} ({', '.join(which)})")


def _scan_window(cfg: ExperimentConfig):
    from .atlas import hopf_window

    s = cfg.settings
    given = [s["mu_min"], s["mu_max"], s["eta_min"], s["eta_max"]]
    if all(np.isfinite(v) for v in given):
        return (s["mu_min"], s["mu_max"]), (s["eta_min"], s["eta_max"])
    win = hopf_window(cfg.params.epsilon)
    if win is None:
        raise WelanderError(
            f"no oscillation window exists at epsilon={cfg.params.epsilon}; "
            "give explicit scan ranges"
        )
    return win


def cmd_scan(cfg: ExperimentConfig):
    from .atlas import region_scan

    s = cfg.settings
    mu_range, eta_range = _scan_window(cfg)
    scan = region_scan(mu_range, eta_range, s["n_mu"], s["n_eta"], cfg.params.epsilon)
    wio.scan_csv(cfg.path("scan.csv"), scan, cfg.header())
    wio.boundaries_csv(cfg.path("scan_boundaries.csv"), scan, cfg.header())
    tags, counts = np.unique(scan.tags, return_counts=True)
    print(f"wrote {cfg.path('scan.csv')} "
          f"({', '.join(f'{t}:{c}' for t, c in zip(tags, counts))})")


def _tangency_mus(params: ModelParams) -> dict:
    from .errors import ConvergenceError
    from .orbits import detect_tangency

    out = {}
    for kind, mu_seed in (("T-", 0.28), ("T+", 0.18)):
        try:
            out[kind] = detect_tangency(params.replace(mu=mu_seed), kind).mu
        except (WelanderError, ConvergenceError):
            pass
    return out


def cmd_drift(cfg: ExperimentConfig):
    from .atlas import run_drift
    from .dynamics import PeriodicAttractor, find_attractor

    s = cfg.settings
    p0 = cfg.params.replace(mu=s["mu_start"])
    att = find_attractor(p0)
    initial = att.states[0] if isinstance(att, PeriodicAttractor) else att.state.as_array()
    tangies = _tangency_mus(cfg.params) if s["annotate_tangencies"] else None
    run = run_drift(
        cfg.params, s["mu_start"], s["mu_end"], s["rate"], initial, tangency_mus=tangies
    )
    wio.drift_csv(cfg.path("drift.csv"), run, cfg.header())
    print(f"wrote {cfg.path('drift.csv')} (transitions: {run.transitions})")


# ---------------------------------------------------------------------------
# figure-data regeneration (parameter values from the source figure captions)

def _fig_2(cfg):
    from .filippov import filippov_simulate, return_map_fixed_point

    p = ModelParams(mu=0.219, eta=-0.17, epsilon=0.0)
    pt, period, deriv = return_map_fixed_point(p)
    hdr = {**cfg.header(), "period": period, "return_map_derivative": deriv}
    traj = filippov_simulate(p, pt.state(p), 3.0 * period)
    wio.trajectory_csv(cfg.path("fig2_timeseries.csv"), traj, hdr)
    loop = filippov_simulate(p, pt.state(p), period)
    wio.trajectory_csv(cfg.path("fig2_orbit.csv"), loop, hdr)


def _fig_3(cfg):
    from .model import exchange

    p = ModelParams(mu=0.14, eta=-0.17, epsilon=0.02)
    z = switching_zone(p)
    rho = np.linspace(p.eta - 10 * p.epsilon, p.eta + 10 * p.epsilon, 1001)
    hdr = {**cfg.header(), "eta": p.eta, "epsilon": p.epsilon,
           "rho_minus": z.rho_minus, "rho_plus": z.rho_plus}
    wio.write_csv(
        cfg.path("fig3_exchange.csv"), "exchange_profile", ["rho", "kappa"],
        zip(rho, np.asarray(exchange(p, rho))), hdr,
    )
    rows = []
    for eps in np.linspace(0.0, 0.3, 121):
        zz = switching_zone(p.replace(epsilon=float(eps)))
        rows.append((eps, zz.rho_minus, zz.rho_plus, zz.L_minus, zz.L_plus))
    wio.write_csv(
        cfg.path("fig3_zones.csv"), "zones_vs_epsilon",
        ["epsilon", "rho_minus", "rho_plus", "L_minus", "L_plus"], rows,
        {**cfg.header(), "eta": p.eta},
    )


def _orbit_file(cfg, name, mu, eta, epsilon=0.009, extra=None):
    from .dynamics import find_attractor
    from .orbits import solve_periodic_bvp

    p = ModelParams(mu=mu, eta=eta, epsilon=epsilon)
    orbit = solve_periodic_bvp(p, find_attractor(p))
    wio.orbit_csv(cfg.path(name), orbit, header={**cfg.header(), **(extra or {})})
    return orbit


def _fig_4(cfg):
    _orbit_file(cfg, "fig4_orbit.csv", 0.14, -0.3)


def _fig_5(cfg):
    from .orbits import detect_tangency

    for kind, seed, name in (("T+", 0.18, "fig5_tangency_plus.csv"),
                             ("T-", 0.28, "fig5_tangency_minus.csv")):
        tp = detect_tangency(ModelParams(mu=seed, eta=-0.17, epsilon=0.009), kind)
        wio.orbit_csv(
            cfg.path(name), tp.orbit.orbit,
            header={**cfg.header(), "kind": kind, "mu_star": tp.mu},
        )


def _fig_6(cfg):
    from .atlas import classify
    from .continuation import bifurcation_diagram, continue_equilibria
    from .orbits import tangency_curve

    diagram = bifurcation_diagram(0.009)
    curves = [diagram["H"], diagram["S"]]
    for kind in ("T+", "T-"):
        curves.append(tangency_curve(kind, 0.009))
    wio.curve_csv(cfg.path("fig6_curves.csv"), curves, cfg.header())
    wio.special_points_csv(cfg.path("fig6_points.csv"), curves, cfg.header())

    H = diagram["H"].mu_eta()
    for eta in (-0.05, -0.17, -0.3):
        label = f"{eta:+.2f}".replace("+", "p").replace("-", "m").replace(".", "")
        p = ModelParams(mu=0.1, eta=eta, epsilon=0.009)
        branch = continue_equilibria(p, (0.02, 0.55))
        wio.branch_csv(cfg.path(f"fig6_branch_eta{label}.csv"), branch, cfg.header())
        cross = []
        for (m0, e0), (m1, e1) in zip(H[:-1], H[1:]):
            if (e0 - eta) * (e1 - eta) <= 0 and e0 != e1:
                cross.append(m0 + (eta - e0) / (e1 - e0) * (m1 - m0))
        rows = []
        if len(cross) >= 2:
            lo, hi = min(cross), max(cross)
            for mu in np.arange(lo + 0.005, hi, 0.01):
                c = classify(p.replace(mu=float(mu)), settle_time=300.0, max_time=2000.0)
                if c.tag != "EQUILIBRIUM":
                    rows.append((mu, c.rho_min, c.rho_max, c.period, c.tag))
        wio.write_csv(
            cfg.path(f"fig6_orbits_eta{label}.csv"), "orbit_family",
            ["mu", "rho_min", "rho_max", "period", "tag"], rows,
            {**cfg.header(), "eta": eta, "epsilon": 0.009},
        )


def _fig_7(cfg):
    for name, mu, eta in (("fig7_PS.csv", 0.32, -0.05),
                          ("fig7_P1.csv", 0.11, -0.17),
                          ("fig7_P2.csv", 0.32, -0.17)):
        _orbit_file(cfg, name, mu, eta)


def _fig_8(cfg):
    from .atlas import run_drift
    from .dynamics import find_attractor

    p = ModelParams(mu=0.32, eta=-0.17, epsilon=0.009)
    att = find_attractor(p)
    run = run_drift(p, 0.32, 0.11, 0.001, att.states[0], tangency_mus=_tangency_mus(p))
    wio.drift_csv(cfg.path("fig8_drift.csv"), run, cfg.header())


def _fig_9(cfg):
    from .atlas import hopf_window, region_scan

    for eps in (0.02, 0.041, 0.085, 0.11):
        win = hopf_window(eps)
        scan = region_scan(
            win[0], win[1], 21, 21, eps, settle_time=300.0, max_time=2000.0
        )
        label = repr(eps).replace(".", "")
        wio.scan_csv(cfg.path(f"fig9_scan_eps{label}.csv"), scan, cfg.header())
        wio.boundaries_csv(cfg.path(f"fig9_boundaries_eps{label}.csv"), scan, cfg.header())


FIGURES = {2: _fig_2, 3: _fig_3, 4: _fig_4, 5: _fig_5, 6: _fig_6, 7: _fig_7, 8: _fig_8, 9: _fig_9}


def cmd_figure(cfg: ExperimentConfig):
    n = cfg.settings["number"]
    FIGURES[n](cfg)
    print(f"wrote figure-{n} data to {cfg.out}")


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="welander",
        description="Two-box vertical-mixing model: simulation, continuation, scans.",
    )
    p.add_argument("--config", help="configuration file (sections per subcommand)")
    p.add_argument("--out", help=f"output directory (default: ${ENV_OUT} or '.')")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, **kw):
        sp = sub.add_parser(name, **kw)
        for k in MODEL_DEFAULTS:
            sp.add_argument(f"--{k.replace('_', '-')}", type=float, default=None)
        return sp

    sp = add("simulate", help="integrate the model and export the trajectory")
    sp.add_argument("--x0", type=float, default=None)
    sp.add_argument("--y0", type=float, default=None)
    sp.add_argument("--t-end", dest="t_end", type=float, default=None)
    sp.add_argument("--rel-tol", dest="rel_tol", type=float, default=None)
    sp.add_argument("--abs-tol", dest="abs_tol", type=float, default=None)

    add("zones", help="print the switching-zone boundaries rho+- and L+-")

    sp = add("equilibria", help="equilibrium branch over a mu range")
    sp.add_argument("--mu-min", dest="mu_min", type=float, default=None)
    sp.add_argument("--mu-max", dest="mu_max", type=float, default=None)

    sp = add("orbit", help="periodic orbit at fixed parameters (collocation)")
    sp.add_argument("--anchor", choices=["L-", "L+"], default=None)

    sp = add("curves", help="two-parameter bifurcation and tangency curves")
    sp.add_argument("--which", default=None, help="comma list from H,S,T+,T-")
    sp.add_argument("--probe-snic", dest="probe_snic", action="store_true", default=None)

    sp = add("scan", help="classify attractors on a (mu, eta) grid")
    for k in ("mu_min", "mu_max", "eta_min", "eta_max"):
        sp.add_argument(f"--{k.replace('_', '-')}", dest=k, type=float, default=None)
    sp.add_argument("--n-mu", dest="n_mu", type=int, default=None)
    sp.add_argument("--n-eta", dest="n_eta", type=int, default=None)
    sp.add_argument("--workers", type=int, default=None)

    sp = add("drift", help="slow linear ramp in mu (nonautonomous run)")
    sp.add_argument("--mu-start", dest="mu_start", type=float, default=None)
    sp.add_argument("--mu-end", dest="mu_end", type=float, default=None)
    sp.add_argument("--rate", type=float, default=None)

    sp = add("figure", help="regenerate the data behind a source figure")
    sp.add_argument("number", type=int, choices=sorted(FIGURES))
    return p


COMMANDS = {
    "simulate": cmd_simulate,
    "zones": cmd_zones,
    "equilibria": cmd_equilibria,
    "orbit": cmd_orbit,
    "curves": cmd_curves,
    "scan": cmd_scan,
    "drift": cmd_drift,
    "figure": cmd_figure,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _resolve(args)
        if args.command == "figure":
            cfg.settings["number"] = args.number
        COMMANDS[args.command](cfg)
    except (WelanderError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
