"""Command-line front end.

Subcommands: spectrum, fit, t1, switch, resonator, oracle.  Each writes its
files into ``--out`` and prints a short report on stdout.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import dataio, langevin, plotting
from .analysis import relaxation_time, sweep_spectrum, switch_scan
from .config import RunConfig, parse_config
from .errors import ConfigError, ConvergenceError, DataError, DomainError, NumericError, SingularityError
from .fitting import MODEL_PARAMS, FitProblem, fit, model_transmission
from .resonator import resonator_decay, resonator_transmission
from .scatter import effective_coupling

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CONFIG = 3
EXIT_DATA = 4
EXIT_NUMERIC = 5
EXIT_NONCONVERGED = 6


def _grid_arg(text):
    try:
        lo, hi, n = text.split(":")
        lo, hi, n = float(lo), float(hi), int(n)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi:n, got {text!r}") from None
    if not (0 < lo < hi) or n < 1:
        raise argparse.ArgumentTypeError(f"need 0 < lo < hi and n >= 1, got {text!r}")
    return lo, hi, n


def _scan_arg(text):
    try:
        lo, hi = (float(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi, got {text!r}") from None
    if not 0 < lo < hi:
        raise argparse.ArgumentTypeError(f"need 0 < lo < hi, got {text!r}")
    return lo, hi


def _grid(args, cfg: RunConfig, default):
    if args.grid is not None:
        lo, hi, n = args.grid
    elif cfg.grid:
        lo, hi, n = cfg.grid["lo"], cfg.grid["hi"], cfg.grid.get("n", 401)
    else:
        lo, hi, n = default
    return np.linspace(lo, hi, n)


def _default_window(geometry, n=401, span=10.0):
    gc = abs(complex(effective_coupling(geometry, geometry.omega0)))
    w = span * (geometry.gamma0 + gc) or 1e-3
    return max(geometry.omega0 - w, 1e-9), geometry.omega0 + w, n


def _model_values(cfg: RunConfig, mode):
    geometry = cfg.geometry()
    mu, phi = cfg.mu_phi()
    values = dict(omega0=geometry.omega0, gamma0=geometry.gamma0, gamma=float(geometry.rates[0]), mu=mu, phi=phi)
    if mode == "lorentzian":
        values["gamma_eff"] = abs(complex(effective_coupling(geometry, geometry.omega0)))
    values.update(cfg.fit.get("initial", {}))
    return geometry, {k: v for k, v in values.items() if k in MODEL_PARAMS[mode]}


def _out(args) -> Path:
    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise DataError(f"cannot create output directory {out}: {exc}") from None
    return out


# ---- subcommands --------------------------------------------------------

def cmd_spectrum(args, cfg):
    mode = args.mode or cfg.fit.get("mode", "mioa")
    geometry, values = _model_values(cfg, mode)
    grid = _grid(args, cfg, _default_window(geometry))
    if mode == "mioa" and cfg.channel.get("kind") != "direct":
        t = sweep_spectrum(geometry, cfg.channel_obj(), grid).transmission
    else:
        t = model_transmission(values, geometry, grid, mode)
    out = _out(args)
    dataio.write_overlay(out / "spectrum.csv", grid, t)
    plotting.overlay(out / "spectrum.svg", grid, t, title=f"{mode} transmission")
    print(f"spectrum: {len(grid)} points, T in [{t.min():.6g}, {t.max():.6g}] -> {out}")
    return EXIT_OK


def cmd_fit(args, cfg):
    if args.data is None:
        raise ConfigError("fit needs --data", key="data")
    mode = args.mode or cfg.fit.get("mode", "mioa")
    data = dataio.ingest_spectrum(args.data, db=args.db)
    geometry, values = _model_values(cfg, mode)
    free = [n for n in cfg.fit.get("free", ["gamma0", "mu", "phi"]) if n in MODEL_PARAMS[mode]]
    bounds = {k: tuple(v) for k, v in cfg.fit.get("bounds", {}).items()}
    problem = FitProblem.build(mode, data, geometry, values, free=free, bounds=bounds)
    result = fit(problem, max_iter=cfg.fit.get("max_iter", 500), n_starts=cfg.fit.get("starts", 1), seed=args.seed)
    model = model_transmission(result.estimates, geometry, data.frequency, mode)
    out = _out(args)
    dataio.write_overlay(out / "fit.csv", data.frequency, model, data.transmission)
    plotting.overlay(out / "fit.svg", data.frequency, model, data.transmission, title=f"{mode} fit")
    err = result.stderr()
    entries = [("model", mode), ("points", len(data)), ("weighted", data.sigma is not None),
               ("converged", result.converged), ("method", result.method), ("iterations", result.iterations),
               ("rmse", result.rmse), ("cost", result.cost)]
    for name in MODEL_PARAMS[mode]:
        tag = f" +- {err[name]:.4g}" if name in err else " (fixed)"
        entries.append((name, f"{result.estimates[name]:.10g}{tag}"))
    if mode != "lorentzian":
        cfg_fit = geometry.replace(omega0=result.estimates["omega0"])
        gc = abs(complex(effective_coupling(cfg_fit, result.estimates["omega0"])))
        entries.append(("gamma_c(omega0)", gc))
        entries.append(("T1 (us)", relaxation_time(result.estimates["gamma0"], gc)))
    print(dataio.write_report(out / "fit_report.txt", "fit report", entries), end="")
    return EXIT_OK if result.converged else EXIT_NONCONVERGED


def cmd_t1(args, cfg):
    if args.gamma0 is not None and args.gamma_c is not None:
        g0, gc = args.gamma0, args.gamma_c
    else:
        geometry = cfg.geometry()
        g0 = geometry.gamma0 if args.gamma0 is None else args.gamma0
        gc = abs(complex(effective_coupling(geometry, geometry.omega0))) if args.gamma_c is None else args.gamma_c
    t1 = relaxation_time(g0, gc)
    entries = [("gamma0 (GHz)", g0), ("gamma_c (GHz)", gc), ("T1 (us)", t1)]
    if args.out:
        print(dataio.write_report(_out(args) / "t1_report.txt", "relaxation time", entries), end="")
    else:
        print(f"T1 = {t1:.6g} us  (gamma0 = {g0:.6g} GHz, gamma_c = {gc:.6g} GHz)")
    return EXIT_OK


def cmd_switch(args, cfg):
    geometry = cfg.geometry()
    if args.scan is not None:
        scan = args.scan
    elif "lo" in cfg.switch and "hi" in cfg.switch:
        scan = (cfg.switch["lo"], cfg.switch["hi"])
    else:
        raise ConfigError("switch needs --scan or [switch] lo/hi", key="scan")
    tol = cfg.switch.get("tolerance", 1e-9)
    res = switch_scan(geometry, cfg.channel_obj(), scan, tolerance=tol)
    out = _out(args)
    dataio.write_table(out / "switch.csv", ["omega0_ghz", "gamma_c_ghz", "t_carrier"],
                       [res.omega0_grid, res.gamma_c_values, res.transmission_at_carrier])
    plotting.switch_figure(out / "switch.svg", res.omega0_grid, res.gamma_c_values, res.transmission_at_carrier,
                           res.ioa_roots, [p.frequency for p in res.mioa_roots])
    entries = [("scan (GHz)", f"{scan[0]:g}..{scan[1]:g}"),
               ("ioa roots (GHz)", ", ".join(f"{r:.6f}" for r in res.ioa_roots) or "none"),
               ("mioa roots (GHz)", ", ".join(f"{p.frequency:.6f}" for p in res.mioa_roots) or "none"),
               ("mioa T at roots", ", ".join(f"{p.transmission:.6f}" for p in res.mioa_roots) or "none")]
    print(dataio.write_report(out / "switch_report.txt", "switch frequencies", entries), end="")
    return EXIT_OK


def cmd_resonator(args, cfg):
    rc = cfg.resonator_obj()
    grid = _grid(args, cfg, (rc.omega_c * (1 - 1e-3), rc.omega_c * (1 + 1e-3), 401))
    amp = resonator_transmission(rc, grid)
    t = np.abs(amp) ** 2
    out = _out(args)
    dataio.write_overlay(out / "resonator.csv", grid, t)
    plotting.overlay(out / "resonator.svg", grid, t, title="resonator transmission")
    entries = [("gamma_D at omega_c (GHz)", resonator_decay(rc, rc.omega_c)),
               ("phase mode", rc.phase_mode), ("T min", float(t.min())), ("T max", float(t.max()))]
    print(dataio.write_report(out / "resonator_report.txt", "resonator", entries), end="")
    return EXIT_OK


def cmd_oracle(args, cfg):
    geometry = cfg.geometry()
    o = cfg.oracle
    amp = o.get("amplitude", 1.0)
    amp = complex(*amp) if isinstance(amp, list) else complex(amp)
    dets = langevin.detuning_grid(geometry, o.get("points", 41), o.get("span", 10.0))
    rows = langevin.compare(geometry, dets, amp, o.get("tolerance", 1e-12), o.get("horizon"))
    d, sf, st, dev, ts = (list(c) for c in zip(*rows))
    out = _out(args)
    dataio.write_table(out / "oracle.csv",
                       ["detuning_ghz", "freq_re", "freq_im", "time_re", "time_im", "rel_dev", "settle_ns"],
                       [d, [z.real for z in sf], [z.imag for z in sf], [z.real for z in st], [z.imag for z in st], dev, ts])
    plotting.oracle_figure(out / "oracle.svg", d, np.abs(sf), np.abs(st), dev)
    entries = [("points", len(d)), ("max relative deviation", max(dev)), ("max settle time (ns)", max(ts))]
    print(dataio.write_report(out / "oracle_report.txt", "time-domain oracle", entries), end="")
    return EXIT_OK


COMMANDS = {
    "spectrum": cmd_spectrum,
    "fit": cmd_fit,
    "t1": cmd_t1,
    "switch": cmd_switch,
    "resonator": cmd_resonator,
    "oracle": cmd_oracle,
}


def build_parser():
    parser = argparse.ArgumentParser(prog="giantatom", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=name != "t1", help="TOML run configuration")
        p.add_argument("--out", default=None if name == "t1" else "out", help="output directory")
        p.add_argument("--seed", type=int, default=0, help="seed for multi-start perturbations")
        if name in ("spectrum", "resonator"):
            p.add_argument("--grid", type=_grid_arg, help="frequency grid lo:hi:n in GHz")
        if name in ("spectrum", "fit"):
            p.add_argument("--mode", choices=sorted(MODEL_PARAMS), help="model (default from config)")
        if name == "fit":
            p.add_argument("--data", help="delimited spectrum file")
            p.add_argument("--db", action="store_true", help="transmission column is in dB")
        if name == "switch":
            p.add_argument("--scan", type=_scan_arg, help="omega0 window lo:hi in GHz")
        if name == "t1":
            p.add_argument("--gamma0", type=float, help="intrinsic loss (GHz)")
            p.add_argument("--gamma-c", type=float, dest="gamma_c", help="effective coupling (GHz)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = parse_config(args.config) if args.config else RunConfig()
        return COMMANDS[args.command](args, cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ConvergenceError as exc:
        print(f"not converged: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGED
    except (NumericError, SingularityError, DomainError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
