"""Strict TOML run configuration.

Every section and key is declared in ``SCHEMA``; anything else is rejected
with a message naming the offending key.  ``dump_config`` writes a parsed
configuration back out so that ``parse(dump(cfg)) == cfg``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

import tomli
import tomli_w

from .errors import ConfigError
from .fitting import MODEL_PARAMS
from .resonator import ResonatorConfig, TabulatedDensity
from .scatter import Cavity, CouplingPoint, Direct, GiantAtomConfig, Medium, cavity_to_mu_phi


def _num(v):
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def _nonneg(v):
    return _num(v) and v >= 0


def _pos(v):
    return _num(v) and v > 0


def _finite(v):
    return _num(v) and math.isfinite(v)


def _pos_int(v):
    return isinstance(v, int) and not isinstance(v, bool) and v >= 1


def _num_list(v):
    return isinstance(v, list) and len(v) >= 1 and all(_finite(x) for x in v)


def _any(v):
    return True


# section -> key -> (validator, description of the accepted range)
SCHEMA = {
    "atom": {
        "omega0": (_pos, "a frequency > 0 (GHz)"),
        "gamma0": (_nonneg, "a rate >= 0 (GHz)"),
        "n_points": (_pos_int, "an integer >= 1"),
        "spacing": (_pos, "a distance > 0 (m)"),
        "start": (_finite, "a finite position (m)"),
        "rate": (_nonneg, "a rate >= 0 (GHz)"),
        "positions": (_num_list, "a non-empty list of positions (m)"),
        "rates": (lambda v: _num_list(v) and all(x >= 0 for x in v), "a list of rates >= 0 (GHz)"),
    },
    "medium": {
        "eps_eff": (lambda v: _num(v) and v >= 1, "a permittivity >= 1"),
        "group_velocity": (lambda v: _pos(v) and v <= 299_792_458.0, "a velocity in (0, c] (m/s)"),
    },
    "channel": {
        "kind": (lambda v: v in ("none", "direct", "cavity"), "one of none, direct, cavity"),
        "mu": (lambda v: _num(v) and 0 <= v <= 1, "an amplitude in [0, 1]"),
        "phi": (lambda v: _num(v) and -math.pi < v <= math.pi, "a phase in (-pi, pi]"),
        "omega_b": (_pos, "a frequency > 0 (GHz)"),
        "offset": (_finite, "a finite frequency offset omega_b - omega0 (GHz)"),
        "gamma_big_b": (_nonneg, "a rate >= 0 (GHz)"),
        "gamma_b_left": (_nonneg, "a rate >= 0 (GHz)"),
        "gamma_b_right": (_nonneg, "a rate >= 0 (GHz)"),
    },
    "grid": {
        "lo": (_pos, "a frequency > 0 (GHz)"),
        "hi": (_pos, "a frequency > 0 (GHz)"),
        "n": (_pos_int, "an integer >= 1"),
    },
    "fit": {
        "mode": (lambda v: v in MODEL_PARAMS, "one of " + ", ".join(MODEL_PARAMS)),
        "free": (lambda v: isinstance(v, list) and all(isinstance(x, str) for x in v), "a list of parameter names"),
        "initial": (lambda v: isinstance(v, dict) and all(_finite(x) for x in v.values()), "a table of numbers"),
        "bounds": (lambda v: isinstance(v, dict) and all(isinstance(b, list) and len(b) == 2 and all(_num(x) for x in b) for b in v.values()),
                   "a table of [lower, upper] pairs"),
        "max_iter": (_pos_int, "an integer >= 1"),
        "starts": (_pos_int, "an integer >= 1"),
    },
    "switch": {
        "lo": (_pos, "a frequency > 0 (GHz)"),
        "hi": (_pos, "a frequency > 0 (GHz)"),
        "tolerance": (_pos, "a tolerance > 0 (GHz)"),
    },
    "resonator": {
        "omega_c": (_pos, "a frequency > 0 (GHz)"),
        "gamma_intrinsic": (_nonneg, "a rate >= 0 (GHz)"),
        "length": (_pos, "a length > 0 (m)"),
        "coupling_density": (_any, "a number or a table with positions and values"),
        "background_mu": (lambda v: _num(v) and 0 <= v <= 1, "an amplitude in [0, 1]"),
        "background_phi": (_finite, "a finite phase (rad, or m in wavevector mode)"),
        "phase_mode": (lambda v: v in ("constant", "wavevector"), "constant or wavevector"),
    },
    "oracle": {
        "amplitude": (lambda v: _finite(v) or (isinstance(v, list) and len(v) == 2 and all(_finite(x) for x in v)),
                      "a number or [re, im]"),
        "points": (lambda v: _pos_int(v) and v >= 2, "an integer >= 2"),
        "span": (_pos, "a multiple > 0 of the total linewidth"),
        "tolerance": (_pos, "a tolerance > 0"),
        "horizon": (_pos, "a time > 0 (ns)"),
    },
}


@dataclass
class RunConfig:
    atom: dict = field(default_factory=dict)
    medium: dict = field(default_factory=dict)
    channel: dict = field(default_factory=dict)
    grid: dict = field(default_factory=dict)
    fit: dict = field(default_factory=dict)
    switch: dict = field(default_factory=dict)
    resonator: dict = field(default_factory=dict)
    oracle: dict = field(default_factory=dict)

    # ---- builders -------------------------------------------------------
    def medium_obj(self) -> Medium:
        return Medium(self.medium.get("eps_eff", 1.0), self.medium.get("group_velocity"))

    def geometry(self) -> GiantAtomConfig:
        a = self.atom
        if "omega0" not in a:
            raise ConfigError("atom.omega0: required key missing", key="omega0")
        medium = self.medium_obj()
        gamma0 = a.get("gamma0", 0.0)
        if "positions" in a:
            rates = a.get("rates", [a["rate"]] * len(a["positions"]) if "rate" in a else None)
            if rates is None or len(rates) != len(a["positions"]):
                raise ConfigError("atom.rates: need one rate per position", key="rates")
            pts = tuple(CouplingPoint(x, r) for x, r in zip(a["positions"], rates))
            return GiantAtomConfig(a["omega0"], gamma0, pts, medium)
        for key in ("n_points", "rate"):
            if key not in a:
                raise ConfigError(f"atom.{key}: required key missing", key=key)
        if a["n_points"] > 1 and "spacing" not in a:
            raise ConfigError("atom.spacing: required key missing", key="spacing")
        return GiantAtomConfig.uniform(a["omega0"], gamma0, a["n_points"], a.get("spacing", 0.0),
                                       a["rate"], medium, a.get("start", 0.0))

    def channel_obj(self):
        c = self.channel
        kind = c.get("kind", "none")
        if kind == "none":
            return None
        if kind == "direct":
            return Direct(c.get("mu", 0.0), c.get("phi", 0.0))
        omega_b = c.get("omega_b")
        if omega_b is None:
            omega_b = self.atom.get("omega0", 0.0) + c.get("offset", 0.0)
        return Cavity(omega_b, c.get("gamma_big_b", 0.0), c.get("gamma_b_left", 0.0), c.get("gamma_b_right", 0.0))

    def mu_phi(self):
        ch = self.channel_obj()
        if ch is None:
            return 0.0, 0.0
        if isinstance(ch, Direct):
            return ch.mu, ch.phi
        return cavity_to_mu_phi(ch, self.atom["omega0"])

    def resonator_obj(self) -> ResonatorConfig:
        r = self.resonator
        for key in ("omega_c", "length", "coupling_density"):
            if key not in r:
                raise ConfigError(f"resonator.{key}: required key missing", key=key)
        dens = r["coupling_density"]
        if isinstance(dens, dict):
            if set(dens) != {"positions", "values"}:
                raise ConfigError("resonator.coupling_density: needs exactly positions and values", key="coupling_density")
            dens = TabulatedDensity(tuple(dens["positions"]), tuple(dens["values"]))
        elif not _finite(dens):
            raise ConfigError("resonator.coupling_density: must be a number or a table", key="coupling_density")
        return ResonatorConfig(r["omega_c"], r.get("gamma_intrinsic", 0.0), r["length"], dens,
                               r.get("background_mu", 0.0), r.get("background_phi", 0.0),
                               r.get("phase_mode", "constant"), self.medium_obj())

    def as_dict(self) -> dict:
        return {name: dict(getattr(self, name)) for name in SCHEMA if getattr(self, name)}


def _validate(doc: dict) -> RunConfig:
    cfg = RunConfig()
    for section, body in doc.items():
        if section not in SCHEMA:
            raise ConfigError(f"unknown section [{section}]", key=section)
        if not isinstance(body, dict):
            raise ConfigError(f"[{section}] must be a table", key=section)
        for key, value in body.items():
            if key not in SCHEMA[section]:
                raise ConfigError(f"unknown key {section}.{key}", key=key)
            check, desc = SCHEMA[section][key]
            if not check(value):
                raise ConfigError(f"{section}.{key}: out of range, expected {desc}, got {value!r}", key=key)
        setattr(cfg, section, dict(body))
    if cfg.grid and not ("lo" in cfg.grid and "hi" in cfg.grid and cfg.grid["lo"] < cfg.grid["hi"]):
        raise ConfigError("grid.hi: grid needs lo < hi", key="hi")
    if cfg.switch and "lo" in cfg.switch and "hi" in cfg.switch and not cfg.switch["lo"] < cfg.switch["hi"]:
        raise ConfigError("switch.hi: scan needs lo < hi", key="hi")
    if cfg.channel.get("kind") == "cavity" and "omega_b" in cfg.channel and "offset" in cfg.channel:
        raise ConfigError("channel.offset: give omega_b or offset, not both", key="offset")
    # build the objects once so that cross-field invariants surface here
    if cfg.atom:
        cfg.geometry()
    cfg.channel_obj()
    if cfg.resonator:
        cfg.resonator_obj()
    return cfg


def loads_config(text: str) -> RunConfig:
    try:
        doc = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        raise ConfigError(f"malformed config: {exc}") from None
    return _validate(doc)


def parse_config(path) -> RunConfig:
    p = Path(path)
    try:
        text = p.read_text()
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {p}") from None
    except OSError as exc:
        raise ConfigError(f"cannot read config file {p}: {exc}") from None
    return loads_config(text)


def dump_config(cfg: RunConfig) -> str:
    return tomli_w.dumps(cfg.as_dict())


def example_config(name: str) -> Path:
    """Path to a shipped example config: ``n3_fano``, ``n6_fano``, ``n3_switch`` or ``resonator``."""
    p = Path(__file__).parent / "data" / f"{name}.toml"
    if not p.exists():
        raise ConfigError(f"no shipped example named {name!r}")
    return p
