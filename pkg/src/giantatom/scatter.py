"""Frequency-domain scattering of a giant atom with a quasi-direct channel.

Unit convention: every frequency and rate (omega0, gamma0, per-point rates,
effective coupling, cavity rates) is an ordinary frequency in GHz, and they
combine additively.  Propagation phases are ``2*pi*f*x / v_g`` with ``f`` in
GHz converted to Hz.

All functions accept scalar or array frequencies and return numpy values of
the matching shape.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .errors import ConfigError, DomainError, NumericError, SingularityError

C_LIGHT = 299_792_458.0  # m/s
GHZ = 1e9
SINGULAR_FLOOR = 1e-30  # GHz; smaller denominators are treated as singular


@dataclass(frozen=True)
class Medium:
    """Waveguide medium. ``group_velocity`` defaults to ``c / sqrt(eps_eff)``."""

    eps_eff: float = 1.0
    group_velocity: Optional[float] = None

    def __post_init__(self):
        if not (self.eps_eff >= 1.0 and math.isfinite(self.eps_eff)):
            raise ConfigError(f"eps_eff must be >= 1, got {self.eps_eff}", key="eps_eff")
        vg = self.group_velocity
        if vg is None:
            vg = C_LIGHT / math.sqrt(self.eps_eff)
        if not (0.0 < vg <= C_LIGHT * (1 + 1e-12)):
            raise ConfigError(f"group_velocity must lie in (0, c], got {vg}", key="group_velocity")
        object.__setattr__(self, "group_velocity", float(vg))


@dataclass(frozen=True)
class CouplingPoint:
    position: float  # m
    rate: float  # GHz

    def __post_init__(self):
        if not self.rate >= 0.0:
            raise ConfigError(f"coupling rate must be >= 0, got {self.rate}", key="rate")


@dataclass(frozen=True)
class GiantAtomConfig:
    """Two-level atom coupled to a waveguide at ``len(points)`` positions."""

    omega0: float
    gamma0: float
    points: tuple
    medium: Medium = field(default_factory=Medium)

    def __post_init__(self):
        pts = tuple(self.points)
        object.__setattr__(self, "points", pts)
        if len(pts) < 1:
            raise ConfigError("at least one coupling point is required", key="points")
        xs = [p.position for p in pts]
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise ConfigError("coupling positions must be strictly increasing", key="positions")
        if not self.gamma0 >= 0.0:
            raise ConfigError(f"gamma0 must be >= 0, got {self.gamma0}", key="gamma0")
        if not math.isfinite(self.omega0):
            raise ConfigError("omega0 must be finite", key="omega0")

    @classmethod
    def uniform(cls, omega0, gamma0, n, spacing, rate, medium=None, start=0.0):
        """Equally spaced points with identical rates."""
        if n < 1:
            raise ConfigError(f"n must be >= 1, got {n}", key="n_points")
        if n > 1 and not spacing > 0:
            raise ConfigError(f"spacing must be > 0, got {spacing}", key="spacing")
        pts = tuple(CouplingPoint(start + j * spacing, rate) for j in range(n))
        return cls(omega0, gamma0, pts, medium if medium is not None else Medium())

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def positions(self) -> np.ndarray:
        return np.array([p.position for p in self.points], dtype=float)

    @property
    def rates(self) -> np.ndarray:
        return np.array([p.rate for p in self.points], dtype=float)

    @property
    def size(self) -> float:
        return self.points[-1].position - self.points[0].position

    @property
    def spacing(self) -> Optional[float]:
        """Common spacing for equally spaced points, else None (N=1 gives 0)."""
        if self.n == 1:
            return 0.0
        d = np.diff(self.positions)
        if np.allclose(d, d[0], rtol=1e-12, atol=0.0):
            return float(d[0])
        return None

    @property
    def is_uniform(self) -> bool:
        r = self.rates
        return bool(np.all(r == r[0]))

    def replace(self, **changes) -> "GiantAtomConfig":
        kw = dict(omega0=self.omega0, gamma0=self.gamma0, points=self.points, medium=self.medium)
        kw.update(changes)
        return GiantAtomConfig(**kw)


@dataclass(frozen=True)
class Direct:
    """Quasi-direct channel given directly as amplitude and phase."""

    mu: float
    phi: float

    def __post_init__(self):
        if not 0.0 <= self.mu <= 1.0:
            raise ConfigError(f"mu must lie in [0, 1], got {self.mu}", key="mu")
        if not -math.pi < self.phi <= math.pi:
            raise ConfigError(f"phi must lie in (-pi, pi], got {self.phi}", key="phi")


@dataclass(frozen=True)
class Cavity:
    """Quasi-direct channel modelled as a low-Q cavity."""

    omega_b: float
    gamma_big_b: float
    gamma_b_left: float
    gamma_b_right: float

    def __post_init__(self):
        for key in ("gamma_big_b", "gamma_b_left", "gamma_b_right"):
            if not getattr(self, key) >= 0.0:
                raise ConfigError(f"{key} must be >= 0, got {getattr(self, key)}", key=key)

    @property
    def linewidth(self) -> float:
        """Total cavity half-width ``(gL + gR)/2 + Gamma_b``."""
        return 0.5 * (self.gamma_b_left + self.gamma_b_right) + self.gamma_big_b

    def at_offset(self, omega0, offset) -> "Cavity":
        """Same cavity re-centred so that ``omega_b - omega0 == offset``."""
        return Cavity(omega0 + offset, self.gamma_big_b, self.gamma_b_left, self.gamma_b_right)


QuasiDirectChannel = Union[Direct, Cavity, None]


class CouplingMode(str, enum.Enum):
    LITERAL = "literal"  # (sum_j g_j e^{-ikx_j})(sum_j' e^{ikx_j'}), may be complex
    SYMMETRIC = "symmetric"  # |sum_j sqrt(g_j) e^{ikx_j}|^2, real


def _check_finite(value, what):
    if not np.all(np.isfinite(value)):
        raise NumericError(f"non-finite {what}")
    return value


def _guard(den, what):
    if np.any(np.abs(den) < SINGULAR_FLOOR):
        raise SingularityError(f"vanishing denominator in {what}")
    return den


def wavevector(frequency, medium: Medium):
    """Wave number ``2*pi*f / v_g`` in 1/m for ``frequency`` in GHz."""
    f = np.asarray(frequency, dtype=float)
    if np.any(~(f > 0)):
        raise DomainError("frequency must be > 0")
    return 2.0 * np.pi * f * GHZ / medium.group_velocity


def phase_delay(frequency, distance, medium: Medium):
    """Propagation phase ``k*d`` accumulated over ``distance`` metres."""
    return wavevector(frequency, medium) * distance


def _phases(config: GiantAtomConfig, frequency):
    k = np.asarray(wavevector(frequency, config.medium))
    x = config.positions - config.positions[0]
    return np.exp(1j * k[..., None] * x)  # (..., N)


def array_factor_coupling(rate, n, theta):
    """``rate * [sin(n*theta/2) / sin(theta/2)]^2`` with the ``n^2`` limit at ``theta = 2*pi*l``."""
    theta = np.asarray(theta, dtype=float)
    s = np.sin(theta / 2.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(s == 0.0, float(n), np.sin(n * theta / 2.0) / s)
    return rate * ratio**2


def effective_coupling(config: GiantAtomConfig, frequency, mode=CouplingMode.LITERAL):
    """Interference-weighted decay rate of the atom into the waveguide (GHz).

    Positions are taken relative to the first point; the literal form is
    invariant under a common shift, the symmetric form too.
    """
    mode = CouplingMode(mode)
    e = _phases(config, frequency)
    rates = config.rates
    if mode is CouplingMode.LITERAL:
        val = np.sum(rates * np.conj(e), axis=-1) * np.sum(e, axis=-1)
    else:
        val = np.abs(np.sum(np.sqrt(rates) * e, axis=-1)) ** 2 + 0j
    return _check_finite(val, "effective coupling")


def reflection_factor(config: GiantAtomConfig, detuning, gamma_c):
    """``[i*delta + G0 - gc/2] / [i*delta + G0 + gc/2]`` with ``delta = omega - omega0``."""
    delta = np.asarray(detuning, dtype=float)
    base = 1j * delta + config.gamma0
    den = _guard(base + 0.5 * np.asarray(gamma_c), "reflection factor")
    return _check_finite((base - 0.5 * np.asarray(gamma_c)) / den, "reflection factor")


def background_amplitude(channel: QuasiDirectChannel, omega0) -> complex:
    """``mu * exp(i*phi)`` of a channel; cavities are anchored at ``omega0``."""
    if channel is None:
        return 0j
    if isinstance(channel, Direct):
        return channel.mu * complex(math.cos(channel.phi), math.sin(channel.phi))
    if isinstance(channel, Cavity):
        mu, phi = cavity_to_mu_phi(channel, omega0)
        return mu * complex(math.cos(phi), math.sin(phi))
    raise ConfigError(f"unknown channel type {type(channel).__name__}", key="channel")


def scattering_amplitude(config, channel: QuasiDirectChannel, frequency, mode=CouplingMode.LITERAL):
    """Scattering amplitude ``R(omega) - mu*exp(i*phi)``."""
    gc = effective_coupling(config, frequency, mode)
    r = reflection_factor(config, np.asarray(frequency, dtype=float) - config.omega0, gc)
    return r - background_amplitude(channel, config.omega0)


def transmission_amplitude(config, channel: QuasiDirectChannel, frequency, mode=CouplingMode.LITERAL):
    gc = effective_coupling(config, frequency, mode)
    r = reflection_factor(config, np.asarray(frequency, dtype=float) - config.omega0, gc)
    return 0.5 * (r + 1.0) - background_amplitude(channel, config.omega0)


def transmission(config, channel: QuasiDirectChannel, frequency, mode=CouplingMode.LITERAL):
    """Transmission probability ``|(R + 1)/2 - mu*exp(i*phi)|^2``.

    With ``channel=None`` this is the multiple-scattering-point (MSP) result.
    """
    return np.abs(transmission_amplitude(config, channel, frequency, mode)) ** 2


def quasi_direct_response(channel: Cavity, frequency):
    """Full frequency response of the cavity channel, ``f(omega, omega_b)``."""
    w = np.asarray(frequency, dtype=float)
    num = math.sqrt(channel.gamma_b_left * channel.gamma_b_right)
    den = 0.5 * (channel.gamma_b_left + channel.gamma_b_right) - 1j * (w - channel.omega_b + 1j * channel.gamma_big_b)
    return _check_finite(num / _guard(den, "quasi-direct response"), "quasi-direct response")


def cavity_to_mu_phi(channel: Cavity, omega0):
    """Zeroth-order (mu, phi) of a cavity channel expanded about ``omega0``.

    ``mu * exp(i*phi)`` equals ``quasi_direct_response(channel, omega0)``.
    """
    kappa = channel.linewidth
    x = float(omega0) - channel.omega_b
    norm = math.hypot(kappa, x)
    if norm < SINGULAR_FLOOR:
        raise DomainError("cavity channel has zero linewidth at resonance")
    mu = math.sqrt(channel.gamma_b_left * channel.gamma_b_right) / norm
    phi = math.atan2(x, kappa)  # kappa >= 0, so this is atan(x / kappa)
    return mu, phi


def asymmetry(func, center, deltas: Sequence[float]) -> float:
    """``max |T(center + d) - T(center - d)|`` over ``deltas``."""
    d = np.asarray(deltas, dtype=float)
    return float(np.max(np.abs(func(center + d) - func(center - d))))
