"""Relaxation times and switch-on frequencies of a giant atom."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DomainError
from .fitting import Spectrum
from .optimize import bisect, golden_section_max
from .scatter import (
    Cavity,
    Direct,
    GiantAtomConfig,
    array_factor_coupling,
    background_amplitude,
    cavity_to_mu_phi,
    effective_coupling,
    phase_delay,
    transmission,
)


def relaxation_time(gamma0, gamma_c) -> float:
    """Excited-state lifetime ``1 / (G0 + gc)`` in microseconds (rates in GHz)."""
    total = float(gamma0) + float(gamma_c)
    if not total > 0:
        raise DomainError(f"total decay rate must be > 0, got {total}")
    return 1e-3 / total


@dataclass
class SwitchPoint:
    frequency: float  # GHz
    transmission: float
    gamma_c: float


@dataclass
class SwitchScan:
    omega0_grid: np.ndarray
    gamma_c_values: np.ndarray
    transmission_at_carrier: np.ndarray
    ioa_roots: list = field(default_factory=list)
    mioa_roots: list = field(default_factory=list)  # SwitchPoint entries


def _equally_spaced(geometry: GiantAtomConfig) -> float:
    d = geometry.spacing
    if d is None or not geometry.is_uniform:
        raise ConfigError("switch analysis needs equally spaced points with uniform rates", key="points")
    return d


def _check_scan(scan):
    lo, hi = scan
    if not (0 < lo < hi):
        raise DomainError(f"scan window must satisfy 0 < lo < hi, got {scan}")
    return float(lo), float(hi)


def _theta_per_ghz(geometry, d):
    return float(phase_delay(1.0, d, geometry.medium))


def carrier_coupling(geometry: GiantAtomConfig, omega0):
    """Effective coupling at the carrier ``omega = omega0`` (uniform array form)."""
    d = _equally_spaced(geometry)
    theta = phase_delay(np.asarray(omega0, dtype=float), d, geometry.medium)
    return array_factor_coupling(geometry.rates[0], geometry.n, theta)


def switch_frequencies_ioa(geometry: GiantAtomConfig, scan, tolerance=1e-9):
    """Atomic frequencies in ``scan`` where the effective coupling vanishes.

    Zeros of ``sin(N theta / 2)`` are bracketed on a scan fine enough to
    isolate each one and refined by bisection; the points where also
    ``sin(theta / 2) = 0`` carry ``N^2 gamma`` and are dropped.
    """
    lo, hi = _check_scan(scan)
    d = _equally_spaced(geometry)
    n = geometry.n
    if n < 2 or geometry.rates[0] == 0:
        return []
    per_ghz = _theta_per_ghz(geometry, d)
    g = lambda f: math.sin(n * f * per_ghz / 2.0)  # noqa: E731
    # at least 16 samples between neighbouring zeros
    step = (2 * math.pi / n) / 16.0 / per_ghz
    grid = np.linspace(lo, hi, max(int(math.ceil((hi - lo) / step)) + 1, 2))
    vals = np.sin(n * grid * per_ghz / 2.0)
    roots = []
    for a, b, va, vb in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]):
        if va == 0.0:
            r = a
        elif va * vb < 0:
            r = bisect(g, a, b, tol=tolerance)
        else:
            continue
        # superradiant points: theta a multiple of 2*pi
        l = round(r * per_ghz / (2 * math.pi))
        if abs(r - 2 * math.pi * l / per_ghz) <= max(tolerance, 1e-12 * r) * 10:
            continue
        roots.append(float(r))
    if vals[-1] == 0.0:
        r = grid[-1]
        l = round(r * per_ghz / (2 * math.pi))
        if abs(r - 2 * math.pi * l / per_ghz) > max(tolerance, 1e-12 * r) * 10:
            roots.append(float(r))
    return sorted(set(roots))


def carrier_transmission(geometry: GiantAtomConfig, omega0, channel, offset=None):
    """``T(omega = omega0)`` as the atom is tuned, for one or many ``omega0``.

    A ``Cavity`` channel is re-centred to ``omega_b = omega0 + offset`` for
    every ``omega0`` (``offset`` defaults to its value at ``geometry.omega0``).
    """
    w = np.atleast_1d(np.asarray(omega0, dtype=float))
    gc = carrier_coupling(geometry, w)
    g0 = geometry.gamma0
    if channel is None:
        bg = np.zeros_like(w, dtype=complex)
    elif isinstance(channel, Direct):
        bg = np.full(w.shape, background_amplitude(channel, 0.0))
    elif isinstance(channel, Cavity):
        off = channel.omega_b - geometry.omega0 if offset is None else offset
        mu, phi = cavity_to_mu_phi(channel.at_offset(0.0, off), 0.0)
        bg = np.full(w.shape, mu * complex(math.cos(phi), math.sin(phi)))
    else:
        raise ConfigError("unknown channel", key="channel")
    # R(omega0) = (G0 - gc/2) / (G0 + gc/2)  ->  (R + 1)/2 = G0 / (G0 + gc/2)
    den = g0 + 0.5 * gc
    with np.errstate(divide="ignore", invalid="ignore"):
        a = np.where(den > 0, g0 / np.where(den > 0, den, 1.0), 1.0)
    t = np.abs(a - bg) ** 2
    return t[0] if np.ndim(omega0) == 0 else t


def switch_frequencies_mioa(geometry: GiantAtomConfig, channel, scan, tolerance=1e-9, offset=None, samples=None):
    """Switch-on frequencies once the quasi-direct channel is included.

    Scans ``T(omega = omega0)`` over ``scan`` and refines each interior local
    maximum by golden-section search.  Only maxima at which the effective
    coupling is locally minimal are kept: those are the points where the atom
    decouples.  Maxima produced by collective (superradiant) coupling peaks
    are rejected.
    """
    lo, hi = _check_scan(scan)
    d = _equally_spaced(geometry)
    n = geometry.n
    per_ghz = _theta_per_ghz(geometry, d)
    if samples is None:
        step = (2 * math.pi / max(n, 1)) / 64.0 / per_ghz
        samples = max(int(math.ceil((hi - lo) / step)) + 1, 3)
    grid = np.linspace(lo, hi, samples)
    t = carrier_transmission(geometry, grid, channel, offset)
    T = lambda f: float(carrier_transmission(geometry, f, channel, offset))  # noqa: E731
    gc = lambda f: float(carrier_coupling(geometry, f))  # noqa: E731
    out = []
    for i in range(1, len(grid) - 1):
        if not (t[i] >= t[i - 1] and t[i] > t[i + 1]):
            continue
        f = golden_section_max(T, grid[i - 1], grid[i + 1], tol=tolerance)
        h = 0.25 * (grid[1] - grid[0])
        if not (gc(f) <= gc(f - h) and gc(f) <= gc(f + h)):
            continue
        out.append(SwitchPoint(float(f), T(f), gc(f)))
    return out


def switch_scan(geometry, channel, scan, samples=2001, tolerance=1e-9, offset=None) -> SwitchScan:
    """Sampled coupling and carrier transmission plus both root sets."""
    lo, hi = _check_scan(scan)
    grid = np.linspace(lo, hi, samples)
    return SwitchScan(
        omega0_grid=grid,
        gamma_c_values=carrier_coupling(geometry, grid),
        transmission_at_carrier=carrier_transmission(geometry, grid, channel, offset),
        ioa_roots=switch_frequencies_ioa(geometry, scan, tolerance),
        mioa_roots=switch_frequencies_mioa(geometry, channel, scan, tolerance, offset),
    )


def sweep_spectrum(geometry: GiantAtomConfig, channel, grid) -> Spectrum:
    """Noise-free transmission on ``grid``; cavities are anchored at ``omega0``."""
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise DomainError("grid is empty")
    return Spectrum(grid, np.asarray(transmission(geometry, channel, grid), dtype=float))
