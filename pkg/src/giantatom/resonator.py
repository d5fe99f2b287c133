"""Half-wavelength resonator with a spatially extended coupling density."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np
from scipy import integrate

from .errors import ConfigError, NumericError
from .scatter import Medium, _check_finite, _guard, wavevector

QUAD_RTOL = 1e-10
QUAD_ATOL = 1e-300


@dataclass(frozen=True)
class TabulatedDensity:
    """Coupling density sampled at ``positions`` (m), linearly interpolated."""

    positions: tuple
    values: tuple

    def __post_init__(self):
        x = np.asarray(self.positions, dtype=float)
        if x.size < 2 or np.any(np.diff(x) <= 0):
            raise ConfigError("tabulated density needs >= 2 strictly increasing positions", key="coupling_density")
        if len(self.values) != x.size:
            raise ConfigError("positions and values differ in length", key="coupling_density")

    def __call__(self, x):
        return np.interp(x, self.positions, self.values)

    @property
    def breakpoints(self):
        return tuple(self.positions)


@dataclass(frozen=True)
class ResonatorConfig:
    omega_c: float  # GHz
    gamma_intrinsic: float  # GHz
    length: float  # m
    coupling_density: Union[float, TabulatedDensity]  # GHz^(1/2) / m
    background_mu: float = 0.0
    background_phi: float = 0.0
    phase_mode: str = "constant"  # "constant": e^{i phi}; "wavevector": e^{i k phi}, phi in metres
    medium: Medium = field(default_factory=Medium)

    def __post_init__(self):
        if not self.length > 0:
            raise ConfigError(f"length must be > 0, got {self.length}", key="length")
        if not self.gamma_intrinsic >= 0:
            raise ConfigError(f"gamma_intrinsic must be >= 0, got {self.gamma_intrinsic}", key="gamma_intrinsic")
        if not 0.0 <= self.background_mu <= 1.0:
            raise ConfigError(f"background_mu must lie in [0, 1], got {self.background_mu}", key="background_mu")
        if self.phase_mode not in ("constant", "wavevector"):
            raise ConfigError(f"phase_mode must be 'constant' or 'wavevector', got {self.phase_mode!r}", key="phase_mode")


def constant_decay(g, k, length):
    """Closed form of the decay for constant density: ``g^2 * 4 sin^2(kL/2) / k^2``."""
    return g * g * 4.0 * math.sin(0.5 * k * length) ** 2 / (k * k)


def _quad(func, a, b, weight, k):
    kw = dict(epsabs=QUAD_ATOL, epsrel=QUAD_RTOL, limit=500)
    if k != 0.0:
        kw.update(weight=weight, wvar=k)
    elif weight == "sin":
        return 0.0, 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, err = integrate.quad(func, a, b, **kw)
        except integrate.IntegrationWarning as exc:
            raise NumericError(f"quadrature did not converge: {exc}") from None
    return val, err


def coupling_integral(config: ResonatorConfig, k: float) -> complex:
    """``integral_0^L g(x) exp(i k x) dx`` by adaptive quadrature.

    The oscillatory factor is handled by QUADPACK's Fourier weight, one
    segment per tabulation interval, so exact cancellations at ``kL = 2 pi l``
    do not trip round-off detection.
    """
    g = config.coupling_density
    L = config.length
    if isinstance(g, TabulatedDensity):
        dens = g
        edges = [0.0] + [p for p in g.breakpoints if 0.0 < p < L] + [L]
    else:
        dens = lambda x, c=float(g): c  # noqa: E731
        edges = [0.0, L]
    total = 0j
    err = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        re, re_err = _quad(dens, a, b, "cos", k)
        im, im_err = _quad(dens, a, b, "sin", k)
        total += complex(re, im)
        err += max(re_err, im_err)
    # absolute floor for exact cancellations
    norm = _norm1(dens, L)
    if err > max(QUAD_RTOL * abs(total), 1e-14 * norm):
        raise NumericError("quadrature error estimate exceeds tolerance")
    return total


def _norm1(dens, L):
    xs = np.linspace(0.0, L, 65)
    return float(np.mean(np.abs(dens(xs)))) * L + 1e-300


def resonator_decay(config: ResonatorConfig, frequency) -> float:
    """Coupling-induced decay ``|integral g(x) exp(ikx) dx|^2`` in GHz."""
    k = float(wavevector(frequency, config.medium))
    return abs(coupling_integral(config, k)) ** 2


def background_term(config: ResonatorConfig, frequency) -> complex:
    if config.phase_mode == "constant":
        phase = config.background_phi
    else:
        phase = float(wavevector(frequency, config.medium)) * config.background_phi
    return config.background_mu * complex(math.cos(phase), math.sin(phase))


def resonator_transmission(config: ResonatorConfig, frequency, gamma_d=None):
    """Transmission amplitude of the resonator plus its background channel.

    ``gamma_d`` overrides the coupling-induced decay (otherwise computed at
    ``frequency``).  Accepts a scalar or a sequence of frequencies.
    """
    freqs = np.atleast_1d(np.asarray(frequency, dtype=float))
    out = np.empty(freqs.shape, dtype=complex)
    for i, w in enumerate(freqs):
        gd = resonator_decay(config, w) if gamma_d is None else float(gamma_d)
        delta = w - config.omega_c
        den = _guard(-1j * (delta + 1j * config.gamma_intrinsic) + 0.5 * gd, "resonator transmission")
        out[i] = 0.5 * gd / den + background_term(config, w)
    _check_finite(out, "resonator transmission")
    return out[0] if np.ndim(frequency) == 0 else out


def resonator_spectrum(config: ResonatorConfig, frequencies: Sequence[float]) -> np.ndarray:
    return np.abs(resonator_transmission(config, np.asarray(frequencies, dtype=float))) ** 2
