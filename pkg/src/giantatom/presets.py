"""Reference parameter sets for the three- and six-point transmon devices.

Rates are in GHz.  The reference fits do not state the qubit frequency, so
``omega0`` is placed where the array factor equals one (``gc == gamma``),
which is the value the quoted relaxation times imply.
"""
from __future__ import annotations

import math

import numpy as np

from .scatter import Cavity, GiantAtomConfig, Medium

EPS_EFF = 6.45
SPACING = 20.54e-3  # m
MEDIUM = Medium(EPS_EFF)


def _freq_at_theta(theta):
    return theta * MEDIUM.group_velocity / (2 * math.pi * SPACING) / 1e9


# N = 3: theta = pi, [sin(3pi/2)/sin(pi/2)]^2 = 1
N3 = dict(n=3, gamma=2e-4, gamma0=2.5e-4, mu=0.429, phi=-1.03, omega0=_freq_at_theta(math.pi))
N3_LORENTZIAN_GAMMA0 = 3.7e-4

# N = 6: theta = 8pi/5, [sin(24pi/5)/sin(4pi/5)]^2 = 1
N6 = dict(n=6, gamma=4e-6, gamma0=1.2e-4, mu=0.921, phi=0.312, omega0=_freq_at_theta(8 * math.pi / 5))
N6_MSP_GAMMA0 = 2e-4

# low-Q background channel of the three-point device, omega_b - omega0 = 0.1 GHz
CAVITY_OFFSET = 0.1
CAVITY_RATES = dict(gamma_big_b=0.01, gamma_b_left=0.29, gamma_b_right=0.31)


def geometry(preset) -> GiantAtomConfig:
    return GiantAtomConfig.uniform(preset["omega0"], preset["gamma0"], preset["n"], SPACING, preset["gamma"], MEDIUM)


def fit_values(preset) -> dict:
    return {k: preset[k] for k in ("gamma0", "mu", "phi", "gamma", "omega0")}


def cavity(omega0, offset=CAVITY_OFFSET) -> Cavity:
    return Cavity(omega_b=omega0 + offset, **CAVITY_RATES)


def fit_grid(preset, n=1601, span=10.0):
    """Sweep of ``+-span`` total linewidths around ``omega0``.

    ``gc == gamma`` at the preset ``omega0``, so the linewidth is
    ``gamma0 + gamma``.  1601 points is a common VNA sweep length.
    """
    w = span * (preset["gamma0"] + preset["gamma"])
    return np.linspace(preset["omega0"] - w, preset["omega0"] + w, n)
