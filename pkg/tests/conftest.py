import math

import numpy as np
import pytest

from giantatom import presets
from giantatom.scatter import GiantAtomConfig, Medium


@pytest.fixture
def medium():
    return Medium(presets.EPS_EFF)


@pytest.fixture
def n3():
    return presets.geometry(presets.N3)


@pytest.fixture
def n6():
    return presets.geometry(presets.N6)


def theta_config(theta, n=3, rate=2e-4, gamma0=2.5e-4, spacing=presets.SPACING, eps=presets.EPS_EFF):
    """Uniform config whose omega0 gives phase ``theta`` between neighbours."""
    medium = Medium(eps)
    f = theta * medium.group_velocity / (2 * math.pi * spacing) / 1e9
    return GiantAtomConfig.uniform(f, gamma0, n, spacing, rate, medium)


def brute_coupling(rates, positions, k):
    """Double sum written out term by term."""
    total = 0j
    for gj, xj in zip(rates, positions):
        for xjp in positions:
            total += gj * complex(math.cos(k * (xjp - xj)), math.sin(k * (xjp - xj)))
    return total
