import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from giantatom import presets
from giantatom.errors import ConvergenceError, DomainError
from giantatom.langevin import (
    DriveSpec,
    compare,
    detuning_grid,
    integrate_to_steady_state,
    sigma_frequency_domain,
    sigma_time_domain,
)
from giantatom.scatter import CouplingPoint, GiantAtomConfig, Medium


def small_atom(gamma0=0.0, rate=1e-3):
    return GiantAtomConfig(5.0, gamma0, (CouplingPoint(0.0, rate),), Medium(6.45))


def test_zero_drive():
    rep = sigma_time_domain(small_atom(1e-4), DriveSpec(0.0, 0.0))
    assert rep.sigma_minus == 0
    assert rep.settle_time == 0.0
    assert sigma_frequency_domain(small_atom(1e-4), DriveSpec(0.0, 0.0)) == 0


def test_small_atom_closed_form():
    g = 1e-3
    amp = 0.7
    want = -2 * amp / math.sqrt(g)
    assert sigma_frequency_domain(small_atom(0.0, g), DriveSpec(amp, 0.0)) == pytest.approx(want, rel=1e-14)
    rep = sigma_time_domain(small_atom(0.0, g), DriveSpec(amp, 0.0))
    assert abs(rep.sigma_minus - want) < 1e-8 * abs(want)


def test_linearity_in_amplitude():
    cfg = presets.geometry(presets.N3)
    d = 3e-4
    s1 = sigma_time_domain(cfg, DriveSpec(1.0, d)).sigma_minus
    s2 = sigma_time_domain(cfg, DriveSpec(2.5 - 1.0j, d)).sigma_minus
    assert abs(s2 - (2.5 - 1.0j) * s1) < 1e-10 * abs(s2)


def test_settle_time_bound():
    # an exponential approach settles within a few dozen time constants
    cfg = presets.geometry(presets.N3)
    rep = sigma_time_domain(cfg, DriveSpec(1.0, 0.0))
    kappa = cfg.gamma0 + 0.5 * 2e-4
    assert rep.settle_time < 50.0 / kappa
    assert rep.max_step_error < 1e-10


def test_horizon_too_short():
    with pytest.raises(ConvergenceError) as exc:
        sigma_time_domain(small_atom(1e-4), DriveSpec(1.0, 0.0), horizon=1.0)
    assert exc.value.best.settle_time == pytest.approx(1.0)


def test_unstable_needs_horizon():
    with pytest.raises(DomainError):
        integrate_to_steady_state(0.1 + 0j, 1.0)
    with pytest.raises(DomainError):
        integrate_to_steady_state(-1 + 0j, 1.0, tolerance=0.0)


@settings(max_examples=30, deadline=None)
@given(re=st.floats(1e-3, 10.0), q=st.floats(-20.0, 20.0), b=st.complex_numbers(min_magnitude=1e-3, max_magnitude=1e3))
def test_integrator_fixed_point(re, q, b):
    # q bounds the oscillation count per decay time
    a = complex(-re, q * re)
    y, t, err, steps = integrate_to_steady_state(a, b, tolerance=1e-10)
    assert abs(y - (-b / a)) < 1e-7 * abs(b / a)


@pytest.mark.parametrize("preset", [presets.N3, presets.N6], ids=["n3", "n6"])
def test_compare_grid(preset):
    cfg = presets.geometry(preset)
    grid = detuning_grid(cfg, n=9)
    assert grid[0] == pytest.approx(-10 * (cfg.gamma0 + preset["gamma"]), rel=1e-9)
    rows = compare(cfg, grid)
    assert len(rows) == 9
    assert max(r[3] for r in rows) < 1e-6
