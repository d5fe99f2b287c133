import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from giantatom.errors import ConfigError
from giantatom.resonator import (
    ResonatorConfig,
    TabulatedDensity,
    constant_decay,
    coupling_integral,
    resonator_decay,
    resonator_spectrum,
    resonator_transmission,
)
from giantatom.scatter import Medium

L = 0.02
MED = Medium(1.0)


def freq_for_kl(kl, medium=MED, length=L):
    return kl / length * medium.group_velocity / (2 * math.pi * 1e9)


def cfg(**kw):
    base = dict(omega_c=3.0, gamma_intrinsic=0.0, length=L, coupling_density=0.5, medium=MED)
    base.update(kw)
    return ResonatorConfig(**base)


class TestClosedForm:
    def test_small_k_limit(self):
        # kL -> 0 gives (gL)^2
        assert constant_decay(0.5, 1e-6 / L, L) == pytest.approx((0.5 * L) ** 2, rel=1e-9)

    def test_full_period_vanishes(self):
        assert constant_decay(0.5, 2 * math.pi / L, L) < 1e-30

    def test_half_period(self):
        k = math.pi / L
        assert constant_decay(0.5, k, L) == pytest.approx(4 * 0.25 / k ** 2, rel=1e-14)

    @pytest.mark.parametrize("kl", np.geomspace(1e-3, 10, 25))
    def test_quadrature_matches(self, kl):
        c = cfg()
        f = freq_for_kl(kl)
        want = constant_decay(0.5, kl / L, L)
        assert resonator_decay(c, f) == pytest.approx(want, rel=1e-8)

    def test_quadrature_at_exact_zero(self):
        f = freq_for_kl(2 * math.pi)
        assert resonator_decay(cfg(), f) < 1e-20


class TestTabulated:
    def test_flat_table_equals_constant(self):
        tab = TabulatedDensity((0.0, 0.01, L), (0.5, 0.5, 0.5))
        f = freq_for_kl(1.7)
        assert resonator_decay(cfg(coupling_density=tab), f) == pytest.approx(resonator_decay(cfg(), f), rel=1e-10)

    def test_linear_ramp(self):
        # g = x/L: integral of x exp(ikx) is exp(ikx) (x/(ik) + 1/k^2)
        tab = TabulatedDensity((0.0, L), (0.0, 1.0))
        k = 2.3 / L
        want = (np.exp(1j * k * L) * (L / (1j * k) + 1 / k ** 2) - 1 / k ** 2) / L
        got = coupling_integral(cfg(coupling_density=tab), k)
        assert abs(got - want) < 1e-10 * abs(want)

    def test_piecewise_table(self):
        tab = TabulatedDensity((0.0, 0.005, 0.012, L), (0.2, 0.9, 0.1, 0.4))
        k = 3.1 / L
        xs = np.linspace(0, L, 400001)
        ys = tab(xs) * np.exp(1j * k * xs)
        ref = np.sum((ys[1:] + ys[:-1]) / 2 * np.diff(xs))
        assert abs(coupling_integral(cfg(coupling_density=tab), k) - ref) < 1e-9 * abs(ref)

    def test_bad_table(self):
        with pytest.raises(ConfigError):
            TabulatedDensity((0.0, 0.0), (1.0, 1.0))
        with pytest.raises(ConfigError):
            TabulatedDensity((0.0, 1.0), (1.0,))


class TestTransmission:
    def test_lossless_resonance_unit(self):
        c = cfg()
        t = resonator_transmission(c, 3.0)
        assert abs(abs(t) ** 2 - 1.0) < 1e-12

    def test_half_width(self):
        c = cfg()
        gd = resonator_decay(c, 3.0)
        t = resonator_transmission(c, 3.0 + gd / 2, gamma_d=gd)
        # 3.0 + gd/2 rounds the detuning at ~1e-11 relative
        assert abs(t) ** 2 == pytest.approx(0.5, rel=1e-10)

    def test_decoupled(self):
        c = cfg(coupling_density=0.0)
        assert resonator_transmission(c, 3.001) == 0

    def test_background_constant(self):
        c = cfg(coupling_density=0.0, background_mu=0.3, background_phi=0.5)
        t = resonator_transmission(c, 3.2)
        assert t == pytest.approx(0.3 * np.exp(0.5j), rel=1e-15)

    def test_background_wavevector(self):
        c = cfg(coupling_density=0.0, background_mu=0.3, background_phi=0.01, phase_mode="wavevector")
        f = 3.2
        k = 2 * math.pi * f * 1e9 / MED.group_velocity
        assert resonator_transmission(c, f) == pytest.approx(0.3 * np.exp(1j * k * 0.01), rel=1e-13)

    def test_spectrum_vector(self):
        c = cfg(gamma_intrinsic=1e-4)
        f = np.linspace(2.999, 3.001, 11)
        spec = resonator_spectrum(c, f)
        assert spec.shape == (11,)
        assert np.allclose(spec, [abs(resonator_transmission(c, x)) ** 2 for x in f], rtol=1e-14)

    @pytest.mark.parametrize("kw", [dict(length=0.0), dict(gamma_intrinsic=-1.0), dict(background_mu=1.2),
                                    dict(phase_mode="bogus")])
    def test_invalid(self, kw):
        with pytest.raises(ConfigError):
            cfg(**kw)

    @settings(max_examples=40, deadline=None)
    @given(d=st.floats(-1e-2, 1e-2), gd=st.floats(1e-8, 1e-2), gi=st.floats(0, 1e-2))
    def test_passive(self, d, gd, gi):
        # no gain: |t|^2 <= 1 without a background channel
        t = resonator_transmission(cfg(gamma_intrinsic=gi), 3.0 + d, gamma_d=gd)
        assert abs(t) ** 2 <= 1 + 1e-12
