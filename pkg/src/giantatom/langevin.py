"""Time-domain check of the frequency-domain atomic response.

The atomic lowering operator is replaced by its expectation value with
``<sigma_z> = -1`` (weak excitation), so its Langevin equation becomes a
linear ODE for one complex amplitude.  In the frame rotating at the drive
frequency the steady state is a fixed point:

    d sigma/dt = (i*delta - G0 - gc/2) * sigma - S * a_in,
    S = sum_j sqrt(g_j) * exp(-i k x_j)

Rates in GHz are read as 1/ns, so time is in nanoseconds.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError, SingularityError
from .scatter import SINGULAR_FLOOR, CouplingMode, GiantAtomConfig, effective_coupling, wavevector

ATOL_FLOOR = 1e-14


@dataclass(frozen=True)
class DriveSpec:
    amplitude: complex
    detuning: float  # GHz, omega - omega0

    def __post_init__(self):
        if not (math.isfinite(complex(self.amplitude).real) and math.isfinite(complex(self.amplitude).imag)):
            raise DomainError("drive amplitude must be finite")


@dataclass(frozen=True)
class SteadyStateReport:
    sigma_minus: complex
    settle_time: float  # ns
    max_step_error: float
    steps: int = 0


def input_coupling(config: GiantAtomConfig, frequency) -> complex:
    """``sum_j sqrt(g_j) exp(-i k x_j)`` at the drive frequency."""
    k = float(wavevector(frequency, config.medium))
    return complex(np.sum(np.sqrt(config.rates) * np.exp(-1j * k * config.positions)))


def _linear_system(config, drive):
    freq = config.omega0 + drive.detuning
    gc = complex(effective_coupling(config, freq, CouplingMode.LITERAL))
    a = 1j * drive.detuning - config.gamma0 - 0.5 * gc
    b = -input_coupling(config, freq) * complex(drive.amplitude)
    return a, b


def sigma_frequency_domain(config: GiantAtomConfig, drive: DriveSpec) -> complex:
    """Steady-state amplitude from the algebraic (frequency-domain) equation."""
    a, b = _linear_system(config, drive)
    if abs(a) < SINGULAR_FLOOR:
        raise SingularityError("atomic response denominator vanishes")
    return -b / a


# Dormand-Prince 5(4) tableau
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_B4 = (5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40)
_E = tuple(b5 - b4 for b5, b4 in zip(_B5, _B4))


def integrate_to_steady_state(a: complex, b: complex, tolerance=1e-12, horizon=None, y0=0j):
    """Integrate ``dy/dt = a*y + b`` with an embedded RK5(4) pair until settled.

    Settled means ``|dy/dt| / |a| < tolerance * |y|``, i.e. the estimated
    distance to the fixed point is below ``tolerance`` relative.  The step
    controller keeps each local error a decade tighter than that, otherwise
    the truncation bias alone can hold the state just outside the test.  Returns
    ``(y, t, max_step_error, steps)`` where ``max_step_error`` is the largest
    accepted local error relative to ``|y|`` (or the floor).
    """
    if tolerance <= 0:
        raise DomainError("tolerance must be > 0")
    rate = -a.real
    if horizon is None:
        if rate <= 0:
            raise DomainError("unstable or marginal system needs an explicit horizon")
        horizon = 200.0 / rate
    f = lambda y: a * y + b  # noqa: E731
    y, t = complex(y0), 0.0
    dy = f(y)
    gain = abs(a)
    if dy == 0 or abs(dy) <= tolerance * gain * abs(y):
        return y, t, 0.0, 0
    h = min(0.1 / max(abs(a), 1e-300), horizon)
    max_err = 0.0
    steps = 0
    while t < horizon:
        h = min(h, horizon - t)
        k = [dy]
        for i in range(1, 7):
            yi = y + h * sum(aij * kj for aij, kj in zip(_A[i], k))
            k.append(f(yi))
        y_new = y + h * sum(bi * ki for bi, ki in zip(_B5, k))
        err = abs(h * sum(ei * ki for ei, ki in zip(_E, k)))
        scale = 0.1 * tolerance * max(abs(y), abs(y_new)) + ATOL_FLOOR
        ratio = err / scale
        if ratio <= 1.0:
            t += h
            y = y_new
            dy = k[6]  # FSAL: f(y_new)
            steps += 1
            max_err = max(max_err, err / max(abs(y), ATOL_FLOOR / tolerance))
            if abs(dy) < tolerance * gain * abs(y):
                return y, t, max_err, steps
        fac = 0.9 * ratio ** (-0.2) if ratio > 0 else 5.0
        h *= min(5.0, max(0.2, fac))
    raise ConvergenceError(f"not settled within horizon {horizon:g} ns", best=(y, t, max_err, steps))


def sigma_time_domain(config: GiantAtomConfig, drive: DriveSpec, tolerance=1e-12, horizon=None) -> SteadyStateReport:
    """Steady-state amplitude by explicit time integration from ``sigma = 0``."""
    a, b = _linear_system(config, drive)
    try:
        y, t, err, steps = integrate_to_steady_state(a, b, tolerance, horizon)
    except ConvergenceError as exc:
        y, t, err, steps = exc.best
        raise ConvergenceError(str(exc), best=SteadyStateReport(y, t, err, steps)) from None
    return SteadyStateReport(y, t, err, steps)


def detuning_grid(config: GiantAtomConfig, n=41, span=10.0) -> np.ndarray:
    """``n`` detunings spanning ``+-span * (G0 + |gc(omega0)|)``."""
    gc = abs(complex(effective_coupling(config, config.omega0)))
    width = span * (config.gamma0 + gc)
    return np.linspace(-width, width, n)


def compare(config: GiantAtomConfig, detunings, amplitude=1.0, tolerance=1e-12, horizon=None):
    """Both solvers over a detuning grid. Rows are ``(detuning, freq, time, rel_dev, settle_time)``."""
    rows = []
    for d in detunings:
        drive = DriveSpec(amplitude, float(d))
        s_f = sigma_frequency_domain(config, drive)
        rep = sigma_time_domain(config, drive, tolerance, horizon)
        dev = abs(rep.sigma_minus - s_f) / abs(s_f) if s_f != 0 else abs(rep.sigma_minus)
        rows.append((float(d), s_f, rep.sigma_minus, dev, rep.settle_time))
    return rows
