"""Least-squares fitting of transmission spectra.

Three models share one parameter vocabulary:

* ``mioa``: giant atom plus quasi-direct background ``mu*exp(i*phi)``
* ``msp``: the same without the background channel
* ``lorentzian``: a single effective rate, no propagation phases

Box bounds are enforced by a change of variables, so the optimizer itself is
unconstrained.  ``phi`` is circular and is wrapped into (-pi, pi] instead.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

import numpy as np

from .errors import ConfigError, DataError, FlatObjectiveError
from .optimize import fd_jacobian, levenberg_marquardt
from .scatter import CouplingPoint, Direct, GiantAtomConfig, transmission

MODEL_PARAMS = {
    "mioa": ("gamma0", "mu", "phi", "gamma", "omega0"),
    "msp": ("gamma0", "gamma", "omega0"),
    "lorentzian": ("gamma0", "gamma_eff", "omega0"),
}

DEFAULT_BOUNDS = {
    "gamma0": (0.0, math.inf),
    "gamma": (0.0, math.inf),
    "gamma_eff": (0.0, math.inf),
    "mu": (0.0, 1.0),
    "phi": (-math.inf, math.inf),
    "omega0": (-math.inf, math.inf),
}

MU_GAUGE_FLOOR = 1e-6


@dataclass(frozen=True)
class Spectrum:
    frequency: np.ndarray
    transmission: np.ndarray
    sigma: Optional[np.ndarray] = None

    def __post_init__(self):
        f = np.asarray(self.frequency, dtype=float)
        t = np.asarray(self.transmission, dtype=float)
        if f.ndim != 1 or f.shape != t.shape or f.size < 1:
            raise DataError("frequency and transmission must be equal-length 1-d sequences")
        if np.any(np.diff(f) <= 0):
            raise DataError("frequencies must be strictly increasing")
        if np.any(t < 0) or not np.all(np.isfinite(t)):
            raise DataError("transmission must be finite and >= 0")
        object.__setattr__(self, "frequency", f)
        object.__setattr__(self, "transmission", t)
        if self.sigma is not None:
            s = np.asarray(self.sigma, dtype=float)
            if s.shape != f.shape or np.any(~(s > 0)):
                raise DataError("sigma must be > 0 with one value per point")
            object.__setattr__(self, "sigma", s)

    def __len__(self):
        return self.frequency.size

    @property
    def weights(self) -> np.ndarray:
        if self.sigma is None:
            return np.ones_like(self.frequency)
        return 1.0 / self.sigma**2


@dataclass(frozen=True)
class FreeParam:
    name: str
    initial: float
    lower: float = -math.inf
    upper: float = math.inf


@dataclass
class FitProblem:
    model: str
    fixed: Mapping[str, float]
    free: Sequence[FreeParam]
    data: Spectrum
    geometry: GiantAtomConfig

    def __post_init__(self):
        if self.model not in MODEL_PARAMS:
            raise ConfigError(f"unknown model {self.model!r}", key="mode")
        names = MODEL_PARAMS[self.model]
        free_names = [p.name for p in self.free]
        if len(set(free_names)) != len(free_names):
            raise ConfigError("duplicate free parameter", key="free")
        both = set(free_names) & set(self.fixed)
        if both:
            raise ConfigError(f"parameters both free and fixed: {sorted(both)}", key=sorted(both)[0])
        for name in list(self.fixed) + free_names:
            if name not in names:
                raise ConfigError(f"{name!r} is not a parameter of model {self.model!r}", key=name)
        missing = [n for n in names if n not in self.fixed and n not in free_names]
        if missing:
            raise ConfigError(f"parameters neither free nor fixed: {missing}", key=missing[0])
        for p in self.free:
            if not p.lower <= p.initial <= p.upper:
                raise ConfigError(f"initial value of {p.name} outside its bounds", key=p.name)

    @classmethod
    def build(cls, model, data, geometry, values, free=(), bounds=None):
        """Problem with ``free`` names started at ``values`` and the rest fixed."""
        bounds = dict(bounds or {})
        fixed = {k: float(v) for k, v in values.items() if k not in free and k in MODEL_PARAMS.get(model, ())}
        params = []
        for name in free:
            lo, hi = bounds.get(name, DEFAULT_BOUNDS.get(name, (-math.inf, math.inf)))
            params.append(FreeParam(name, float(values[name]), lo, hi))
        return cls(model, fixed, params, data, geometry)


@dataclass
class FitResult:
    estimates: dict
    free: tuple
    rmse: float
    cost: float
    covariance_proxy: np.ndarray
    iterations: int
    converged: bool
    method: str = "lm"
    message: str = ""

    def stderr(self) -> dict:
        d = np.sqrt(np.clip(np.diag(self.covariance_proxy), 0.0, None))
        return dict(zip(self.free, d))


def atom_config(params: Mapping[str, float], geometry: GiantAtomConfig) -> GiantAtomConfig:
    """``geometry`` with ``omega0``, ``gamma0`` and a uniform ``gamma`` substituted."""
    pts = geometry.points
    if "gamma" in params:
        pts = tuple(CouplingPoint(p.position, float(params["gamma"])) for p in pts)
    return GiantAtomConfig(float(params["omega0"]), float(params["gamma0"]), pts, geometry.medium)


def _wrap(phi):
    w = math.remainder(phi, 2 * math.pi)
    return math.pi if w == -math.pi else w


def model_transmission(params: Mapping[str, float], geometry: GiantAtomConfig, frequency, model="mioa"):
    """Transmission probability of ``model`` evaluated at ``frequency``."""
    if model not in MODEL_PARAMS:
        raise ConfigError(f"unknown model {model!r}", key="mode")
    missing = [n for n in MODEL_PARAMS[model] if n not in params]
    if missing:
        raise ConfigError(f"missing parameters for {model}: {missing}", key=missing[0])
    if model == "lorentzian":
        delta = np.asarray(frequency, dtype=float) - params["omega0"]
        base = 1j * delta + params["gamma0"]
        return np.abs(base / (base + 0.5 * params["gamma_eff"])) ** 2
    config = atom_config(params, geometry)
    channel = None
    if model == "mioa" and params["mu"] != 0.0:
        channel = Direct(float(params["mu"]), _wrap(float(params["phi"])))
    return transmission(config, channel, frequency)


class _Transform:
    """Bijection between bounded external values and unbounded internal ones."""

    def __init__(self, p: FreeParam):
        self.name = p.name
        self.lo, self.hi = p.lower, p.upper
        self.circular = p.name == "phi" and not (math.isfinite(p.lower) or math.isfinite(p.upper))
        x0 = p.initial
        if math.isfinite(self.lo) and math.isfinite(self.hi):
            self.kind = "box"
        elif math.isfinite(self.lo):
            self.kind = "lower"
            self.scale = abs(x0 - self.lo) or 1.0
        elif math.isfinite(self.hi):
            self.kind = "upper"
            self.scale = abs(self.hi - x0) or 1.0
        else:
            self.kind = "free"
            self.scale = 1.0 if self.circular else (abs(x0) or 1.0)

    def to_ext(self, u):
        if self.kind == "box":
            return self.lo + (self.hi - self.lo) * 0.5 * (math.sin(u) + 1.0)
        if self.kind == "lower":
            return self.lo + self.scale * (math.sqrt(u * u + 1.0) - 1.0)
        if self.kind == "upper":
            return self.hi - self.scale * (math.sqrt(u * u + 1.0) - 1.0)
        x = self.scale * u
        return _wrap(x) if self.circular else x

    def slope(self, u):
        """``d(ext)/d(int)`` at internal value ``u``."""
        if self.kind == "box":
            return (self.hi - self.lo) * 0.5 * math.cos(u)
        if self.kind in ("lower", "upper"):
            return self.scale * u / math.sqrt(u * u + 1.0)
        return self.scale

    def to_int(self, x):
        if self.kind == "box":
            return math.asin(min(1.0, max(-1.0, 2.0 * (x - self.lo) / (self.hi - self.lo) - 1.0)))
        if self.kind == "lower":
            return math.sqrt(max(((x - self.lo) / self.scale + 1.0) ** 2 - 1.0, 0.0))
        if self.kind == "upper":
            return math.sqrt(max(((self.hi - x) / self.scale + 1.0) ** 2 - 1.0, 0.0))
        return x / self.scale


def _check_data(problem: FitProblem):
    data = problem.data
    if len(data) < 2 * len(problem.free):
        raise DataError(f"need at least {2 * len(problem.free)} points for {len(problem.free)} free parameters")
    if len(problem.free) and np.ptp(data.transmission) == 0.0:
        raise FlatObjectiveError("transmission is constant; the objective is flat")


def _single_fit(problem: FitProblem, starts: Sequence[float], max_iter: int) -> FitResult:
    data = problem.data
    sw = np.sqrt(data.weights)
    names = [p.name for p in problem.free]
    tr = [_Transform(FreeParam(p.name, s, p.lower, p.upper)) for p, s in zip(problem.free, starts)]

    def params_of(ext):
        out = dict(problem.fixed)
        out.update(zip(names, ext))
        return out

    def ext_of(u):
        return [t.to_ext(v) for t, v in zip(tr, u)]

    def resid_ext(ext):
        model = model_transmission(params_of(ext), problem.geometry, data.frequency, problem.model)
        return sw * (model - data.transmission)

    def resid(u):
        return resid_ext(ext_of(u))

    def jac_mask(u):
        mask = np.zeros(len(tr), dtype=bool)
        if "phi" in names:
            if params_of(ext_of(u)).get("mu", 1.0) < MU_GAUGE_FLOOR:
                mask[names.index("phi")] = True
        return mask

    def post_step(u):
        u = np.array(u, dtype=float)
        for i, t in enumerate(tr):
            if t.circular:
                u[i] = _wrap(u[i])
        return u

    u0 = np.array([t.to_int(s) for t, s in zip(tr, starts)])
    lsq = levenberg_marquardt(resid, u0, max_iter=max_iter, jac_mask=jac_mask, post_step=post_step)
    ext = ext_of(lsq.x)
    estimates = params_of(ext)
    if "phi" in estimates:
        estimates["phi"] = _wrap(estimates["phi"])
    r = resid_ext(ext)
    # covariance in internal coordinates, mapped out with the transform slopes
    J = fd_jacobian(resid, lsq.x, r)
    slopes = np.diag([t.slope(u) for t, u in zip(tr, lsq.x)])
    dof = max(len(data) - len(names), 1)
    s2 = float(r @ r) / dof
    cov = slopes @ (s2 * np.linalg.pinv(J.T @ J)) @ slopes
    cov = 0.5 * (cov + cov.T)
    plain = model_transmission(estimates, problem.geometry, data.frequency, problem.model) - data.transmission
    return FitResult(
        estimates=estimates,
        free=tuple(names),
        rmse=float(np.sqrt(np.mean(plain**2))),
        cost=float(r @ r),
        covariance_proxy=cov,
        iterations=lsq.iterations,
        converged=lsq.converged,
        method=lsq.method,
        message=lsq.message,
    )


def fit(problem: FitProblem, max_iter=500, n_starts=1, seed=0, spread=0.2) -> FitResult:
    """Weighted least-squares fit of ``problem``.

    Extra starts (``n_starts > 1``) perturb the initial values uniformly by up
    to ``spread`` (relative), using ``seed``; the lowest cost wins and ties go
    to the earliest start, so results are deterministic.
    """
    _check_data(problem)
    if not problem.free:
        model = model_transmission(dict(problem.fixed), problem.geometry, problem.data.frequency, problem.model)
        res = model - problem.data.transmission
        return FitResult(dict(problem.fixed), (), float(np.sqrt(np.mean(res**2))),
                         float(np.sum(problem.data.weights * res**2)), np.zeros((0, 0)), 0, True,
                         "none", "no free parameters")
    rng = np.random.default_rng(seed)
    initial = [p.initial for p in problem.free]
    starts = [initial]
    for _ in range(n_starts - 1):
        trial = []
        for p in problem.free:
            v = p.initial * (1.0 + spread * rng.uniform(-1.0, 1.0))
            trial.append(min(max(v, p.lower), p.upper))
        starts.append(trial)
    best = None
    for s in starts:
        res = _single_fit(problem, s, max_iter)
        if best is None or res.cost < best.cost:
            best = res
    return best


def synth_spectrum(params, geometry, grid, noise_sigma=0.0, seed=0, model="mioa") -> Spectrum:
    """Model trace on ``grid`` plus seeded Gaussian noise, clamped at zero."""
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise DataError("grid is empty")
    if noise_sigma < 0:
        raise DataError("noise_sigma must be >= 0")
    t = np.asarray(model_transmission(params, geometry, grid, model), dtype=float)
    if noise_sigma > 0:
        t = np.clip(t + np.random.default_rng(seed).normal(0.0, noise_sigma, t.shape), 0.0, None)
    return Spectrum(grid, t)
