"""Small numerical solvers: damped least squares, golden-section, bisection."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize as _sopt

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass
class LSQResult:
    x: np.ndarray
    cost: float
    jac: np.ndarray
    iterations: int
    converged: bool
    method: str
    message: str


def fd_jacobian(fun, x, f0=None, rel_step=None):
    """Central-difference Jacobian of a vector function."""
    x = np.asarray(x, dtype=float)
    if f0 is None:
        f0 = fun(x)
    if rel_step is None:
        rel_step = np.finfo(float).eps ** (1 / 3)
    J = np.empty((f0.size, x.size))
    for j in range(x.size):
        h = rel_step * max(1.0, abs(x[j]))
        xp, xm = x.copy(), x.copy()
        xp[j] += h
        xm[j] -= h
        J[:, j] = (fun(xp) - fun(xm)) / (2 * h)
    return J


def levenberg_marquardt(
    fun,
    x0,
    max_iter=500,
    lam0=1e-3,
    ftol=1e-10,
    gtol=1e-12,
    patience=3,
    jac_mask=None,
    post_step=None,
):
    """Minimize ``0.5 * |fun(x)|^2`` by Levenberg-Marquardt.

    Damping starts at ``lam0`` and is divided by 10 on every accepted step and
    multiplied by 10 on every rejected one.  Converged when the relative cost
    decrease stays below ``ftol`` for ``patience`` accepted steps in a row, or
    when the gradient norm drops below ``gtol``.

    ``jac_mask(x)`` may return a boolean mask of columns to freeze;
    ``post_step(x)`` may map a trial point back into its canonical range.
    A rank-deficient Jacobian falls back to Nelder-Mead on the same cost.
    """
    x = np.asarray(x0, dtype=float).copy()
    r = fun(x)
    cost = 0.5 * float(r @ r)
    lam = lam0
    quiet = 0
    J = fd_jacobian(fun, x, r)
    for it in range(1, max_iter + 1):
        if jac_mask is not None:
            J[:, jac_mask(x)] = 0.0
        g = J.T @ r
        if np.linalg.norm(g) < gtol:
            return LSQResult(x, cost, J, it - 1, True, "lm", "gradient norm below tolerance")
        A = J.T @ J
        active = np.any(J != 0.0, axis=0)
        if np.linalg.matrix_rank(J[:, active]) < int(active.sum()):
            return _simplex(fun, x, max_iter, ftol, post_step, it - 1)
        diag = np.where(active, np.diag(A), 1.0)
        while True:
            M = A + lam * np.diag(diag)
            try:
                step = -np.linalg.solve(M, g)
            except np.linalg.LinAlgError:
                step = -np.linalg.lstsq(M, g, rcond=None)[0]
            x_new = x + step
            if post_step is not None:
                x_new = post_step(x_new)
            r_new = fun(x_new)
            cost_new = 0.5 * float(r_new @ r_new)
            if np.isfinite(cost_new) and cost_new <= cost:
                break
            lam *= 10.0
            if lam > 1e16:
                return LSQResult(x, cost, J, it, True, "lm", "no further decrease possible")
        rel = (cost - cost_new) / cost if cost > 0 else 0.0
        x, r, cost = x_new, r_new, cost_new
        lam = max(lam / 10.0, 1e-15)
        quiet = quiet + 1 if rel < ftol else 0
        J = fd_jacobian(fun, x, r)
        if quiet >= patience:
            return LSQResult(x, cost, J, it, True, "lm", "relative cost decrease below tolerance")
        if cost == 0.0:
            return LSQResult(x, cost, J, it, True, "lm", "zero residual")
    return LSQResult(x, cost, J, max_iter, False, "lm", "iteration cap reached")


def _simplex(fun, x, max_iter, ftol, post_step, done):
    def cost(z):
        if post_step is not None:
            z = post_step(z)
        r = fun(z)
        return 0.5 * float(r @ r)

    res = _sopt.minimize(
        cost, x, method="Nelder-Mead",
        options=dict(maxiter=max(50 * x.size, 10 * max_iter), xatol=1e-12, fatol=0.0, adaptive=True),
    )
    xs = post_step(res.x) if post_step is not None else res.x
    r = fun(xs)
    return LSQResult(xs, 0.5 * float(r @ r), fd_jacobian(fun, xs, r), done + int(res.nit),
                     bool(res.success), "simplex", "rank-deficient Jacobian: " + str(res.message))


def golden_section_max(func, lo, hi, tol=1e-9):
    """Maximizer of a unimodal ``func`` on ``[lo, hi]`` to within ``tol``."""
    a, b = (lo, hi) if lo <= hi else (hi, lo)
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = func(c), func(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = func(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = func(d)
    return 0.5 * (a + b)


def bisect(func, lo, hi, tol=1e-12, max_iter=200):
    """Root of ``func`` in a sign-changing bracket by plain bisection."""
    flo, fhi = func(lo), func(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if np.sign(flo) == np.sign(fhi):
        raise ValueError("bracket does not change sign")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fm = func(mid)
        if fm == 0 or hi - lo < tol:
            return mid
        if np.sign(fm) == np.sign(flo):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)
