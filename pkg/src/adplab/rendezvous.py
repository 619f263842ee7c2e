"""Average distance on finite-dimensional l_p unit spheres.

Exploratory only: for a fixed point set this estimates the range
[min, max] of the average distance over the sphere.  Finite-dimensional
spheres are compact and connected, so nothing here bears on uniqueness
of rendezvous numbers in infinite dimensions.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lp_core import LpVector, as_exponent, norm, random_direction

UNIT_TOL = 1e-8


@dataclass(frozen=True)
class AvgDistInterval:
    lo: float
    hi: float
    starts: int
    converged: bool


def _stack(points):
    if not points:
        raise ValueError("need at least one point")
    p = points[0].p
    d = points[0].dim
    for q in points:
        if q.dim != d or float(q.p) != float(p):
            raise ValueError("points must share dimension and exponent")
        if abs(norm(q) - 1.0) > UNIT_TOL:
            raise ValueError(f"point {q!r} is not on the unit sphere")
    return np.stack([q.coords for q in points]), as_exponent(p)


def avg_distance(points, x: LpVector) -> float:
    Y, p = _stack(list(points) + [x])
    return float(_avg(Y[:-1], Y[-1], p))


def _avg(Y, x, p):
    return np.mean(np.sum(np.abs(x - Y) ** p, axis=1) ** (1.0 / p))


def _avg_and_grad(Y, x, p):
    Z = x - Y
    absz = np.abs(Z)
    nrm = np.sum(absz ** p, axis=1) ** (1.0 / p)
    live = nrm > 0.0
    # gradient of ||z||_p is sign(z) |z|^(p-1) / ||z||^(p-1); zero at z = 0
    grad = (np.sign(Z[live]) * (absz[live] / nrm[live, None]) ** (p - 1.0)).sum(axis=0)
    return nrm.mean(), grad / Y.shape[0]


def _to_sphere(x, p):
    return x / np.sum(np.abs(x) ** p) ** (1.0 / p)


def _sphere_normal(x, p):
    nvec = np.sign(x) * np.abs(x) ** (p - 1.0)
    return nvec / np.linalg.norm(nvec)


def _descend(Y, x, p, direction, tol=1e-10, max_iter=2000):
    """Projected (sub)gradient descent (direction=+1) or ascent (-1) on the sphere.

    Steps are taken along the tangential part of the gradient, then the
    point is renormalised; the step length backtracks until the objective
    improves.  Converged once an accepted step improves by less than ``tol``
    or no step down to 1e-16 improves at all.
    """
    val, grad = _avg_and_grad(Y, x, p)
    val *= direction
    step = 0.5
    for _ in range(max_iter):
        gdir = direction * grad
        nvec = _sphere_normal(x, p)
        tang = gdir - (gdir @ nvec) * nvec
        gn = np.linalg.norm(tang)
        if gn == 0.0:
            return direction * val, x, True
        tang /= gn
        while step > 1e-16:
            cand = _to_sphere(x - step * tang, p)
            cval, cgrad = _avg_and_grad(Y, cand, p)
            cval *= direction
            if cval < val:
                break
            step *= 0.5
        else:
            return direction * val, x, True
        improvement = val - cval
        x, val, grad = cand, cval, cgrad
        step = min(2.0 * step, 1.0)
        if improvement < tol:
            return direction * val, x, True
    return direction * val, x, False


def interval(points, starts: int = 8, seed: int = 0) -> AvgDistInterval:
    """Multi-start estimate of the min and max average distance over the sphere.

    Starts are the points themselves, their antipodes and ``starts`` random
    directions.
    """
    if starts < 1:
        raise ValueError("need at least one start")
    Y, p = _stack(list(points))
    rng = np.random.default_rng(seed)
    inits = [y for y in Y] + [-y for y in Y]
    inits += [random_direction(rng, Y.shape[1], p) for _ in range(starts)]
    lo, hi = np.inf, -np.inf
    converged = True
    for x0 in inits:
        x0 = _to_sphere(np.asarray(x0, dtype=np.float64), p)
        vmin, _, ok_min = _descend(Y, x0, p, +1)
        vmax, _, ok_max = _descend(Y, x0, p, -1)
        lo, hi = min(lo, vmin), max(hi, vmax)
        converged = converged and ok_min and ok_max
    return AvgDistInterval(float(lo), float(hi), len(inits), converged)


def circle_oracle(points, grid: int = 100_000):
    """Dense angular grid over the d = 2 sphere: ``(min, max)`` of the average distance."""
    Y, p = _stack(list(points))
    if Y.shape[1] != 2:
        raise ValueError("circle oracle needs d = 2")
    theta = np.linspace(0.0, 2.0 * np.pi, grid, endpoint=False)
    X = np.stack([np.cos(theta), np.sin(theta)], axis=1)
    X /= (np.sum(np.abs(X) ** p, axis=1) ** (1.0 / p))[:, None]
    vals = np.mean(np.sum(np.abs(X[:, None, :] - Y[None]) ** p, axis=2) ** (1.0 / p), axis=1)
    return float(vals.min()), float(vals.max())


def random_sphere_points(n: int, d: int, p, seed: int = 0):
    p = as_exponent(p)
    rng = np.random.default_rng(seed)
    return [LpVector(random_direction(rng, d, p), p) for _ in range(n)]


def dimension_sweep(n: int, dims, p, starts: int = 8, seed: int = 0):
    """Interval per dimension for ``n`` random sphere points; rows of dicts."""
    rows = []
    for d in dims:
        pts = random_sphere_points(n, d, p, seed)
        iv = interval(pts, starts, seed)
        rows.append({"d": int(d), "p": float(p), "n": n, "lo": iv.lo, "hi": iv.hi,
                     "starts": iv.starts, "converged": iv.converged})
    return rows
