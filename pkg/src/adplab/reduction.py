"""From vector configurations to the scalar data (alpha_i, u_i).

sigma_i = ||x - y_i||^p / (||x||^p + ||y_i||^p) and
alpha_i = (||x||^p + ||y_i||^p) / 2, and u_i in [-1, 1] solves
(1 - u)^p / (1 + |u|^p) = sigma_i.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lp_core import Configuration, as_exponent

SIGMA_CLAMP = 1e-9
U_TOL = 1e-13
MAX_BISECT = 60


@dataclass(frozen=True, eq=False)
class ReducedConfig:
    """Weights ``alphas`` and parameters ``us`` of one reduced configuration."""

    alphas: np.ndarray
    us: np.ndarray

    def __post_init__(self):
        alphas = np.array(self.alphas, dtype=np.float64).reshape(-1)
        us = np.array(self.us, dtype=np.float64).reshape(-1)
        if alphas.size != us.size or alphas.size == 0:
            raise ValueError("alphas and us must be non-empty and of equal length")
        n = alphas.size
        if not (np.all(np.isfinite(alphas)) and np.all(np.isfinite(us))):
            raise ValueError("non-finite entries")
        lo, hi = 1.0 / (2 * n), (n + 1) / (2 * n)
        if np.any(alphas < lo - 1e-12) or np.any(alphas > hi + 1e-12):
            raise ValueError(f"alphas must lie in [1/(2n), (n+1)/(2n)] = [{lo}, {hi}]")
        if abs(alphas.sum() - 1.0) > 1e-10:
            raise ValueError(f"alphas must sum to 1, got {alphas.sum()!r}")
        if np.any(np.abs(us) > 1.0):
            raise ValueError("us must lie in [-1, 1]")
        alphas.setflags(write=False)
        us.setflags(write=False)
        object.__setattr__(self, "alphas", alphas)
        object.__setattr__(self, "us", us)

    @property
    def n(self) -> int:
        return self.alphas.size

    def with_us(self, us) -> ReducedConfig:
        return ReducedConfig(self.alphas, us)

    def u_caps(self, p) -> np.ndarray:
        """Right-hand side c1 * n^(-1/p) * alpha_i^(-1/p) of the u-bound."""
        c1 = bound_constants(p).c1
        return c1 * (self.n * self.alphas) ** (-1.0 / p)


@dataclass(frozen=True)
class BoundConstants:
    p: float
    c1: float
    c2: float
    c3: float
    c4: float
    c5: float


def bound_constants(p) -> BoundConstants:
    p = as_exponent(p)
    if p <= 2.0:
        raise ValueError("bound constants need p > 2")
    c1 = max(2.0 ** (1.0 - 1.0 / p), 1.0 / (2.0 - 2.0 ** (1.0 / p)))
    c2 = 2.0 ** (p - 2.0) - 1.0
    c3 = p * 2.0 ** (p - 1.0)
    c4 = c2 * 2.0 ** (-p - 2.0)
    c5 = 1.0 / (8.0 + 2.0 ** (p + 3.0))
    return BoundConstants(float(p), c1, c2, c3, c4, c5)


def sigma_alpha(cfg: Configuration):
    """Arrays ``(sigmas, alphas)`` for a configuration."""
    p = cfg.p
    xp = cfg.x.powsum()
    yp = np.array([y.powsum() for y in cfg.ys])
    dp = np.array([(cfg.x - y).powsum() for y in cfg.ys])
    denom = xp + yp
    return dp / denom, denom / 2.0


def sigma_of_u(u, p):
    """Forward map u -> (1 - u)^p / (1 + |u|^p), strictly decreasing on [-1, 1]."""
    u = np.asarray(u, dtype=np.float64)
    return (1.0 - u) ** p / (1.0 + np.abs(u) ** p)


def u_from_sigma(sigma, p):
    """Invert ``sigma_of_u`` by lockstep bisection; scalar or array input."""
    p = as_exponent(p)
    sig = np.array(sigma, dtype=np.float64)
    top = 2.0 ** (p - 1.0)
    if np.any(~np.isfinite(sig)) or np.any(sig < 0.0) or np.any(sig > top + SIGMA_CLAMP):
        raise ValueError(
            f"sigma must lie in [0, 2^(p-1)] = [0, {top}]; "
            "values outside are incompatible with the Clarkson-type bound"
        )
    sig = np.minimum(sig, top)
    lo = np.full(sig.shape, -1.0)
    hi = np.ones(sig.shape)
    for _ in range(MAX_BISECT):
        if np.all(hi - lo <= U_TOL):
            break
        mid = 0.5 * (lo + hi)
        above = sigma_of_u(mid, p) > sig
        lo = np.where(above, mid, lo)
        hi = np.where(above, hi, mid)
    u = 0.5 * (lo + hi)
    u = np.where(sig == 0.0, 1.0, u)
    u = np.where(sig == top, -1.0, u)
    return float(u) if u.ndim == 0 else u


def reduce(cfg: Configuration) -> ReducedConfig:
    sigmas, alphas = sigma_alpha(cfg)
    us = np.atleast_1d(u_from_sigma(sigmas, cfg.p))
    return ReducedConfig(alphas, us)
