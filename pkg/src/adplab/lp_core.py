"""Finite-dimensional l_p vectors, norms, distances and sampled configurations."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


class Exponent(float):
    """A finite exponent p >= 2.

    Behaves as a plain float everywhere; construction is the only check.
    """

    def __new__(cls, p):
        value = float(p)
        if not math.isfinite(value):
            raise ValueError(f"exponent must be finite, got {p!r}")
        if value < 2.0:
            raise ValueError(f"exponent must be >= 2, got {p!r}")
        return super().__new__(cls, value)


def as_exponent(p) -> Exponent:
    return p if isinstance(p, Exponent) else Exponent(p)


def powsum(coords, p) -> float:
    """sum |xi|**p; exact zeros contribute exactly 0."""
    return float(np.sum(np.power(np.abs(coords), p)))


@dataclass(frozen=True, eq=False)
class LpVector:
    coords: np.ndarray
    p: Exponent

    def __post_init__(self):
        arr = np.array(self.coords, dtype=np.float64).reshape(-1)
        if arr.size < 1:
            raise ValueError("LpVector needs at least one coordinate")
        if not np.all(np.isfinite(arr)):
            raise ValueError("LpVector coordinates must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "coords", arr)
        object.__setattr__(self, "p", as_exponent(self.p))

    @property
    def dim(self) -> int:
        return self.coords.size

    def powsum(self) -> float:
        return powsum(self.coords, self.p)

    def __sub__(self, other: LpVector) -> LpVector:
        _check_compatible(self, other)
        return LpVector(self.coords - other.coords, self.p)

    def __neg__(self) -> LpVector:
        return LpVector(-self.coords, self.p)

    def scale(self, c: float) -> LpVector:
        return LpVector(c * self.coords, self.p)

    def __repr__(self):
        return f"LpVector({self.coords.tolist()}, p={float(self.p)})"


def _check_compatible(u: LpVector, v: LpVector) -> None:
    if u.dim != v.dim:
        raise ValueError(f"dimension mismatch: {u.dim} vs {v.dim}")
    if float(u.p) != float(v.p):
        raise ValueError(f"exponent mismatch: {float(u.p)} vs {float(v.p)}")


def norm(v: LpVector) -> float:
    # scale by the largest entry so |x|^p neither underflows nor overflows
    m = float(np.max(np.abs(v.coords)))
    if m == 0.0:
        return 0.0
    return m * powsum(v.coords / m, v.p) ** (1.0 / v.p)


def distance(u: LpVector, v: LpVector) -> float:
    return norm(u - v)


def basis(i: int, d: int, p) -> LpVector:
    e = np.zeros(d)
    e[i] = 1.0
    return LpVector(e, p)


@dataclass(frozen=True, eq=False)
class Configuration:
    """A point ``x`` with ``||x||^p = 1/n`` and ``n`` points whose p-th
    power norms sum to one."""

    x: LpVector
    ys: tuple = field(default_factory=tuple)
    rtol: float = 1e-10

    def __post_init__(self):
        ys = tuple(self.ys)
        object.__setattr__(self, "ys", ys)
        n = len(ys)
        if n < 1:
            raise ValueError("configuration needs at least one y")
        for y in ys:
            _check_compatible(self.x, y)
        xp = self.x.powsum()
        if abs(xp - 1.0 / n) > self.rtol / n:
            raise ValueError(f"||x||^p = {xp!r}, expected 1/n = {1.0 / n!r}")
        total = sum(y.powsum() for y in ys)
        if abs(total - 1.0) > self.rtol:
            raise ValueError(f"sum ||y_i||^p = {total!r}, expected 1")

    @property
    def n(self) -> int:
        return len(self.ys)

    @property
    def p(self) -> Exponent:
        return self.x.p


def random_direction(rng: np.random.Generator, d: int, p) -> np.ndarray:
    """Gaussian direction normalised to unit l_p norm."""
    while True:
        g = rng.standard_normal(d)
        s = powsum(g, p)
        if s > 0.0:
            return g / s ** (1.0 / p)


def sample_configuration(n: int, d: int = 8, seed: int = 0, p=3.0) -> Configuration:
    """Random configuration satisfying both normalisations.

    ``x`` has a random direction scaled to ``||x||^p = 1/n``; the masses
    ``t_i = ||y_i||^p`` are uniform on the simplex (normalised exponential
    spacings) and the directions of the ``y_i`` are independent.
    """
    if n < 1 or d < 1:
        raise ValueError("need n >= 1 and d >= 1")
    p = as_exponent(p)
    rng = np.random.default_rng(seed)
    x = random_direction(rng, d, p) * (1.0 / n) ** (1.0 / p)
    spacings = rng.standard_exponential(n)
    masses = spacings / spacings.sum()
    ys = tuple(
        LpVector(random_direction(rng, d, p) * t ** (1.0 / p), p) for t in masses
    )
    return Configuration(LpVector(x, p), ys)
