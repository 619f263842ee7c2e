"""The two critical exponents: the intro threshold where (3^(1/p) + 1) / 8^(1/p)
crosses 1, and p0, the infimum of p for which g(u) >= 2^(1 + 1/p) on [0, 1]."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._search import scan_and_refine
from .lp_core import as_exponent
from .phi_engine import g

G_SCAN_START = 1e-6
P0_PREDICATE_TOL = -1e-10


@dataclass(frozen=True)
class RootResult:
    value: float
    bracket: tuple
    tolerance: float
    iterations: int


def bisect(func, lo: float, hi: float, tol: float, max_iter: int = 200) -> RootResult:
    """Bisection on a sign change of ``func``, or on a boolean predicate.

    With a predicate, ``func(lo)`` must be False and ``func(hi)`` True and
    the returned bracket straddles the flip.  Stops once ``hi - lo <= 2 tol``.
    """
    f_lo, f_hi = func(lo), func(hi)
    if isinstance(f_lo, (bool, np.bool_)):
        side = lambda val: bool(val)  # noqa: E731
    else:
        side = lambda val: val > 0.0  # noqa: E731
    if side(f_lo) == side(f_hi):
        raise ValueError(f"no sign change on bracket [{lo}, {hi}]")
    hi_side = side(f_hi)
    it = 0
    while hi - lo > 2.0 * tol and it < max_iter:
        mid = 0.5 * (lo + hi)
        if side(func(mid)) == hi_side:
            hi = mid
        else:
            lo = mid
        it += 1
    return RootResult(0.5 * (lo + hi), (lo, hi), tol, it)


def intro_ratio(p):
    """Upper bound (3^(1/p) + 1) / 8^(1/p) for the all-ones configuration."""
    return (3.0 ** (1.0 / p) + 1.0) / 8.0 ** (1.0 / p)


def threshold_intro(tol: float = 1e-8) -> RootResult:
    return bisect(lambda p: intro_ratio(p) - 1.0, 2.0, 3.0, tol)


def g_min(p, grid: int = 10_000):
    """Minimum over u in [1e-6, 1] of g(u) - 2^(1 + 1/p), as ``(u_star, value)``.

    The boundary u = 0, where equality holds for every p, is left out.
    """
    if grid < 1000:
        raise ValueError("g_min needs grid >= 1000")
    p = as_exponent(p)
    level = 2.0 ** (1.0 + 1.0 / p)
    return scan_and_refine(lambda u: g(u, p) - level, G_SCAN_START, 1.0, grid)


def p_zero(tol: float = 1e-6, grid: int = 10_000, bracket=(2.05, 2.5)) -> RootResult:
    return bisect(lambda p: g_min(p, grid)[1] >= P0_PREDICATE_TOL, *bracket, tol)
