import numpy as np
from scipy.optimize import minimize_scalar


def scan_and_refine(func, lo, hi, grid, maximize=False, xtol=1e-12):
    """Extremum of a scalar function on [lo, hi]: grid scan, then golden section.

    ``func`` must accept numpy arrays.  Refinement uses the bracket formed by
    the grid neighbours of the scan optimum and is skipped when that optimum
    sits on the boundary.  Returns ``(argopt, value)``.
    """
    sign = -1.0 if maximize else 1.0
    xs = np.linspace(lo, hi, grid)
    vals = sign * np.asarray(func(xs), dtype=np.float64)
    k = int(np.argmin(vals))
    best_x, best_v = float(xs[k]), float(vals[k])
    if 0 < k < grid - 1 and vals[k] < vals[k - 1] and vals[k] < vals[k + 1]:
        res = minimize_scalar(
            lambda t: sign * float(func(np.float64(t))),
            bracket=(xs[k - 1], xs[k], xs[k + 1]),
            method="golden",
            options={"xtol": xtol},
        )
        if res.fun < best_v and lo <= res.x <= hi:
            best_x, best_v = float(res.x), float(res.fun)
    return best_x, sign * best_v
