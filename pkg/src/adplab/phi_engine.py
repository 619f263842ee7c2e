"""The Rademacher sign average phi, its partial derivatives and the scalar
helper functions v, w, f, g used to bound it.

With ``T(u, eps) = (1 + eps*u)^p / (1 + |u|^p) = v(|u|) + eps*sign(u)*w(|u|)``
the inner sum is affine in the signs, ``S(eps) = C + eps @ b``.  The kernels
instead receive the two non-negative weighted terms of every coordinate
(see ``term_tables``): building ``S`` from those avoids the cancellation
in ``C - |b|`` when some ``|u_i| = 1`` makes ``S`` vanish.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from ._search import scan_and_refine
from .lp_core import as_exponent
from .reduction import ReducedConfig

ENUM_CAP = 24
MC_CHUNK = 1 << 21


@dataclass(frozen=True)
class PhiResult:
    value: float
    method: str
    samples: int = 0
    std_error: float = 0.0


def as_signs(eps, n: int) -> np.ndarray:
    arr = np.asarray(eps, dtype=np.float64).reshape(-1)
    if arr.size != n:
        raise ValueError(f"sign vector has length {arr.size}, expected {n}")
    if not np.all(np.abs(arr) == 1.0):
        raise ValueError("sign entries must be exactly +1 or -1")
    return arr


def v(u, p):
    u = np.asarray(u, dtype=np.float64)
    return ((1.0 + u) ** p + (1.0 - u) ** p) / (2.0 * (1.0 + u ** p))


def w(u, p):
    u = np.asarray(u, dtype=np.float64)
    return ((1.0 + u) ** p - (1.0 - u) ** p) / (2.0 * (1.0 + u ** p))


def term(u, eps, p):
    """(1 + eps*u)^p / (1 + |u|^p)."""
    u = np.asarray(u, dtype=np.float64)
    return (1.0 + eps * u) ** p / (1.0 + np.abs(u) ** p)


def affine_form(rc: ReducedConfig, p):
    """``(C, b)`` with ``S(eps) = C + eps @ b``."""
    au = np.abs(rc.us)
    C = float(np.sum(rc.alphas * v(au, p)))
    b = rc.alphas * np.sign(rc.us) * w(au, p)
    return C, np.ascontiguousarray(b)


def term_tables(rc: ReducedConfig, p):
    """``(tm, tp)`` with ``tm[i] = alpha_i T(u_i, -1)`` and ``tp[i] = alpha_i T(u_i, +1)``."""
    tm = np.ascontiguousarray(rc.alphas * term(rc.us, -1.0, p))
    tp = np.ascontiguousarray(rc.alphas * term(rc.us, 1.0, p))
    return tm, tp


def inner_sum(rc: ReducedConfig, eps, p) -> float:
    eps = as_signs(eps, rc.n)
    return float(np.sum(rc.alphas * term(rc.us, eps, p)))


def a_j(rc: ReducedConfig, eps, p, j: int) -> float:
    """Inner sum with the j-th term removed."""
    if not 0 <= j < rc.n:
        raise IndexError(f"index {j} out of range for n={rc.n}")
    eps = as_signs(eps, rc.n)
    keep = np.arange(rc.n) != j
    return float(np.sum(rc.alphas[keep] * term(rc.us[keep], eps[keep], p)))


def _check_cap(n, enum_cap):
    if n > enum_cap:
        raise ValueError(
            f"n={n} exceeds the enumeration cap {enum_cap}; use phi_mc instead"
        )


def phi_exact(rc: ReducedConfig, p, enum_cap: int = ENUM_CAP, backend=None) -> PhiResult:
    p = as_exponent(p)
    _check_cap(rc.n, enum_cap)
    tm, tp = term_tables(rc, p)
    if np.array_equal(tm, tp):
        return PhiResult(float(np.sum(tm)) ** (1.0 / p), "exact")
    total = kernels.get_backend(backend).phi_sum(tm, tp, 1.0 / p)
    return PhiResult(float(total) / 2.0 ** rc.n, "exact")


def _sign_chunks(rng, samples, n):
    rows = max(1, MC_CHUNK // max(n, 1))
    done = 0
    while done < samples:
        m = min(rows, samples - done)
        yield (2 * rng.integers(0, 2, size=(m, n), dtype=np.int8) - 1).astype(np.int8)
        done += m


def phi_mc(rc: ReducedConfig, p, samples: int = 100_000, seed: int = 0, backend=None) -> PhiResult:
    """Monte Carlo mean over uniformly random sign vectors."""
    if samples < 100:
        raise ValueError("phi_mc needs at least 100 samples")
    p = as_exponent(p)
    tm, tp = term_tables(rc, p)
    kern = kernels.get_backend(backend)
    rng = np.random.default_rng(seed)
    terms = np.concatenate([
        kern.mc_terms(tm, tp, signs, 1.0 / p) for signs in _sign_chunks(rng, samples, rc.n)
    ])
    return PhiResult(
        float(terms.mean()), "monte_carlo", samples,
        float(terms.std(ddof=1) / np.sqrt(samples)),
    )


def phi(rc: ReducedConfig, p, samples: int = 100_000, seed: int = 0,
        enum_cap: int = ENUM_CAP, backend=None) -> PhiResult:
    if rc.n <= enum_cap:
        return phi_exact(rc, p, enum_cap, backend)
    return phi_mc(rc, p, samples, seed, backend)


def _k_factors(u, p):
    """k+ = (1+u)^(p-1) (1-u^(p-1)) and k- = (1-u)^(p-1) (1+u^(p-1)) for u in [0, 1]."""
    up = u ** (p - 1.0)
    return (1.0 + u) ** (p - 1.0) * (1.0 - up), (1.0 - u) ** (p - 1.0) * (1.0 + up)


def phi_gradient(rc: ReducedConfig, p, enum_cap: int = ENUM_CAP, backend=None):
    """Value and all partial derivatives by exact enumeration.

    Requires every ``u_j`` in [0, 1].  Sign vectors with ``S = 0`` are
    skipped in the derivative sums; they only arise when ``u_j = 1``.
    """
    p = as_exponent(p)
    _check_cap(rc.n, enum_cap)
    u = rc.us
    if np.any(u < 0.0):
        raise ValueError("phi_gradient needs all u_j in [0, 1]")
    tm, tp = term_tables(rc, p)
    total, plus, total_q = kernels.get_backend(backend).phi_grad_sums(tm, tp, float(p))
    k_plus, k_minus = _k_factors(u, p)
    weighted = k_plus * plus - k_minus * (total_q - plus)
    grad = rc.alphas / (1.0 + u ** p) ** 2 * weighted / 2.0 ** rc.n
    return float(total) / 2.0 ** rc.n, grad


def phi_partial(rc: ReducedConfig, p, j: int, enum_cap: int = ENUM_CAP, backend=None) -> float:
    if not 0 <= j < rc.n:
        raise IndexError(f"index {j} out of range for n={rc.n}")
    if not 0.0 <= rc.us[j] <= 1.0:
        raise ValueError("phi_partial needs u_j in [0, 1]")
    # negative u elsewhere: reflect them, phi is invariant under u_i -> -u_i
    rc_pos = rc.with_us(np.abs(rc.us))
    _, grad = phi_gradient(rc_pos, p, enum_cap, backend)
    return float(grad[j])


@dataclass(frozen=True)
class PairedPartials:
    """Monte Carlo partial derivatives from paired sign samples."""

    estimate: np.ndarray
    std_error: np.ndarray
    min_pair: np.ndarray
    samples: int


def paired_samples(rc: ReducedConfig, p, signs, backend=None):
    """``(a, D)`` arrays for a block of int8 sign rows; see ``paired_terms``."""
    tm, tp = term_tables(rc, p)
    k_plus, k_minus = _k_factors(rc.us, p)
    return kernels.get_backend(backend).paired_terms(
        tm, tp, signs, k_plus, k_minus, 1.0 / p - 1.0)


def phi_partial_mc(rc: ReducedConfig, p, samples: int = 256, seed: int = 0,
                   backend=None) -> PairedPartials:
    """Unbiased estimates of every partial derivative (all ``u_j`` in [0, 1]).

    Each sample fixes all signs but the j-th and sums the two values of the
    j-th sign, so the estimate is positive whenever every paired summand is.
    """
    p = as_exponent(p)
    if np.any(rc.us < 0.0):
        raise ValueError("phi_partial_mc needs all u_j in [0, 1]")
    rng = np.random.default_rng(seed)
    scale = rc.alphas / (1.0 + rc.us ** p) ** 2 / 2.0
    sums = np.zeros(rc.n)
    sq = np.zeros(rc.n)
    mins = np.full(rc.n, np.inf)
    for signs in _sign_chunks(rng, samples, rc.n):
        _, D = paired_samples(rc, p, signs, backend)
        sums += D.sum(axis=0)
        sq += (D * D).sum(axis=0)
        mins = np.minimum(mins, D.min(axis=0))
    mean = sums / samples
    var = np.maximum(sq / samples - mean ** 2, 0.0) * samples / max(samples - 1, 1)
    return PairedPartials(scale * mean, scale * np.sqrt(var / samples), mins, samples)


def f(u, p):
    """The ratio bounding a_j / alpha_j, evaluated without cancellation.

    Writing x = u^(p-1), r = p/(p-1), E = log(1+x) - log(1-x) and
    Delta = p (log(1+u) - log(1-u)) - r E, the defining quotient reduces to

        f = exp(p log(1+u) - r E) * expm1(r E) / ((1 + u^p) expm1(Delta)),

    which keeps full relative accuracy as u -> 0 and u -> 1, where the
    direct form is 0/0.
    """
    p = as_exponent(p)
    if p <= 2.0:
        raise ValueError("f needs p > 2")
    u = np.asarray(u, dtype=np.float64)
    if np.any((u <= 0.0) | (u >= 1.0)):
        raise ValueError("f is defined on the open interval (0, 1)")
    r = p / (p - 1.0)
    lu = np.log(u)
    x = np.exp((p - 1.0) * lu)
    one_minus_x = -np.expm1((p - 1.0) * lu)
    E = np.where(x < 0.5, 2.0 * np.arctanh(np.minimum(x, 0.5)),
                 np.log1p(x) - np.log(one_minus_x))
    delta = 2.0 * p * np.arctanh(u) - r * E
    out = np.exp(p * np.log1p(u) - r * E) * np.expm1(r * E) / ((1.0 + u ** p) * np.expm1(delta))
    return float(out) if out.ndim == 0 else out


def f_sup(p, grid: int = 10_000) -> float:
    """Grid maximum of f on (0, 1), refined by golden section.

    An empirical stand-in for the sup norm of f, which is never quantified
    in closed form.
    """
    if grid < 1000:
        raise ValueError("f_sup needs grid >= 1000")
    eps = 0.5 / grid
    _, val = scan_and_refine(lambda t: f(t, p), eps, 1.0 - eps, grid, maximize=True)
    return val


def g(u, p):
    """(1 + T(u,+1))^(1/p) + (1 + T(u,-1))^(1/p)."""
    u = np.asarray(u, dtype=np.float64)
    up = 1.0 + u ** p
    return (1.0 + (1.0 + u) ** p / up) ** (1.0 / p) + (1.0 + (1.0 - u) ** p / up) ** (1.0 / p)
