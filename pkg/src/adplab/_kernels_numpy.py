"""Pure-numpy kernels.

Every kernel sees the sign average through two weighted term tables,
``tm[i] = alpha_i T(u_i, -1)`` and ``tp[i] = alpha_i T(u_i, +1)``, both
non-negative, so that ``S(eps)`` is the sum of ``tp[i]`` over the plus
signs and ``tm[i]`` over the minus signs.  Forming ``S`` from non-negative
parts only keeps its relative accuracy when it is close to zero (which
happens whenever some ``|u_i| = 1``).

Exact sweeps split the sign vector into a low block (enumerated once as a
matrix) and a high block walked in chunks, so memory stays at
``2**low_bits`` per chunk row.
"""
import numpy as np

LOW_BITS = 12
CHUNK_ROWS = 64


def sign_matrix(k):
    """All ``2**k`` sign vectors of length k, row r having bit i of r -> +1."""
    if k == 0:
        return np.ones((1, 0))
    bits = (np.arange(1 << k)[:, None] >> np.arange(k)) & 1
    return (2 * bits - 1).astype(np.float64)


def _partial_sums(signs, tm, tp):
    """Row-wise S contributions from a +-1 matrix; additions of non-negatives only."""
    plus = signs > 0
    return plus @ tp + (~plus) @ tm


def _split(tm, tp):
    n = tm.size
    nl = min(n, LOW_BITS)
    low, high = sign_matrix(nl), sign_matrix(n - nl)
    L = _partial_sums(low, tm[:nl], tp[:nl])
    H = _partial_sums(high, tm[nl:], tp[nl:])
    return low, high, nl, L, H


def phi_sum(tm, tp, inv_p):
    """Sum over all sign vectors of ``S ** inv_p``."""
    _, _, _, L, H = _split(tm, tp)
    total = 0.0
    for start in range(0, H.size, CHUNK_ROWS):
        S = H[start:start + CHUNK_ROWS, None] + L[None, :]
        total += np.power(S, inv_p).sum()
    return total


def phi_grad_sums(tm, tp, p):
    """Sign sums needed for the value and every partial derivative.

    Returns ``(sum S**(1/p), plus, total_q)`` where ``total_q`` sums
    ``S**(1/p - 1)`` over all sign vectors with ``S > 0`` and ``plus[j]``
    restricts that sum to vectors with ``eps_j = +1``.
    """
    inv_p = 1.0 / p
    q = inv_p - 1.0
    low, high, nl, L, H = _split(tm, tp)
    low_plus = low > 0
    high_plus = high > 0
    total = 0.0
    total_q = 0.0
    plus = np.zeros(tm.size)
    for start in range(0, H.size, CHUNK_ROWS):
        S = H[start:start + CHUNK_ROWS, None] + L[None, :]
        total += np.power(S, inv_p).sum()
        pos = S > 0.0
        Sq = np.zeros_like(S)
        Sq[pos] = np.power(S[pos], q)
        total_q += Sq.sum()
        plus[:nl] += Sq.sum(axis=0) @ low_plus
        plus[nl:] += Sq.sum(axis=1) @ high_plus[start:start + CHUNK_ROWS]
    return total, plus, total_q


def mc_terms(tm, tp, signs, inv_p):
    """``S ** inv_p`` for each row of an int8 sign matrix."""
    return np.power(_partial_sums(signs, tm, tp), inv_p)


def paired_terms(tm, tp, signs, k_plus, k_minus, q):
    """Per-sample, per-coordinate paired summands of the partial derivatives.

    For each sampled sign row and each coordinate j the j-th sign is
    replaced by both values; ``a`` is the sum with term j deleted and ``D``
    the paired difference ``k+ (a + tp_j)**q - k- (a + tm_j)**q``.
    """
    plus = signs > 0
    S = _partial_sums(signs, tm, tp)
    own = np.where(plus, tp, tm)
    a = np.maximum(S[:, None] - own, 0.0)
    A_plus = a + tp
    A_minus = a + tm
    with np.errstate(divide="ignore", invalid="ignore"):
        D = k_plus * np.power(A_plus, q) - np.where(
            k_minus > 0, k_minus * np.power(A_minus, q), 0.0)
    return a, D
