"""Numba kernels; same signatures and semantics as ``_kernels_numpy``.

Exact sweeps walk the low ``LOW_BITS`` signs in Gray-code order, updating
``S`` by one term per step, and recompute ``S`` from scratch at the start
of every block of high signs.  The running sum is carried as an unevaluated
pair ``hi + lo`` updated with error-free two-sum steps, so removing a term
that was added earlier cancels it to within ``eps**2`` instead of ``eps``;
this matters where ``S`` is near zero.  Block results land in a per-block
array that is reduced in index order, which keeps the total independent of
the thread count.
"""
import numpy as np
from numba import njit, prange

LOW_BITS = 12


@njit(cache=True, inline="always")
def _lowest_set_bit(k):
    i = 0
    while not (k >> i) & 1:
        i += 1
    return i


@njit(cache=True, inline="always")
def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


@njit(cache=True, inline="always")
def _block_start(tm, tp, nl, blk):
    s = 0.0
    for i in range(nl):
        s += tm[i]
    for i in range(tm.size - nl):
        if (blk >> i) & 1:
            s += tp[nl + i]
        else:
            s += tm[nl + i]
    return s


@njit(cache=True, inline="always")
def _flip(hi, lo, tm, tp, i, to_plus):
    if to_plus:
        hi, e1 = _two_sum(hi, -tm[i])
        hi, e2 = _two_sum(hi, tp[i])
    else:
        hi, e1 = _two_sum(hi, -tp[i])
        hi, e2 = _two_sum(hi, tm[i])
    return hi, lo + (e1 + e2)


@njit(cache=True, parallel=True)
def phi_sum(tm, tp, inv_p):
    n = tm.size
    nl = min(n, LOW_BITS)
    nblocks = 1 << (n - nl)
    partial = np.empty(nblocks)
    for blk in prange(nblocks):
        plus = np.zeros(nl, dtype=np.bool_)
        hi = _block_start(tm, tp, nl, blk)
        lo = 0.0
        acc = hi ** inv_p
        for k in range(1, 1 << nl):
            i = _lowest_set_bit(k)
            plus[i] = not plus[i]
            hi, lo = _flip(hi, lo, tm, tp, i, plus[i])
            acc += max(hi + lo, 0.0) ** inv_p
        partial[blk] = acc
    return partial.sum()


@njit(cache=True, parallel=True)
def phi_grad_sums(tm, tp, p):
    n = tm.size
    nl = min(n, LOW_BITS)
    nh = n - nl
    nblocks = 1 << nh
    inv_p = 1.0 / p
    q = inv_p - 1.0
    part_total = np.empty(nblocks)
    part_q = np.empty(nblocks)
    part_plus = np.zeros((nblocks, n))
    for blk in prange(nblocks):
        plus = np.zeros(nl, dtype=np.bool_)
        hi = _block_start(tm, tp, nl, blk)
        lo = 0.0
        acc = 0.0
        acc_q = 0.0
        for k in range(1 << nl):
            if k > 0:
                i = _lowest_set_bit(k)
                plus[i] = not plus[i]
                hi, lo = _flip(hi, lo, tm, tp, i, plus[i])
            sc = max(hi + lo, 0.0)
            acc += sc ** inv_p
            if sc > 0.0:
                sq = sc ** q
                acc_q += sq
                for j in range(nl):
                    if plus[j]:
                        part_plus[blk, j] += sq
        part_total[blk] = acc
        part_q[blk] = acc_q
        for i in range(nh):
            if (blk >> i) & 1:
                part_plus[blk, nl + i] = acc_q
    plus_tot = np.zeros(n)
    for blk in range(nblocks):
        plus_tot += part_plus[blk]
    return part_total.sum(), plus_tot, part_q.sum()


@njit(cache=True, inline="always")
def _row_sum(tm, tp, signs, r):
    s = 0.0
    for i in range(tm.size):
        s += tp[i] if signs[r, i] > 0 else tm[i]
    return s


@njit(cache=True)
def mc_terms(tm, tp, signs, inv_p):
    m = signs.shape[0]
    out = np.empty(m)
    for r in range(m):
        out[r] = _row_sum(tm, tp, signs, r) ** inv_p
    return out


@njit(cache=True, parallel=True)
def paired_terms(tm, tp, signs, k_plus, k_minus, q):
    m, n = signs.shape
    a = np.empty((m, n))
    D = np.empty((m, n))
    for r in prange(m):
        s = _row_sum(tm, tp, signs, r)
        for j in range(n):
            own = tp[j] if signs[r, j] > 0 else tm[j]
            aj = max(s - own, 0.0)
            a[r, j] = aj
            d = k_plus[j] * (aj + tp[j]) ** q
            if k_minus[j] > 0.0:
                d -= k_minus[j] * (aj + tm[j]) ** q
            D[r, j] = d
    return a, D
