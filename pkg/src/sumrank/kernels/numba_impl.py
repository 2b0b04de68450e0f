"""Numba-compiled implementations of the hot kernels.

Scalar twins of the numpy batch code: per-matrix elimination loops for the
odometer enumerations and a per-trial splitmix64 sampler for Monte Carlo.
All functions return exactly what the numpy versions return, bit for bit.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


@njit(cache=True)
def _fill_entries(x, q, m, n, E):
    for f in range(m * n - 1, -1, -1):
        E[f // n, f % n] = x % q
        x //= q


@njit(cache=True)
def _rank_range_tab(E, m, c0, c1, sub, mul, inv):
    """Rank of the column slice [c0, c1); mutates those columns of E."""
    r = 0
    for col in range(c0, c1):
        piv = -1
        for i in range(r, m):
            if E[i, col] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(col, c1):
                tmp = E[r, j]
                E[r, j] = E[piv, j]
                E[piv, j] = tmp
        pv = E[r, col]
        if pv != 1:
            ip = inv[pv]
            for j in range(col, c1):
                E[r, j] = mul[ip, E[r, j]]
        for i in range(r + 1, m):
            f = E[i, col]
            if f != 0:
                for j in range(col, c1):
                    E[i, j] = sub[E[i, j], mul[f, E[r, j]]]
        r += 1
        if r == m:
            break
    return r


@njit(cache=True)
def _rank_gf2(rows, m, n):
    """Rank of one bit-packed GF(2) matrix; mutates rows."""
    r = 0
    for col in range(n):
        bit = np.uint64(1) << np.uint64(n - 1 - col)
        piv = -1
        for i in range(r, m):
            if rows[i] & bit:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            tmp = rows[r]
            rows[r] = rows[piv]
            rows[piv] = tmp
        for i in range(r + 1, m):
            if rows[i] & bit:
                rows[i] ^= rows[r]
        r += 1
        if r == m:
            break
    return r


@njit(cache=True)
def _rref_full_tab(T, rows, cols, sub, mul, inv):
    """Reduced row echelon form in place; returns the rank."""
    r = 0
    for col in range(cols):
        piv = -1
        for i in range(r, rows):
            if T[i, col] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(cols):
                tmp = T[r, j]
                T[r, j] = T[piv, j]
                T[piv, j] = tmp
        pv = T[r, col]
        if pv != 1:
            ip = inv[pv]
            for j in range(cols):
                T[r, j] = mul[ip, T[r, j]]
        for i in range(rows):
            f = T[i, col]
            if i != r and f != 0:
                for j in range(cols):
                    T[i, j] = sub[T[i, j], mul[f, T[r, j]]]
        r += 1
        if r == rows:
            break
    return r


# ---------------------------------------------------------------------------
# enumeration kernels
# ---------------------------------------------------------------------------


@njit(cache=True)
def rank_counts_tab(q, m, n, start, stop, sub, mul, inv):
    hist = np.zeros(min(m, n) + 1, dtype=np.int64)
    E = np.empty((m, n), dtype=np.uint8)
    for x in range(start, stop):
        _fill_entries(x, q, m, n, E)
        hist[_rank_range_tab(E, m, 0, n, sub, mul, inv)] += 1
    return hist


@njit(cache=True)
def rank_counts_gf2(m, n, start, stop):
    hist = np.zeros(min(m, n) + 1, dtype=np.int64)
    rows = np.empty(m, dtype=np.uint64)
    mask = np.uint64((1 << n) - 1)
    ns = np.uint64(n)
    for x in range(start, stop):
        xx = np.uint64(x)
        for i in range(m - 1, -1, -1):
            rows[i] = xx & mask
            xx >>= ns
        hist[_rank_gf2(rows, m, n)] += 1
    return hist


@njit(cache=True)
def joint_counts_tab(q, m, n, parts, start, stop, sub, mul, inv):
    rmax = min(m, n)
    wmax = 0
    for b in range(parts.size):
        wmax += min(m, parts[b])
    hist = np.zeros((rmax + 1, wmax + 1), dtype=np.int64)
    E = np.empty((m, n), dtype=np.uint8)
    F = np.empty((m, n), dtype=np.uint8)
    for x in range(start, stop):
        _fill_entries(x, q, m, n, E)
        F[:, :] = E
        w = 0
        c0 = 0
        for b in range(parts.size):
            c1 = c0 + parts[b]
            w += _rank_range_tab(F, m, c0, c1, sub, mul, inv)
            c0 = c1
        r = _rank_range_tab(E, m, 0, n, sub, mul, inv)
        hist[r, w] += 1
    return hist


@njit(cache=True)
def joint_counts_gf2(m, n, parts, start, stop):
    rmax = min(m, n)
    wmax = 0
    for b in range(parts.size):
        wmax += min(m, parts[b])
    hist = np.zeros((rmax + 1, wmax + 1), dtype=np.int64)
    rows = np.empty(m, dtype=np.uint64)
    block = np.empty(m, dtype=np.uint64)
    mask = np.uint64((1 << n) - 1)
    ns = np.uint64(n)
    for x in range(start, stop):
        xx = np.uint64(x)
        for i in range(m - 1, -1, -1):
            rows[i] = xx & mask
            xx >>= ns
        w = 0
        c1 = 0
        for b in range(parts.size):
            width = parts[b]
            c1 += width
            shift = np.uint64(n - c1)
            bmask = np.uint64((1 << width) - 1)
            for i in range(m):
                block[i] = (rows[i] >> shift) & bmask
            w += _rank_gf2(block, m, width)
        r = _rank_gf2(rows, m, n)
        hist[r, w] += 1
    return hist


@njit(cache=True)
def colspace_keys_tab(q, m, t, start, stop, sub, mul, inv):
    E = np.empty((m, t), dtype=np.uint8)
    T = np.empty((t, m), dtype=np.uint8)
    out = np.empty(stop - start, dtype=np.uint64)
    cnt = 0
    qd = np.uint64(q)
    for x in range(start, stop):
        _fill_entries(x, q, m, t, E)
        for i in range(t):
            for j in range(m):
                T[i, j] = E[j, i]
        if _rref_full_tab(T, t, m, sub, mul, inv) == t:
            key = np.uint64(0)
            for i in range(t):
                for j in range(m):
                    key = key * qd + np.uint64(T[i, j])
            out[cnt] = key
            cnt += 1
    return out[:cnt].copy()


# ---------------------------------------------------------------------------
# splitmix64 streams (identical to the numpy twin and the object lane)
# ---------------------------------------------------------------------------


@njit(cache=True)
def _mix64(x):
    x = (x ^ (x >> np.uint64(30))) * _MIX1
    x = (x ^ (x >> np.uint64(27))) * _MIX2
    return x ^ (x >> np.uint64(31))


@njit(cache=True)
def _trial_state(seed, k):
    return _mix64(seed + (k + np.uint64(1)) * _GOLDEN)


@njit(cache=True)
def _splitmix_next(state):
    state = state + _GOLDEN
    return state, _mix64(state)


@njit(cache=True)
def _sample_fcr(state, qd, dim, t, bounds, thresholds, nfree,
                add, sub, mul, inv, basis, freepos, rvec, out):
    """One uniform full-column-rank dim x t matrix into out[:dim, :t]."""
    for i in range(dim):
        freepos[i] = i
    for j in range(t):
        bound = bounds[j]
        threshold = thresholds[j]
        while True:
            state, w = _splitmix_next(state)
            if threshold == np.uint64(0) or w < threshold:
                break
        u = w % bound
        c_idx = u // nfree[j]
        r_idx = u % nfree[j] + np.uint64(1)
        for i in range(dim):
            rvec[i] = 0
        rr = r_idx
        for kk in range(dim - j):
            rvec[freepos[kk]] = np.uint8(rr % qd)
            rr //= qd
        for i in range(dim):
            out[i, j] = rvec[i]
        cc = c_idx
        for bi in range(j):
            d = np.uint8(cc % qd)
            cc //= qd
            if d != 0:
                for i in range(dim):
                    out[i, j] = add[out[i, j], mul[d, basis[bi, i]]]
        piv = 0
        for i in range(dim):
            if rvec[i] != 0:
                piv = i
                break
        ip = inv[rvec[piv]]
        if ip != 1:
            for i in range(dim):
                rvec[i] = mul[ip, rvec[i]]
        for bi in range(j):
            f = basis[bi, piv]
            if f != 0:
                for i in range(dim):
                    basis[bi, i] = sub[basis[bi, i], mul[f, rvec[i]]]
        for i in range(dim):
            basis[j, i] = rvec[i]
        keep = 0
        for kk in range(dim - j):
            pos = freepos[kk]
            if pos != piv:
                freepos[keep] = pos
                keep += 1
    return state


@njit(cache=True)
def mc_tab(q, m, n, t, parts, seed, trials, want_keys, check_rank,
           add, sub, mul, inv,
           bounds_m, thr_m, nfree_m, bounds_n, thr_n, nfree_n):
    """Monte Carlo trials of the maximal sum-rank event for uniform rank-t
    matrices; returns (hits, every_rank_was_t, keys)."""
    ell = parts.size
    target = ell * t
    dmax = max(m, n)
    L = np.empty((m, t), dtype=np.uint8)
    M = np.empty((n, t), dtype=np.uint8)
    A = np.empty((m, n), dtype=np.uint8)
    S = np.empty((m, n), dtype=np.uint8)
    basis = np.empty((t, dmax), dtype=np.uint8)
    freepos = np.empty(dmax, dtype=np.int64)
    rvec = np.empty(dmax, dtype=np.uint8)
    keys = np.empty(trials if want_keys else 0, dtype=np.uint64)
    seed64 = np.uint64(seed)
    qd = np.uint64(q)
    hits = 0
    rank_ok = True
    for k in range(trials):
        state = _trial_state(seed64, np.uint64(k))
        state = _sample_fcr(state, qd, m, t, bounds_m, thr_m, nfree_m,
                            add, sub, mul, inv, basis, freepos, rvec, L)
        state = _sample_fcr(state, qd, n, t, bounds_n, thr_n, nfree_n,
                            add, sub, mul, inv, basis, freepos, rvec, M)
        for i in range(m):
            for jj in range(n):
                acc = np.uint8(0)
                for kk in range(t):
                    acc = add[acc, mul[L[i, kk], M[jj, kk]]]
                A[i, jj] = acc
        S[:, :] = A
        w = 0
        c0 = 0
        for b in range(ell):
            c1 = c0 + parts[b]
            w += _rank_range_tab(S, m, c0, c1, sub, mul, inv)
            c0 = c1
        if w == target:
            hits += 1
        if check_rank:
            S[:, :] = A
            if _rank_range_tab(S, m, 0, n, sub, mul, inv) != t:
                rank_ok = False
        if want_keys:
            key = np.uint64(0)
            for i in range(m):
                for jj in range(n):
                    key = key * qd + np.uint64(A[i, jj])
            keys[k] = key
    return hits, rank_ok, keys
