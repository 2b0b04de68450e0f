"""Vectorized numpy implementations of the hot kernels.

Batched Gaussian elimination works on a [batch, m, n] entry array with the
dense field tables applied through fancy indexing; GF(2) gets a bit-packed
fast path where each matrix row is one uint64 word.  The Monte Carlo
sampler reproduces, trial for trial, the exact same splitmix64 streams as
the numba twin, so both backends return bitwise-identical results.
"""

from __future__ import annotations

import numpy as np

_CHUNK = 1 << 15
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


# ---------------------------------------------------------------------------
# odometer enumeration
# ---------------------------------------------------------------------------


def _entries_batch(idx: np.ndarray, q: int, m: int, n: int) -> np.ndarray:
    """Decode odometer indices into [B, m, n] uint8 entries (first entry is
    the most significant base-q digit, so the last entry spins fastest)."""
    flat = np.empty((idx.shape[0], m * n), dtype=np.uint8)
    x = idx.copy()
    for f in range(m * n - 1, -1, -1):
        flat[:, f] = x % q
        x //= q
    return flat.reshape(idx.shape[0], m, n)


def _pack_rows_gf2(idx: np.ndarray, m: int, n: int) -> np.ndarray:
    """Decode odometer indices into [B, m] uint64 bit rows (column j is bit
    n-1-j, matching the big-endian odometer)."""
    rows = np.empty((idx.shape[0], m), dtype=np.uint64)
    x = idx.astype(np.uint64)
    mask = np.uint64((1 << n) - 1)
    shift = np.uint64(n)
    for i in range(m - 1, -1, -1):
        rows[:, i] = x & mask
        x >>= shift
    return rows


# ---------------------------------------------------------------------------
# batched elimination
# ---------------------------------------------------------------------------


def _rank_batch_tab(E: np.ndarray, sub: np.ndarray, mul: np.ndarray, inv: np.ndarray) -> np.ndarray:
    """Ranks of a batch of matrices; E is consumed."""
    B, m, n = E.shape
    r = np.zeros(B, dtype=np.int64)
    ridx = np.arange(m)
    for col in range(n):
        eligible = (E[:, :, col] != 0) & (ridx[None, :] >= r[:, None])
        bsel = np.nonzero(eligible.any(axis=1))[0]
        if bsel.size == 0:
            continue
        rsel = r[bsel]
        psel = eligible.argmax(axis=1)[bsel]
        tmp = E[bsel, rsel, :].copy()
        E[bsel, rsel, :] = E[bsel, psel, :]
        E[bsel, psel, :] = tmp
        pv = E[bsel, rsel, col]
        E[bsel, rsel, :] = mul[inv[pv][:, None], E[bsel, rsel, :]]
        colv = E[bsel, :, col]
        factors = np.where(ridx[None, :] > rsel[:, None], colv, 0)
        E[bsel] = sub[E[bsel], mul[factors[:, :, None], E[bsel, rsel, None, :]]]
        r[bsel] += 1
    return r


def _rank_batch_gf2(rows: np.ndarray, m: int, n: int) -> np.ndarray:
    """Ranks of a batch of bit-packed GF(2) matrices; rows is consumed."""
    B = rows.shape[0]
    r = np.zeros(B, dtype=np.int64)
    ridx = np.arange(m)
    for col in range(n):
        bit = np.uint64(1 << (n - 1 - col))
        eligible = ((rows & bit) != 0) & (ridx[None, :] >= r[:, None])
        bsel = np.nonzero(eligible.any(axis=1))[0]
        if bsel.size == 0:
            continue
        rsel = r[bsel]
        psel = eligible.argmax(axis=1)[bsel]
        tmp = rows[bsel, rsel].copy()
        rows[bsel, rsel] = rows[bsel, psel]
        rows[bsel, psel] = tmp
        pivot = rows[bsel, rsel]
        elim = ((rows[bsel] & bit) != 0) & (ridx[None, :] > rsel[:, None])
        rows[bsel] ^= np.where(elim, pivot[:, None], np.uint64(0))
        r[bsel] += 1
    return r


def _rref_batch_tab(T: np.ndarray, sub: np.ndarray, mul: np.ndarray, inv: np.ndarray) -> np.ndarray:
    """In-place reduced row echelon form of a batch; returns the ranks."""
    B, m, n = T.shape
    r = np.zeros(B, dtype=np.int64)
    ridx = np.arange(m)
    for col in range(n):
        eligible = (T[:, :, col] != 0) & (ridx[None, :] >= r[:, None])
        bsel = np.nonzero(eligible.any(axis=1))[0]
        if bsel.size == 0:
            continue
        rsel = r[bsel]
        psel = eligible.argmax(axis=1)[bsel]
        tmp = T[bsel, rsel, :].copy()
        T[bsel, rsel, :] = T[bsel, psel, :]
        T[bsel, psel, :] = tmp
        pv = T[bsel, rsel, col]
        T[bsel, rsel, :] = mul[inv[pv][:, None], T[bsel, rsel, :]]
        colv = T[bsel, :, col]
        factors = np.where(ridx[None, :] != rsel[:, None], colv, 0)
        T[bsel] = sub[T[bsel], mul[factors[:, :, None], T[bsel, rsel, None, :]]]
        r[bsel] += 1
    return r


# ---------------------------------------------------------------------------
# enumeration kernels
# ---------------------------------------------------------------------------


def rank_counts_tab(q, m, n, start, stop, sub, mul, inv):
    hist = np.zeros(min(m, n) + 1, dtype=np.int64)
    for c0 in range(start, stop, _CHUNK):
        idx = np.arange(c0, min(c0 + _CHUNK, stop), dtype=np.int64)
        ranks = _rank_batch_tab(_entries_batch(idx, q, m, n), sub, mul, inv)
        hist += np.bincount(ranks, minlength=hist.size)
    return hist


def rank_counts_gf2(m, n, start, stop):
    hist = np.zeros(min(m, n) + 1, dtype=np.int64)
    for c0 in range(start, stop, _CHUNK):
        idx = np.arange(c0, min(c0 + _CHUNK, stop), dtype=np.int64)
        ranks = _rank_batch_gf2(_pack_rows_gf2(idx, m, n), m, n)
        hist += np.bincount(ranks, minlength=hist.size)
    return hist


def joint_counts_tab(q, m, n, parts, start, stop, sub, mul, inv):
    rmax = min(m, n)
    wmax = int(sum(min(m, int(p)) for p in parts))
    hist = np.zeros((rmax + 1) * (wmax + 1), dtype=np.int64)
    offsets = np.concatenate(([0], np.cumsum(parts)))
    for c0 in range(start, stop, _CHUNK):
        idx = np.arange(c0, min(c0 + _CHUNK, stop), dtype=np.int64)
        E = _entries_batch(idx, q, m, n)
        w = np.zeros(idx.shape[0], dtype=np.int64)
        for b in range(len(parts)):
            block = E[:, :, offsets[b] : offsets[b + 1]].copy()
            w += _rank_batch_tab(block, sub, mul, inv)
        r = _rank_batch_tab(E, sub, mul, inv)
        hist += np.bincount(r * (wmax + 1) + w, minlength=hist.size)
    return hist.reshape(rmax + 1, wmax + 1)


def joint_counts_gf2(m, n, parts, start, stop):
    rmax = min(m, n)
    wmax = int(sum(min(m, int(p)) for p in parts))
    hist = np.zeros((rmax + 1) * (wmax + 1), dtype=np.int64)
    offsets = np.concatenate(([0], np.cumsum(parts)))
    for c0 in range(start, stop, _CHUNK):
        idx = np.arange(c0, min(c0 + _CHUNK, stop), dtype=np.int64)
        rows = _pack_rows_gf2(idx, m, n)
        w = np.zeros(idx.shape[0], dtype=np.int64)
        for b in range(len(parts)):
            width = int(parts[b])
            shift = np.uint64(n - int(offsets[b + 1]))
            mask = np.uint64((1 << width) - 1)
            w += _rank_batch_gf2((rows >> shift) & mask, m, width)
        r = _rank_batch_gf2(rows, m, n)
        hist += np.bincount(r * (wmax + 1) + w, minlength=hist.size)
    return hist.reshape(rmax + 1, wmax + 1)


def colspace_keys_tab(q, m, t, start, stop, sub, mul, inv):
    """Canonical column-space keys of the rank-t matrices among the
    enumerated m x t matrices (key = base-q packing of the RREF of the
    transpose)."""
    powers = (np.uint64(q) ** np.arange(t * m - 1, -1, -1, dtype=np.uint64))
    out = []
    for c0 in range(start, stop, _CHUNK):
        idx = np.arange(c0, min(c0 + _CHUNK, stop), dtype=np.int64)
        E = _entries_batch(idx, q, m, t)
        T = np.ascontiguousarray(E.transpose(0, 2, 1))
        ranks = _rref_batch_tab(T, sub, mul, inv)
        full = T[ranks == t].reshape(-1, t * m).astype(np.uint64)
        out.append((full * powers[None, :]).sum(axis=1, dtype=np.uint64))
    return np.concatenate(out) if out else np.empty(0, dtype=np.uint64)


# ---------------------------------------------------------------------------
# splitmix64 streams (identical to the numba twin and the object lane)
# ---------------------------------------------------------------------------


def _mix64(x: np.ndarray) -> np.ndarray:
    x = (x ^ (x >> np.uint64(30))) * _MIX1
    x = (x ^ (x >> np.uint64(27))) * _MIX2
    return x ^ (x >> np.uint64(31))


def _trial_states(seed: int, k0: int, k1: int) -> np.ndarray:
    ks = np.arange(k0, k1, dtype=np.uint64)
    return _mix64(np.uint64(seed) + (ks + np.uint64(1)) * _GOLDEN)


def _next_batch(states: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    states = states + _GOLDEN
    return states, _mix64(states)


def _randbelow_batch(states: np.ndarray, bound: np.uint64, threshold: np.uint64) -> np.ndarray:
    """One uniform draw below ``bound`` per stream, rejection-exact; each
    stream advances independently until its own word is accepted."""
    S = states.shape[0]
    out = np.zeros(S, dtype=np.uint64)
    pending = np.arange(S)
    while pending.size:
        states[pending], w = _next_batch(states[pending])
        ok = w < threshold if threshold else np.ones(w.shape, dtype=bool)
        accepted = pending[ok]
        out[accepted] = w[ok] % bound
        pending = pending[~ok]
    return out


def _sample_fcr_batch(states, q, dim, t, bounds, thresholds, nfree, add, sub, mul, inv):
    """One uniform full-column-rank dim x t matrix per stream.

    Column j is drawn by span-complement indexing: split a uniform index
    u < q^dim - q^j into basis coefficients and a nonzero residual on the
    free coordinates of the running reduced echelon basis.
    """
    S = states.shape[0]
    qd = np.uint64(q)
    ar = np.arange(S)
    out = np.empty((S, dim, t), dtype=np.uint8)
    basis = np.zeros((S, t, dim), dtype=np.uint8)
    pivmask = np.zeros((S, dim), dtype=bool)
    for j in range(t):
        freepos = np.argsort(pivmask, axis=1, kind="stable")[:, : dim - j]
        u = _randbelow_batch(states, bounds[j], thresholds[j])
        c_idx = u // nfree[j]
        r_idx = u % nfree[j] + np.uint64(1)
        digits = np.empty((S, dim - j), dtype=np.uint8)
        rr = r_idx
        for kk in range(dim - j):
            digits[:, kk] = rr % qd
            rr = rr // qd
        rvec = np.zeros((S, dim), dtype=np.uint8)
        np.put_along_axis(rvec, freepos, digits, axis=1)
        v = rvec.copy()
        cc = c_idx
        for bi in range(j):
            d = (cc % qd).astype(np.uint8)
            cc = cc // qd
            v = add[v, mul[d[:, None], basis[:, bi, :]]]
        out[:, :, j] = v
        piv = (rvec != 0).argmax(axis=1)
        rnorm = mul[inv[rvec[ar, piv]][:, None], rvec]
        for bi in range(j):
            f = basis[ar, bi, piv]
            basis[:, bi, :] = sub[basis[:, bi, :], mul[f[:, None], rnorm]]
        basis[:, j, :] = rnorm
        pivmask[ar, piv] = True
    return out


def _matmul_fq(L, M, add, mul):
    """A[s] = L[s] . M[s]^T over F_q; L is [S, m, t], M is [S, n, t]."""
    S, m, t = L.shape
    n = M.shape[1]
    A = np.zeros((S, m, n), dtype=np.uint8)
    for k in range(t):
        A = add[A, mul[L[:, :, k][:, :, None], M[:, :, k][:, None, :]]]
    return A


def mc_tab(q, m, n, t, parts, seed, trials, want_keys, check_rank,
           add, sub, mul, inv,
           bounds_m, thr_m, nfree_m, bounds_n, thr_n, nfree_n):
    """Monte Carlo trials of the maximal sum-rank event for uniform rank-t
    matrices; returns (hits, every_rank_was_t, keys)."""
    ell = len(parts)
    offsets = np.concatenate(([0], np.cumsum(parts)))
    target = ell * t
    powers = (np.uint64(q) ** np.arange(m * n - 1, -1, -1, dtype=np.uint64)) if want_keys else None
    keys = np.empty(trials if want_keys else 0, dtype=np.uint64)
    hits = 0
    rank_ok = True
    for k0 in range(0, trials, _CHUNK):
        k1 = min(k0 + _CHUNK, trials)
        states = _trial_states(seed, k0, k1)
        L = _sample_fcr_batch(states, q, m, t, bounds_m, thr_m, nfree_m, add, sub, mul, inv)
        M = _sample_fcr_batch(states, q, n, t, bounds_n, thr_n, nfree_n, add, sub, mul, inv)
        A = _matmul_fq(L, M, add, mul)
        w = np.zeros(k1 - k0, dtype=np.int64)
        for b in range(ell):
            block = A[:, :, offsets[b] : offsets[b + 1]].copy()
            w += _rank_batch_tab(block, sub, mul, inv)
        hits += int((w == target).sum())
        if check_rank:
            ranks = _rank_batch_tab(A.copy(), sub, mul, inv)
            rank_ok = rank_ok and bool((ranks == t).all())
        if want_keys:
            flat = A.reshape(k1 - k0, m * n).astype(np.uint64)
            keys[k0:k1] = (flat * powers[None, :]).sum(axis=1, dtype=np.uint64)
    return hits, rank_ok, keys
