"""Hot loops over F_q encoded as small integers with lookup tables.

Two implementations share one signature: numba-compiled loops and a
vectorised numpy fallback.  ``QVCOMPACT_BACKEND=numpy`` forces the fallback;
otherwise numba is used when it imports.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False


# -- numpy implementations ---------------------------------------------------

def mul_linear_numpy(vec, shifts, coeffs, out_len, add, mul):
    """Multiply a dense homogeneous polynomial by a linear form.

    ``shifts[i, k]`` is the index of (monomial k) * X_i in the next degree.
    """
    out = np.zeros(out_len, dtype=vec.dtype)
    for i in range(shifts.shape[0]):
        c = coeffs[i]
        if c == 0:
            continue
        idx = shifts[i]
        out[idx] = add[out[idx], mul[c, vec]]
    return out


def rref_numpy(M, add, mul, neg, inv, full):
    rows, cols = M.shape
    pivots = []
    rank = 0
    for c in range(cols):
        if rank == rows:
            break
        nz = np.flatnonzero(M[rank:, c])
        if nz.size == 0:
            continue
        piv = rank + nz[0]
        if piv != rank:
            M[[rank, piv]] = M[[piv, rank]]
        s = inv[M[rank, c]]
        if s != 1:
            M[rank, c:] = mul[s, M[rank, c:]]
        lo = 0 if full else rank + 1
        col = M[lo:, c]
        hit = np.flatnonzero(col)
        hit = hit[hit + lo != rank]
        if hit.size:
            f = neg[col[hit]]
            tgt = hit + lo
            M[tgt, c:] = add[M[tgt, c:], mul[f[:, None], M[rank, c:][None, :]]]
        pivots.append(c)
        rank += 1
    return rank, np.array(pivots, dtype=np.int64)


def scatter_numpy(X, src, tgt, coeff, add, mul):
    """out[:, tgt[k]] += coeff[k] * X[:, src[k]], accumulated over k.

    Entries sharing a target are split into layers so that each vectorised
    assignment writes every column at most once."""
    out = np.zeros_like(X)
    order = np.argsort(tgt, kind="stable")
    src, tgt, coeff = src[order], tgt[order], coeff[order]
    # rank of each entry among equal targets; each rank layer has unique targets
    first = np.searchsorted(tgt, tgt)
    layer = np.arange(tgt.size) - first
    for k in range(int(layer.max()) + 1 if layer.size else 0):
        sel = layer == k
        t, s_, c = tgt[sel], src[sel], coeff[sel]
        out[:, t] = add[out[:, t], mul[c[None, :], X[:, s_]]]
    return out


def reduce_numpy(R, pivots, X, add, mul, neg):
    """Reduce each row of X against the fully reduced echelon rows R."""
    for k in range(pivots.shape[0]):
        c = pivots[k]
        col = X[:, c]
        hit = np.flatnonzero(col)
        if hit.size:
            f = neg[col[hit]]
            X[hit] = add[X[hit], mul[f[:, None], R[k][None, :]]]
    return X


# -- numba implementations ---------------------------------------------------

if HAVE_NUMBA:

    @numba.njit(cache=True)
    def mul_linear_numba(vec, shifts, coeffs, out_len, add, mul):
        out = np.zeros(out_len, dtype=vec.dtype)
        n = vec.shape[0]
        for i in range(shifts.shape[0]):
            c = coeffs[i]
            if c == 0:
                continue
            for k in range(n):
                v = vec[k]
                if v != 0:
                    j = shifts[i, k]
                    out[j] = add[out[j], mul[c, v]]
        return out

    @numba.njit(cache=True)
    def rref_numba(M, add, mul, neg, inv, full):
        rows, cols = M.shape
        pivots = np.empty(min(rows, cols), dtype=np.int64)
        rank = 0
        for c in range(cols):
            if rank == rows:
                break
            piv = -1
            for i in range(rank, rows):
                if M[i, c] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != rank:
                for j in range(c, cols):
                    t = M[rank, j]
                    M[rank, j] = M[piv, j]
                    M[piv, j] = t
            s = inv[M[rank, c]]
            if s != 1:
                for j in range(c, cols):
                    M[rank, j] = mul[s, M[rank, j]]
            lo = 0 if full else rank + 1
            for i in range(lo, rows):
                if i == rank or M[i, c] == 0:
                    continue
                f = neg[M[i, c]]
                for j in range(c, cols):
                    x = M[rank, j]
                    if x != 0:
                        M[i, j] = add[M[i, j], mul[f, x]]
            pivots[rank] = c
            rank += 1
        return rank, pivots[:rank].copy()

    @numba.njit(cache=True)
    def scatter_numba(X, src, tgt, coeff, add, mul):
        out = np.zeros_like(X)
        for t in range(X.shape[0]):
            for k in range(src.shape[0]):
                v = X[t, src[k]]
                if v != 0:
                    j = tgt[k]
                    out[t, j] = add[out[t, j], mul[coeff[k], v]]
        return out

    @numba.njit(cache=True)
    def reduce_numba(R, pivots, X, add, mul, neg):
        cols = X.shape[1]
        for t in range(X.shape[0]):
            for k in range(pivots.shape[0]):
                v = X[t, pivots[k]]
                if v == 0:
                    continue
                f = neg[v]
                for j in range(cols):
                    x = R[k, j]
                    if x != 0:
                        X[t, j] = add[X[t, j], mul[f, x]]
        return X


def backend() -> str:
    wanted = os.environ.get("QVCOMPACT_BACKEND", "numba").strip().lower()
    if wanted not in ("numba", "numpy"):
        raise ValueError(f"QVCOMPACT_BACKEND must be 'numba' or 'numpy', not {wanted!r}")
    if wanted == "numpy" or not HAVE_NUMBA:
        return "numpy"
    return "numba"


def mul_linear(vec, shifts, coeffs, out_len, add, mul):
    if backend() == "numba":
        return mul_linear_numba(vec, shifts, coeffs, out_len, add, mul)
    return mul_linear_numpy(vec, shifts, coeffs, out_len, add, mul)


def rref(M, add, mul, neg, inv, full=True):
    """In-place row reduction; returns (rank, pivot columns)."""
    if backend() == "numba":
        return rref_numba(M, add, mul, neg, inv, full)
    return rref_numpy(M, add, mul, neg, inv, full)


def scatter(X, src, tgt, coeff, add, mul):
    if backend() == "numba":
        return scatter_numba(X, src, tgt, coeff, add, mul)
    return scatter_numpy(X, src, tgt, coeff, add, mul)


def reduce_rows(R, pivots, X, add, mul, neg):
    if backend() == "numba":
        return reduce_numba(R, pivots, X, add, mul, neg)
    return reduce_numpy(R, pivots, X, add, mul, neg)
