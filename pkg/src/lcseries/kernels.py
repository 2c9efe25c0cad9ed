"""Dense exact-integer elimination kernels.

Two implementations of each kernel share one contract:

* ``eliminate(M)``: Gauss-Jordan over the integers.  Returns the nonzero
  rows of the reduced echelon form, each scaled to a primitive integer
  vector with positive pivot, plus the pivot columns.  That scaling of the
  unique RREF is itself unique, so every path returns identical arrays.
* ``reduce_rows(B, piv, V)``: reduce each row of ``V`` against the echelon
  rows ``B`` (pivot columns ``piv``), fraction-free.

The numba path works on int64 and bails out on possible overflow; the
caller then reruns the numpy path on Python-int object arrays, which is
exact at any size.  Set ``LCSERIES_NUMBA=0`` to force the numpy path.
"""
from __future__ import annotations

import os

import numpy as np

# |entry| bound before every update; keeps p*a - q*b inside int64.
LIMIT = 1 << 61

try:  # pragma: no cover - exercised implicitly
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


def numba_enabled() -> bool:
    flag = os.environ.get("LCSERIES_NUMBA", "1").strip().lower()
    return HAVE_NUMBA and flag not in ("0", "false", "no", "off")


# ----------------------------------------------------------------------
# numba kernels (int64 only)


@njit(cache=True, nogil=True)
def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


@njit(cache=True, nogil=True)
def _maxabs(row):
    m = 0
    for x in row:
        ax = -x if x < 0 else x
        if ax > m:
            m = ax
    return m


@njit(cache=True, nogil=True)
def _normalize(row):
    g = 0
    for x in row:
        if x != 0:
            g = _gcd(g, -x if x < 0 else x)
            if g == 1:
                return
    if g > 1:
        for j in range(row.shape[0]):
            row[j] //= g


@njit(cache=True, nogil=True)
def _eliminate_nb(M):
    m, c = M.shape
    pivots = np.empty(min(m, c), dtype=np.int64)
    for i in range(m):
        _normalize(M[i])
    r = 0
    for col in range(c):
        if r == m:
            break
        best = -1
        best_nnz = c + 1
        for i in range(r, m):
            if M[i, col] != 0:
                nnz = 0
                for j in range(col, c):
                    if M[i, j] != 0:
                        nnz += 1
                if nnz < best_nnz:
                    best = i
                    best_nnz = nnz
        if best < 0:
            continue
        if best != r:
            for j in range(c):
                t = M[r, j]
                M[r, j] = M[best, j]
                M[best, j] = t
        if M[r, col] < 0:
            for j in range(col, c):
                M[r, j] = -M[r, j]
        p = M[r, col]
        mr = _maxabs(M[r])
        for i in range(m):
            if i == r:
                continue
            q = M[i, col]
            if q == 0:
                continue
            g = _gcd(p, -q if q < 0 else q)
            a = p // g
            b = q // g
            mi = _maxabs(M[i])
            ab = -b if b < 0 else b
            if a > LIMIT // (mi if mi > 0 else 1) or ab > LIMIT // (mr if mr > 0 else 1):
                return -1, pivots
            for j in range(c):
                M[i, j] = a * M[i, j] - b * M[r, j]
            _normalize(M[i])
        pivots[r] = col
        r += 1
    return r, pivots


@njit(cache=True, nogil=True)
def _reduce_nb(B, piv, V):
    nb = piv.shape[0]
    for j in range(V.shape[0]):
        row = V[j]
        for i in range(nb):
            q = row[piv[i]]
            if q == 0:
                continue
            p = B[i, piv[i]]
            g = _gcd(p, -q if q < 0 else q)
            a = p // g
            b = q // g
            mv = _maxabs(row)
            mb = _maxabs(B[i])
            ab = -b if b < 0 else b
            if a > LIMIT // (mv if mv > 0 else 1) or ab > LIMIT // (mb if mb > 0 else 1):
                return False
            for t in range(row.shape[0]):
                row[t] = a * row[t] - b * B[i, t]
            _normalize(row)
    return True


# ----------------------------------------------------------------------
# numpy kernels (int64 with overflow promotion, or object)


def _row_gcd_normalize(rows: np.ndarray) -> np.ndarray:
    g = np.gcd.reduce(rows, axis=1)
    if rows.dtype == object:
        g = np.array([x if x else 1 for x in g], dtype=object)
    else:
        g[g == 0] = 1
    return rows // g[:, None]


def _would_overflow(a, b, X, Y) -> bool:
    """Bound for a*X - b*Y on int64 arrays, computed in Python ints."""
    if not X.size:
        return False
    ma = int(np.abs(a).max())
    mb = int(np.abs(b).max())
    return ma * int(np.abs(X).max()) + mb * int(np.abs(Y).max()) >= LIMIT


def _eliminate_np(M: np.ndarray):
    M = _row_gcd_normalize(M) if M.shape[0] else M.copy()
    m, c = M.shape
    pivots = []
    r = 0
    for col in range(c):
        if r == m:
            break
        cand = np.flatnonzero(M[r:, col] != 0) + r
        if cand.size == 0:
            continue
        if cand.size > 1:
            nnz = np.count_nonzero(M[cand, col:] != 0, axis=1)
            best = int(cand[int(np.argmin(nnz))])
        else:
            best = int(cand[0])
        if best != r:
            M[[r, best]] = M[[best, r]]
        if M[r, col] < 0:
            M[r, col:] = -M[r, col:]
        p = M[r, col]
        idx = np.flatnonzero(M[:, col] != 0)
        idx = idx[idx != r]
        if idx.size:
            q = M[idx, col]
            g = np.gcd(q, p)
            a = p // g
            b = q // g
            if M.dtype != object and _would_overflow(a, b, M[idx], M[r]):
                M = M.astype(object)
                p = int(p)
                q = M[idx, col]
                g = np.gcd(q, p)
                a = p // g
                b = q // g
            M[idx] = a[:, None] * M[idx] - b[:, None] * M[r]
            M[idx] = _row_gcd_normalize(M[idx])
        pivots.append(col)
        r += 1
    return M[:r], np.asarray(pivots, dtype=np.int64)


def _reduce_np(B: np.ndarray, piv: np.ndarray, V: np.ndarray) -> np.ndarray:
    V = V.copy()
    if B.dtype == object and V.dtype != object:
        V = V.astype(object)
    for i, pc in enumerate(piv):
        idx = np.flatnonzero(V[:, pc] != 0)
        if not idx.size:
            continue
        p = B[i, pc]
        q = V[idx, pc]
        g = np.gcd(q, p)
        a = p // g
        b = q // g
        if V.dtype != object and _would_overflow(a, b, V[idx], B[i]):
            V = V.astype(object)
            B = B.astype(object)
            p = int(p)
            q = V[idx, pc]
            g = np.gcd(q, p)
            a = p // g
            b = q // g
        V[idx] = a[:, None] * V[idx] - b[:, None] * B[i]
        V[idx] = _row_gcd_normalize(V[idx])
    return V


# ----------------------------------------------------------------------
# dispatch


def eliminate(M: np.ndarray, use_numba: bool | None = None):
    """Integer RREF of the rows of `M`; returns (rows, pivot_columns)."""
    if use_numba is None:
        use_numba = numba_enabled()
    if use_numba and M.dtype == np.int64:
        W = M.copy()
        rank, piv = _eliminate_nb(W)
        if rank >= 0:
            return W[:rank], piv[:rank].copy()
        M = M.astype(object)
    return _eliminate_np(M)


def reduce_rows(B: np.ndarray, piv: np.ndarray, V: np.ndarray, use_numba: bool | None = None) -> np.ndarray:
    """Rows of `V` reduced against echelon rows `B`; zero rows mean membership."""
    if use_numba is None:
        use_numba = numba_enabled()
    if not len(piv) or not V.shape[0]:
        return V.copy()
    if use_numba and B.dtype == np.int64 and V.dtype == np.int64:
        W = V.copy()
        if _reduce_nb(B, piv.astype(np.int64), W):
            return W
        B = B.astype(object)
        V = V.astype(object)
    return _reduce_np(B, piv, V)


def to_machine(M: np.ndarray) -> np.ndarray:
    """int64 copy of an integer array when every entry is safely small."""
    if M.dtype == np.int64:
        return M
    if not M.size:
        return M.astype(np.int64)
    if int(np.abs(M).max()) < LIMIT:
        return M.astype(np.int64)
    return M
