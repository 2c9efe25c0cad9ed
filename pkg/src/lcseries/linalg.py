"""Exact sparse linear algebra over the rationals.

Subspaces of a fixed coordinate space are stored as reduced echelon bases.
Rows are kept as primitive integer vectors with positive pivot entry (the
unique integer scaling of the RREF row); `EchelonBasis.rows` exposes the
pivot-one rational rows.

Bulk work goes through `RowBatch` (COO rows with Python-int values).  A batch
is split into connected column blocks, every block is eliminated densely by
a kernel from `lcseries.kernels`, and the blocks are merged.  Word matrices
are block diagonal by multidegree, so blocks stay small.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from . import kernels

SparseVec = Mapping[int, object]

# dense block budget, in matrix entries; larger blocks are chunked by rows
BLOCK_BUDGET = 40_000_000

_threads = 1


def set_threads(n: int) -> None:
    """Worker count for independent column blocks (default 1)."""
    global _threads
    _threads = max(1, int(n))


def get_threads() -> int:
    return _threads


class NotContainedError(ValueError):
    pass


def _obj(values) -> np.ndarray:
    out = np.empty(len(values), dtype=object)
    out[:] = [int(v) for v in values]
    return out


def _clear_denominators(vec: SparseVec) -> tuple[np.ndarray, np.ndarray]:
    items = sorted((int(c), Fraction(v)) for c, v in vec.items() if v)
    if not items:
        return np.empty(0, np.int64), np.empty(0, object)
    lcm = 1
    for _, v in items:
        lcm = lcm * v.denominator // math.gcd(lcm, v.denominator)
    cols = np.fromiter((c for c, _ in items), np.int64, len(items))
    vals = _obj([v.numerator * (lcm // v.denominator) for _, v in items])
    return cols, vals


class RowBatch:
    """Integer rows in COO form, sorted by (row, col), no stored zeros.

    Row ids are kept as given (a row with no entries simply has none), so a
    batch can be reduced or checked and failures traced back to inputs.
    """

    def __init__(self, rows, cols, vals, nrows: int, ncols: int, _clean: bool = False):
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        if not isinstance(vals, np.ndarray) or vals.dtype != object:
            vals = _obj(vals) if len(vals) else np.empty(0, object)
        if not _clean and rows.size:
            order = np.lexsort((cols, rows))
            rows, cols, vals = rows[order], cols[order], vals[order]
            key_change = np.empty(rows.size, dtype=bool)
            key_change[0] = True
            key_change[1:] = (rows[1:] != rows[:-1]) | (cols[1:] != cols[:-1])
            if not key_change.all():
                starts = np.flatnonzero(key_change)
                vals = np.add.reduceat(vals, starts)
                rows, cols = rows[starts], cols[starts]
            keep = vals != 0
            if not keep.all():
                rows, cols, vals = rows[keep], cols[keep], vals[keep]
        self.rows, self.cols, self.vals = rows, cols, vals
        self.nrows, self.ncols = int(nrows), int(ncols)

    @classmethod
    def empty(cls, ncols: int) -> "RowBatch":
        return cls(np.empty(0, np.int64), np.empty(0, np.int64), np.empty(0, object), 0, ncols, _clean=True)

    @classmethod
    def from_vectors(cls, vecs: Iterable[SparseVec], ncols: int) -> "RowBatch":
        rs, cs, vs = [], [], []
        n = 0
        for n, vec in enumerate(vecs, 1):
            c, v = _clear_denominators(vec)
            rs.append(np.full(c.size, n - 1, np.int64))
            cs.append(c)
            vs.append(v)
        if not rs:
            return cls.empty(ncols)
        return cls(np.concatenate(rs), np.concatenate(cs), np.concatenate(vs), n, ncols)

    @classmethod
    def concat(cls, batches: Sequence["RowBatch"], ncols: int | None = None) -> "RowBatch":
        """Stack batches, renumbering rows consecutively."""
        if ncols is None:
            ncols = batches[0].ncols if batches else 0
        rs, cs, vs, off = [], [], [], 0
        for b in batches:
            rs.append(b.rows + off)
            cs.append(b.cols)
            vs.append(b.vals)
            off += b.nrows
        if not rs:
            return cls.empty(ncols)
        return cls(np.concatenate(rs), np.concatenate(cs), np.concatenate(vs), off, ncols, _clean=True)

    @property
    def nnz(self) -> int:
        return int(self.rows.size)

    def nonempty_rows(self) -> np.ndarray:
        return np.unique(self.rows)

    def row_vectors(self) -> dict[int, dict[int, int]]:
        out: dict[int, dict[int, int]] = {}
        for r, c, v in zip(self.rows.tolist(), self.cols.tolist(), self.vals):
            out.setdefault(r, {})[c] = v
        return out

    def __repr__(self):
        return f"RowBatch(nrows={self.nrows}, ncols={self.ncols}, nnz={self.nnz})"


class EchelonBasis:
    """Reduced row-echelon basis of a subspace of Q^ncols."""

    def __init__(self, ncols: int, pivots, indptr, indices, data):
        self.ncols = int(ncols)
        self.pivots = np.asarray(pivots, dtype=np.int64)
        self.indptr = np.asarray(indptr, dtype=np.int64)
        self.indices = np.asarray(indices, dtype=np.int64)
        self.data = data if isinstance(data, np.ndarray) and data.dtype == object else _obj(data)
        self._rows = None
        self._pivot_pos = None

    @classmethod
    def zero(cls, ncols: int) -> "EchelonBasis":
        return cls(ncols, [], [0], [], np.empty(0, object))

    @classmethod
    def full(cls, ncols: int) -> "EchelonBasis":
        r = np.arange(ncols, dtype=np.int64)
        return cls(ncols, r, np.arange(ncols + 1), r, _obj([1] * ncols))

    @property
    def dim(self) -> int:
        return int(self.pivots.size)

    rank = dim

    def __len__(self):
        return self.dim

    def int_row(self, i: int) -> tuple[np.ndarray, np.ndarray]:
        a, b = self.indptr[i], self.indptr[i + 1]
        return self.indices[a:b], self.data[a:b]

    @property
    def rows(self) -> list[dict[int, Fraction]]:
        """Rows with pivot entry 1, as {column: Fraction}."""
        if self._rows is None:
            out = []
            for i, p in enumerate(self.pivots.tolist()):
                cols, vals = self.int_row(i)
                pv = None
                for c, v in zip(cols.tolist(), vals):
                    if c == p:
                        pv = v
                        break
                out.append({c: Fraction(v, pv) for c, v in zip(cols.tolist(), vals)})
            self._rows = out
        return self._rows

    def _pivot_index(self) -> dict[int, int]:
        if self._pivot_pos is None:
            self._pivot_pos = {p: i for i, p in enumerate(self.pivots.tolist())}
        return self._pivot_pos

    def batch(self) -> RowBatch:
        rows = np.repeat(np.arange(self.dim, dtype=np.int64), np.diff(self.indptr))
        return RowBatch(rows, self.indices, self.data, self.dim, self.ncols, _clean=True)

    def residue(self, v: SparseVec) -> dict[int, Fraction]:
        pos = self._pivot_index()
        out = {int(c): Fraction(x) for c, x in v.items() if x}
        hits = [(c, out[c]) for c in list(out) if c in pos]
        rows = self.rows
        for c, coef in hits:
            for j, x in rows[pos[c]].items():
                y = out.get(j, 0) - coef * x
                if y:
                    out[j] = y
                else:
                    out.pop(j, None)
        return out

    def member(self, v: SparseVec) -> bool:
        return not self.residue(v)

    def coordinates(self, v: SparseVec) -> list[Fraction]:
        """Coefficients of `v` in `rows`; raises if `v` is not in the span."""
        res = self.residue(v)
        if res:
            raise NotContainedError("vector is not in the span")
        return [Fraction(v.get(p, 0)) for p in self.pivots.tolist()]

    def __eq__(self, other):
        if not isinstance(other, EchelonBasis):
            return NotImplemented
        return (
            self.ncols == other.ncols
            and np.array_equal(self.pivots, other.pivots)
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
            and all(a == b for a, b in zip(self.data, other.data))
        )

    __hash__ = None

    def dense(self) -> np.ndarray:
        """Pivot-one rows as a dense object array of Fractions."""
        out = np.full((self.dim, self.ncols), Fraction(0), dtype=object)
        for i, row in enumerate(self.rows):
            for c, x in row.items():
                out[i, c] = x
        return out

    def __repr__(self):
        return f"EchelonBasis(dim={self.dim}, ncols={self.ncols})"


# ----------------------------------------------------------------------
# block machinery


def _column_blocks(ncols: int, batches: Sequence[RowBatch]):
    """Group columns into connected components of the row/column incidence.

    Yields (cols, [row ids per batch]) for components touched by some row.
    """
    rows_all, cols_all, tags = [], [], []
    off = 0
    for b in batches:
        rows_all.append(b.rows + off)
        cols_all.append(b.cols)
        off += b.nrows
    if not rows_all or not sum(r.size for r in rows_all):
        return []
    R = np.concatenate(rows_all)
    C = np.concatenate(cols_all)
    order = np.lexsort((C, R))
    R, C = R[order], C[order]
    same = R[1:] == R[:-1]
    src, dst = C[:-1][same], C[1:][same]
    g = coo_matrix((np.ones(src.size, dtype=np.int8), (src, dst)), shape=(ncols, ncols))
    _, label = connected_components(g, directed=False)
    first = np.ones(R.size, dtype=bool)
    first[1:] = ~same
    row_ids, row_label = R[first], label[C[first]]
    col_label = label
    used = np.unique(row_label)
    blocks = []
    bounds = np.cumsum([0] + [b.nrows for b in batches])
    for lab in used.tolist():
        cols = np.flatnonzero(col_label == lab)
        rid = row_ids[row_label == lab]
        per = [rid[(rid >= bounds[k]) & (rid < bounds[k + 1])] - bounds[k] for k in range(len(batches))]
        blocks.append((cols, per))
    return blocks


def _dense(batch: RowBatch, row_ids: np.ndarray, cols: np.ndarray) -> np.ndarray:
    sel = np.isin(batch.rows, row_ids)
    r = np.searchsorted(row_ids, batch.rows[sel])
    c = np.searchsorted(cols, batch.cols[sel])
    vals = batch.vals[sel]
    M = np.zeros((row_ids.size, cols.size), dtype=object)
    M[r, c] = vals
    return kernels.to_machine(M)


def _eliminate_block(M: np.ndarray):
    nc = M.shape[1]
    chunk = max(nc, BLOCK_BUDGET // max(nc, 1) - nc)
    if M.shape[0] <= chunk + nc:
        return kernels.eliminate(M)
    # row-chunked elimination keeps the dense footprint bounded
    basis = M[:0]
    piv = np.empty(0, np.int64)
    for s in range(0, M.shape[0], chunk):
        part = M[s:s + chunk]
        if basis.dtype != part.dtype:
            basis, part = basis.astype(object), part.astype(object)
        stacked = np.concatenate([basis, kernels.reduce_rows(basis, piv, part)])
        basis, piv = kernels.eliminate(kernels.to_machine(stacked) if stacked.dtype == object else stacked)
    return basis, piv


def _map_blocks(fn, items):
    if _threads > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=_threads) as pool:
            return list(pool.map(fn, items))
    return [fn(it) for it in items]


def _assemble(ncols: int, pieces) -> EchelonBasis:
    """Merge per-block integer RREF rows into one EchelonBasis."""
    recs = []
    for cols, rows, piv in pieces:
        for i in range(rows.shape[0]):
            nz = np.flatnonzero(rows[i] != 0)
            recs.append((int(cols[piv[i]]), cols[nz], rows[i, nz]))
    recs.sort(key=lambda t: t[0])
    pivots = [t[0] for t in recs]
    lens = [t[1].size for t in recs]
    indptr = np.concatenate([[0], np.cumsum(lens)]).astype(np.int64)
    if recs:
        indices = np.concatenate([t[1] for t in recs]).astype(np.int64)
        data = np.empty(int(indptr[-1]), dtype=object)
        data[:] = [int(x) for t in recs for x in t[2]]
    else:
        indices = np.empty(0, np.int64)
        data = np.empty(0, object)
    return EchelonBasis(ncols, pivots, indptr, indices, data)


# ----------------------------------------------------------------------
# public operations


def echelonize(rows: RowBatch | Iterable[SparseVec], ncols: int | None = None) -> EchelonBasis:
    """Reduced echelon basis of the span of `rows`."""
    if not isinstance(rows, RowBatch):
        rows = list(rows)
        if ncols is None:
            ncols = 1 + max((max(r) for r in rows if r), default=-1)
        rows = RowBatch.from_vectors(rows, ncols)
    ncols = rows.ncols
    blocks = _column_blocks(ncols, [rows])

    def work(blk):
        cols, (rid,) = blk
        M = _dense(rows, rid, cols)
        red, piv = _eliminate_block(M)
        return cols, red, piv

    return _assemble(ncols, _map_blocks(work, blocks))


def reduce_batch(batch: RowBatch, basis: EchelonBasis) -> RowBatch:
    """Residues of every row of `batch` modulo span(basis), zero rows dropped.

    Residue rows are rescaled by arbitrary nonzero integers; only their span
    and their zero-ness are meaningful.
    """
    if not basis.dim or not batch.nnz:
        return batch
    B = basis.batch()
    blocks = _column_blocks(batch.ncols, [B, batch])

    def work(blk):
        cols, (bid, vid) = blk
        if not vid.size:
            return None
        V = _dense(batch, vid, cols)
        if not bid.size:
            return vid, cols, V
        Bd = _dense(B, bid, cols)
        piv = np.searchsorted(cols, basis.pivots[bid])
        if Bd.dtype != V.dtype:
            Bd, V = Bd.astype(object), V.astype(object)
        return vid, cols, kernels.reduce_rows(Bd, piv, V)

    rs, cs, vs = [], [], []
    for out in _map_blocks(work, blocks):
        if out is None:
            continue
        vid, cols, V = out
        r, c = np.nonzero(V)
        rs.append(vid[r])
        cs.append(cols[c])
        vs.append(_obj(V[r, c].tolist()))
    if not rs:
        return RowBatch(np.empty(0, np.int64), np.empty(0, np.int64), np.empty(0, object), batch.nrows, batch.ncols, _clean=True)
    return RowBatch(np.concatenate(rs), np.concatenate(cs), np.concatenate(vs), batch.nrows, batch.ncols)


def member(v: SparseVec, B: EchelonBasis) -> tuple[bool, dict[int, Fraction]]:
    res = B.residue(v)
    return (not res), res


def contains(big: EchelonBasis, small: EchelonBasis | RowBatch) -> bool:
    batch = small.batch() if isinstance(small, EchelonBasis) else small
    return reduce_batch(batch, big).nnz == 0


def span_sum(*bases: EchelonBasis) -> EchelonBasis:
    ncols = bases[0].ncols
    return echelonize(RowBatch.concat([b.batch() for b in bases], ncols))


def intersection(B1: EchelonBasis, B2: EchelonBasis) -> EchelonBasis:
    """Zassenhaus: rows (b|b) for b in B1 and (b|0) for b in B2 over 2n columns.

    Echelon rows whose left half vanishes span the intersection in the
    right half.
    """
    n = B1.ncols
    b1, b2 = B1.batch(), B2.batch()
    left1 = RowBatch(b1.rows, b1.cols, b1.vals, b1.nrows, 2 * n, _clean=True)
    right1 = RowBatch(b1.rows, b1.cols + n, b1.vals, b1.nrows, 2 * n, _clean=True)
    both = RowBatch(np.concatenate([left1.rows, right1.rows]),
                    np.concatenate([left1.cols, right1.cols]),
                    np.concatenate([left1.vals, right1.vals]), b1.nrows, 2 * n)
    only2 = RowBatch(b2.rows, b2.cols, b2.vals, b2.nrows, 2 * n, _clean=True)
    E = echelonize(RowBatch.concat([both, only2], 2 * n))
    keep = [i for i, p in enumerate(E.pivots.tolist()) if p >= n]
    rs, cs, vs = [], [], []
    for k, i in enumerate(keep):
        cols, vals = E.int_row(i)
        rs.append(np.full(cols.size, k, np.int64))
        cs.append(cols - n)
        vs.append(vals)
    if not keep:
        return EchelonBasis.zero(n)
    return echelonize(RowBatch(np.concatenate(rs), np.concatenate(cs), np.concatenate(vs), len(keep), n))


def quotient_dim(sub: EchelonBasis, big: EchelonBasis) -> int:
    if not contains(big, sub):
        raise NotContainedError("quotient requested but the subspace is not contained")
    return big.dim - sub.dim


@dataclass(frozen=True)
class SubspaceOps:
    sum: EchelonBasis
    intersection: EchelonBasis
    codim: int | None  # dim(B2) - dim(B1) when B1 is contained in B2


def subspace_ops(B1: EchelonBasis, B2: EchelonBasis) -> SubspaceOps:
    s = span_sum(B1, B2)
    i = intersection(B1, B2)
    codim = B2.dim - B1.dim if s.dim == B2.dim else None
    return SubspaceOps(s, i, codim)


class QuotientSpace:
    """big / sub with an explicit complement basis.

    The complement consists of echelon rows that vanish on the pivot columns
    of `sub`; the class of v has coordinates read off at the complement
    pivots after reducing v modulo `sub`.
    """

    def __init__(self, sub: EchelonBasis, big: EchelonBasis, check: bool = True):
        if check and not contains(big, sub):
            raise NotContainedError("sub is not contained in big")
        self.sub = sub
        self.big = big
        self.complement = echelonize(reduce_batch(big.batch(), sub))

    @property
    def dim(self) -> int:
        return self.complement.dim

    def coords(self, v: SparseVec) -> list[Fraction]:
        return self.complement.coordinates(self.sub.residue(v))

    def is_zero(self, v: SparseVec) -> bool:
        return self.sub.member(v)
