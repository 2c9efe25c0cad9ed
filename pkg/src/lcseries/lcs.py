"""Degree-truncated lower central series of graded presentations.

For A = A_n / I everything is computed degree by degree inside the word
span.  Vectors are kept in normal form modulo the ideal slice I(d): reduced
against its echelon basis, hence supported off the pivot columns of I(d).

    L_1 = A,  L_k = [A, L_{k-1}],  M_k = A L_k,
    N_k = M_k / M_{k+1},  B_k = L_k / L_{k+1}.

Truncation is exact: L_k(d) and M_k(d) are spanned by brackets and products
whose factors all have degree <= d, so slices up to D never depend on data
above D.  Concretely

    L_k(d) = span [w, v],  w a word of degree f >= 1,  v in L_{k-1}(d - f)
    M_k(d) = L_k(d) + sum_i x_i M_k(d - deg x_i)

and the second line is A L_k in degree d because every nonempty word starts
with a generator.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .freealg import GeneratorSpec, NCPoly, WordIndex, word_degree
from .linalg import EchelonBasis, RowBatch, echelonize, reduce_batch

# desk-scale guard on the number of words in one degree
MAX_COLUMNS = 20_000


class PresentationError(ValueError):
    pass


class MemoryGuardError(RuntimeError):
    pass


class InvariantViolation(AssertionError):
    """An internal consistency check failed; indicates an engine bug."""


@dataclass(frozen=True)
class Presentation:
    generators: tuple[GeneratorSpec, ...]
    relations: tuple[NCPoly, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "relations", tuple(self.relations))
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise PresentationError(f"generator names must be distinct: {names}")
        n = len(self.generators)
        for r in self.relations:
            if not r:
                raise PresentationError("zero relation")
            if any(i >= n for w in r.terms for i in w):
                raise PresentationError("relation uses an unknown generator index")
            ds = r.degrees(self.degrees)
            if len(ds) != 1:
                raise PresentationError(f"relation is not homogeneous: degrees {sorted(ds)}")
            if ds.pop() < 1:
                raise PresentationError("relations must have degree >= 1")

    @classmethod
    def free(cls, n: int, names: Sequence[str] | None = None, degrees: Sequence[int] | None = None) -> "Presentation":
        if names is None:
            names = ["x", "y", "z"][:n] if n <= 3 else [f"x{i + 1}" for i in range(n)]
        degrees = degrees or [1] * n
        return cls(tuple(GeneratorSpec(a, d) for a, d in zip(names, degrees)))

    @property
    def n(self) -> int:
        return len(self.generators)

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(g.degree for g in self.generators)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(g.name for g in self.generators)

    @property
    def is_free(self) -> bool:
        return not self.relations

    def is_multihomogeneous(self) -> bool:
        return all(len(r.multidegree_support(self.n)) == 1 for r in self.relations)


# ----------------------------------------------------------------------
# bulk spanning-set builders


def left_mul(index: WordIndex, f: int, batch: RowBatch, e: int) -> RowBatch:
    """Rows w*v for every word w of degree f and every row v (degree e)."""
    nf = index.size(f)
    if not nf or not batch.nnz:
        return RowBatch.empty(index.size(f + e))
    T = index.concat(f, e)
    w = np.arange(nf, dtype=np.int64)[:, None]
    rows = (batch.rows[None, :] * nf + w).ravel()
    cols = T[:, batch.cols].ravel()
    vals = np.tile(batch.vals, nf)
    return RowBatch(rows, cols, vals, batch.nrows * nf, index.size(f + e))


def bracket_words(index: WordIndex, f: int, batch: RowBatch, e: int) -> RowBatch:
    """Rows [w, v] = wv - vw for every word w of degree f."""
    nf = index.size(f)
    if not nf or not batch.nnz:
        return RowBatch.empty(index.size(f + e))
    TL = index.concat(f, e)
    TR = index.concat(e, f)
    w = np.arange(nf, dtype=np.int64)[:, None]
    rows = (batch.rows[None, :] * nf + w).ravel()
    cols_l = TL[:, batch.cols].ravel()
    cols_r = TR[batch.cols, :].T.ravel()
    vals = np.tile(batch.vals, nf)
    return RowBatch(np.concatenate([rows, rows]), np.concatenate([cols_l, cols_r]),
                    np.concatenate([vals, -vals]), batch.nrows * nf, index.size(f + e))


def gen_mul(index: WordIndex, batch: RowBatch, e: int, side: str = "left") -> list[tuple[int, RowBatch]]:
    """(target degree, rows x_i*v) for each generator x_i; side='right' gives v*x_i."""
    out = []
    if not batch.nnz:
        return out
    for di, gw in index.generator_words:
        if side == "left":
            cols = index.concat(di, e)[gw, batch.cols]
        else:
            cols = index.concat(e, di)[batch.cols, gw]
        out.append((di + e, RowBatch(batch.rows, cols, batch.vals, batch.nrows, index.size(di + e))))
    return out


def product_batch(index: WordIndex, U: RowBatch, a: int, V: RowBatch, b: int) -> RowBatch:
    """Rows u*v for all pairs of rows (u of degree a, v of degree b)."""
    N = index.size(a + b)
    if not U.nnz or not V.nnz:
        return RowBatch.empty(N)
    T = index.concat(a, b)
    rs, cs, vs = [], [], []
    for ru, ent in U.row_vectors().items():
        ucols = np.fromiter(ent.keys(), np.int64, len(ent))
        uvals = np.empty(len(ent), dtype=object)
        uvals[:] = list(ent.values())
        cs.append(T[ucols][:, V.cols].ravel())
        vs.append(np.multiply.outer(uvals, V.vals).ravel())
        rs.append(np.tile(ru * V.nrows + V.rows, ucols.size))
    return RowBatch(np.concatenate(rs), np.concatenate(cs), np.concatenate(vs), U.nrows * V.nrows, N)


def poly_batch(index: WordIndex, polys: Sequence[NCPoly], d: int) -> RowBatch:
    return RowBatch.from_vectors([index.vector(p.component(d, index.degrees), d) for p in polys], index.size(d))


# ----------------------------------------------------------------------


class LCSEngine:
    """Memoized per-degree slices I(d), L_k(d), M_k(d) for one presentation."""

    def __init__(self, presentation: Presentation, max_columns: int = MAX_COLUMNS):
        self.P = presentation
        self.index = WordIndex(presentation.generators)
        self.max_columns = max_columns
        self._ideal: dict[int, EchelonBasis] = {}
        self._L: dict[tuple[int, int], EchelonBasis] = {}
        self._M: dict[tuple[int, int], EchelonBasis] = {}

    @property
    def n(self) -> int:
        return self.P.n

    @property
    def degrees(self) -> tuple[int, ...]:
        return self.P.degrees

    def ncols(self, d: int) -> int:
        size = self.index.size(d)
        if size > self.max_columns:
            raise MemoryGuardError(f"degree {d} has {size} words (limit {self.max_columns})")
        return size

    # -- the ideal and normal forms --------------------------------------

    def ideal(self, d: int) -> EchelonBasis:
        got = self._ideal.get(d)
        if got is not None:
            return got
        N = self.ncols(d)
        parts = []
        if self.P.relations and d >= 1:
            rels = [r for r in self.P.relations if r.homogeneous_degree(self.degrees) == d]
            if rels:
                parts.append(poly_batch(self.index, rels, d))
            for di, _ in self.index.generator_words:
                if d - di >= 1:
                    prev = self.ideal(d - di).batch()
                    parts += [b for deg, b in gen_mul(self.index, prev, d - di, "left") if deg == d]
                    parts += [b for deg, b in gen_mul(self.index, prev, d - di, "right") if deg == d]
        B = echelonize(RowBatch.concat(parts, N)) if parts else EchelonBasis.zero(N)
        self._ideal[d] = B
        return B

    def normal_form(self, batch: RowBatch, d: int) -> RowBatch:
        if self.P.is_free:
            return batch
        return reduce_batch(batch, self.ideal(d))

    def reduce_poly(self, p: NCPoly, d: int) -> dict[int, Fraction]:
        v = self.index.vector(p.component(d, self.degrees), d)
        return self.ideal(d).residue(v) if not self.P.is_free else {c: Fraction(x) for c, x in v.items()}

    def quotient_dim(self, d: int) -> int:
        return self.ncols(d) - self.ideal(d).dim

    # -- filtrations ----------------------------------------------------

    def L(self, k: int, d: int) -> EchelonBasis:
        key = (k, d)
        got = self._L.get(key)
        if got is not None:
            return got
        N = self.ncols(d)
        if k == 1:
            B = self._quotient_span(d)
        else:
            parts = []
            for f in range(1, d + 1):
                if not self.index.size(f):
                    continue
                prev = self.L(k - 1, d - f)
                if prev.dim:
                    parts.append(bracket_words(self.index, f, prev.batch(), d - f))
            B = self._span(parts, d, N)
        self._L[key] = B
        return B

    def M(self, k: int, d: int) -> EchelonBasis:
        key = (k, d)
        got = self._M.get(key)
        if got is not None:
            return got
        if k == 1:
            B = self.L(1, d)
        else:
            N = self.ncols(d)
            parts = [self.L(k, d).batch()]
            for di, gw in self.index.generator_words:
                if d - di >= 0:
                    prev = self.M(k, d - di)
                    if prev.dim:
                        cols = self.index.concat(di, d - di)[gw, prev.indices]
                        b = prev.batch()
                        parts.append(RowBatch(b.rows, cols, b.vals, b.nrows, N))
            B = self._span(parts, d, N)
        self._M[key] = B
        return B

    def _span(self, parts, d, N) -> EchelonBasis:
        parts = [p for p in parts if p.nnz]
        if not parts:
            return EchelonBasis.zero(N)
        return echelonize(self.normal_form(RowBatch.concat(parts, N), d))

    def _quotient_span(self, d: int) -> EchelonBasis:
        N = self.ncols(d)
        if self.P.is_free:
            return EchelonBasis.full(N)
        free_cols = np.setdiff1d(np.arange(N, dtype=np.int64), self.ideal(d).pivots)
        m = free_cols.size
        return EchelonBasis(N, free_cols, np.arange(m + 1), free_cols, np.array([1] * m, dtype=object))

    # -- membership ------------------------------------------------------

    def failures(self, batch: RowBatch, target: EchelonBasis, d: int) -> RowBatch:
        """Rows of `batch` not in target (mod the ideal)."""
        return reduce_batch(self.normal_form(batch, d), target)

    def element_in(self, p: NCPoly, target: EchelonBasis, d: int) -> bool:
        return target.member(self.reduce_poly(p, d))

    def in_M(self, p: NCPoly, k: int) -> bool:
        """Every homogeneous component of p lies in M_k."""
        return all(self.element_in(p.component(d, self.degrees), self.M(k, d), d) for d in p.degrees(self.degrees))

    def poly_of_row(self, B: EchelonBasis, i: int, d: int) -> NCPoly:
        return self.index.poly(B.rows[i], d)


# ----------------------------------------------------------------------
# result containers and top-level operations


@dataclass(frozen=True)
class GradedSubspace:
    slices: dict[int, EchelonBasis]

    def dim(self, d: int) -> int:
        return self.slices[d].dim

    def dims(self) -> dict[int, int]:
        return {d: b.dim for d, b in sorted(self.slices.items())}


@dataclass(frozen=True)
class FiltrationSlice:
    k: int
    maxdeg: int
    L: GradedSubspace
    M: GradedSubspace
    ideal: GradedSubspace


@dataclass
class DimTable:
    kmax: int
    maxdeg: int
    L: dict[tuple[int, int], int] = field(default_factory=dict)
    M: dict[tuple[int, int], int] = field(default_factory=dict)
    B: dict[tuple[int, int], int] = field(default_factory=dict)
    N: dict[tuple[int, int], int] = field(default_factory=dict)

    def series(self, family: str, k: int) -> dict[int, int]:
        tab = getattr(self, family)
        return {d: tab[(k, d)] for d in range(self.maxdeg + 1)}

    def rows(self):
        for k in range(1, self.kmax + 1):
            for d in range(self.maxdeg + 1):
                yield k, d, self.L[(k, d)], self.M[(k, d)], self.B[(k, d)], self.N[(k, d)]


def ideal_slice(P: Presentation, d: int, engine: LCSEngine | None = None) -> EchelonBasis:
    return (engine or LCSEngine(P)).ideal(d)


def lcs_slices(P: Presentation, kmax: int, D: int, engine: LCSEngine | None = None) -> list[FiltrationSlice]:
    if kmax < 1 or D < 1:
        raise ValueError("kmax and D must be >= 1")
    eng = engine or LCSEngine(P)
    ideal = GradedSubspace({d: eng.ideal(d) for d in range(D + 1)})
    return [
        FiltrationSlice(
            k, D,
            GradedSubspace({d: eng.L(k, d) for d in range(D + 1)}),
            GradedSubspace({d: eng.M(k, d) for d in range(D + 1)}),
            ideal,
        )
        for k in range(1, kmax + 1)
    ]


def dim_table(P: Presentation, kmax: int, D: int, engine: LCSEngine | None = None, check: bool = True) -> DimTable:
    eng = engine or LCSEngine(P)
    tab = DimTable(kmax, D)
    for k in range(1, kmax + 1):
        for d in range(D + 1):
            Lk, Lk1 = eng.L(k, d), eng.L(k + 1, d)
            Mk, Mk1 = eng.M(k, d), eng.M(k + 1, d)
            if check:
                for name, big, small in (("M", Mk, Mk1), ("L", Lk, Lk1), ("L-in-M", Mk, Lk)):
                    if reduce_batch(small.batch(), big).nnz:
                        raise InvariantViolation(f"chain containment {name} fails at k={k}, d={d}")
            tab.L[(k, d)] = Lk.dim
            tab.M[(k, d)] = Mk.dim
            tab.B[(k, d)] = Lk.dim - Lk1.dim
            tab.N[(k, d)] = Mk.dim - Mk1.dim
    return tab


# ----------------------------------------------------------------------
# containment checks


@dataclass(frozen=True)
class CheckEntry:
    name: str
    degree: int
    checked: int
    passed: bool


@dataclass
class ContainmentReport:
    entries: list[CheckEntry] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(e.passed for e in self.entries)

    def add(self, name, degree, checked, passed):
        self.entries.append(CheckEntry(name, degree, int(checked), bool(passed)))

    def failures(self) -> list[CheckEntry]:
        return [e for e in self.entries if not e.passed]


def _count(batch: RowBatch) -> int:
    return int(batch.nonempty_rows().size)


def _commutator_span(eng: LCSEngine, family, k: int, e: int) -> EchelonBasis:
    """[A, X](e) for X = family(k, .)."""
    N = eng.ncols(e)
    parts = []
    for f in range(1, e + 1):
        prev = family(k, e - f)
        if prev.dim and eng.index.size(f):
            parts.append(bracket_words(eng.index, f, prev.batch(), e - f))
    return eng._span(parts, e, N)


def check_product(eng: LCSEngine, rep: ContainmentReport, name: str, left, right, target, D: int):
    """left(a) * right(b) inside target(a + b) for a + b <= D."""
    for d in range(D + 1):
        parts = []
        for a in range(d + 1):
            U, V = left(a), right(d - a)
            if U.dim and V.dim:
                parts.append(product_batch(eng.index, U.batch(), a, V.batch(), d - a))
        if not parts:
            continue
        batch = RowBatch.concat(parts, eng.ncols(d))
        rep.add(name, d, _count(batch), eng.failures(batch, target(d), d).nnz == 0)


def check_bracket(eng: LCSEngine, rep: ContainmentReport, name: str, inner, target, D: int):
    """[A, inner(e)] inside target(d) for d <= D (words of every degree >= 1)."""
    for d in range(D + 1):
        parts = []
        for f in range(1, d + 1):
            X = inner(d - f)
            if X.dim and eng.index.size(f):
                parts.append(bracket_words(eng.index, f, X.batch(), d - f))
        if not parts:
            continue
        batch = RowBatch.concat(parts, eng.ncols(d))
        rep.add(name, d, _count(batch), eng.failures(batch, target(d), d).nnz == 0)


def verify_containments(P: Presentation, D: int, engine: LCSEngine | None = None,
                        seed: int = 0, samples: int = 20) -> ContainmentReport:
    eng = engine or LCSEngine(P)
    rep = ContainmentReport()
    M, L = eng.M, eng.L

    check_product(eng, rep, "M3*M2 in M4", lambda a: M(3, a), lambda b: M(2, b), lambda d: M(4, d), D)
    for k in (2, 3):
        cache: dict[int, EchelonBasis] = {}

        def inner(e, k=k, cache=cache):
            if e not in cache:
                cache[e] = _commutator_span(eng, M, k, e)
            return cache[e]

        check_bracket(eng, rep, f"[A,[A,M{k}]] in M{k + 1}", inner, lambda d, k=k: M(k + 1, d), D)
    check_bracket(eng, rep, "[A,M3] in L4", lambda e: M(3, e), lambda d: L(4, d), D)
    check_product(eng, rep, "M2*L3 in M4", lambda a: M(2, a), lambda b: L(3, b), lambda d: M(4, d), D)

    for k in (1, 2, 3):
        for d in range(D + 1):
            rep.add(f"M{k + 1} in M{k}", d, M(k + 1, d).dim,
                    reduce_batch(M(k + 1, d).batch(), M(k, d)).nnz == 0)
            rep.add(f"L{k + 1} in L{k}", d, L(k + 1, d).dim,
                    reduce_batch(L(k + 1, d).batch(), L(k, d)).nnz == 0)

    # randomized: the star product is associative modulo M_3
    from .star import random_homogeneous, star_assoc_defect

    rng = random.Random(seed)
    for d in range(3, D + 1):
        ok = True
        for _ in range(samples):
            a_deg = rng.randint(1, d - 2)
            b_deg = rng.randint(1, d - a_deg - 1)
            c_deg = d - a_deg - b_deg
            a, b, c = (random_homogeneous(eng.index, x, rng) for x in (a_deg, b_deg, c_deg))
            ok &= eng.element_in(star_assoc_defect(a, b, c), M(3, d), d)
        rep.add("star associative mod M3 (random)", d, samples, ok)
    return rep
