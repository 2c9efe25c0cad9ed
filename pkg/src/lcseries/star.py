"""The star product a*b = (ab + ba)/2 on A/M_3, its action on N_k, standard
fibers St(N_k) = N_k / (A+ * N_k), and the action of graded vector fields.

A+ * N_k is spanned by g * v with g running over ring generators of the
commutative algebra (A/M_3, star) and v over M_k: the x_i together with the
brackets [x_i, x_j].  The brackets are needed; under the Feigin-Shoikhet
identification they are the two-forms 2 dx_i dx_j, which are not star
polynomials in the x_i.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .freealg import Derivation, NCPoly, WordIndex, commutator, iterated_commutator, mul
from .lcs import LCSEngine, Presentation, product_batch
from .linalg import EchelonBasis, QuotientSpace, RowBatch, echelonize

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class StarElement:
    """Class of `representative` modulo M_3."""

    representative: NCPoly

    def __mul__(self, other: "StarElement") -> "StarElement":
        return star_mul(self, other)


def _rep(x) -> NCPoly:
    return x.representative if isinstance(x, StarElement) else x


def star_mul(a, b) -> StarElement:
    a, b = _rep(a), _rep(b)
    return StarElement((mul(a, b) + mul(b, a)) * HALF)


def star_equal(engine: LCSEngine, a, b) -> bool:
    return engine.in_M(_rep(a) - _rep(b), 3)


def star_assoc_defect(a, b, c) -> NCPoly:
    """(a*b)*c - a*(b*c); equals [b, [a, c]] / 4 identically."""
    left = star_mul(star_mul(a, b), c).representative
    right = star_mul(a, star_mul(b, c)).representative
    return left - right


def star_act(a, n: NCPoly) -> NCPoly:
    """Representative (an + na)/2 of a * [n] in N_k."""
    a = _rep(a)
    return (mul(a, n) + mul(n, a)) * HALF


def same_class(engine: LCSEngine, k: int, n1: NCPoly, n2: NCPoly) -> bool:
    """n1 = n2 in N_k = M_k / M_{k+1} (both assumed in M_k)."""
    return engine.in_M(n1 - n2, k + 1)


def random_homogeneous(index: WordIndex, d: int, rng: random.Random, terms: int = 4, coeffs=(-2, -1, 1, 2)) -> NCPoly:
    words = index.words(d)
    if not words:
        return NCPoly.zero()
    return NCPoly({rng.choice(words): rng.choice(coeffs) for _ in range(terms)})


def random_element_of(engine: LCSEngine, B: EchelonBasis, d: int, rng: random.Random, terms: int = 3) -> NCPoly:
    if not B.dim:
        return NCPoly.zero()
    out = NCPoly.zero()
    for _ in range(terms):
        out = out + engine.poly_of_row(B, rng.randrange(B.dim), d) * rng.choice((-2, -1, 1, 3))
    return out


# ----------------------------------------------------------------------
# N_k as explicit quotients


def nk_space(engine: LCSEngine, k: int, d: int) -> QuotientSpace:
    return QuotientSpace(engine.M(k + 1, d), engine.M(k, d), check=False)


def star_generators(P: Presentation) -> list[tuple[int, NCPoly]]:
    """(degree, g): generators of A+ under the star product."""
    out = [(P.degrees[i], NCPoly.gen(i)) for i in range(P.n)]
    for i, j in itertools.combinations(range(P.n), 2):
        out.append((P.degrees[i] + P.degrees[j], commutator(NCPoly.gen(i), NCPoly.gen(j))))
    return out


def star_image(engine: LCSEngine, k: int, d: int, acting: Sequence[tuple[int, NCPoly]]) -> RowBatch:
    """Rows g*v + v*g (scaled by 2) for g in `acting` and v spanning M_k(d - deg g)."""
    idx = engine.index
    N = engine.ncols(d)
    rs, cs, vs = [], [], []
    off = 0
    for deg, g in acting:
        e = d - deg
        if e < 0:
            continue
        V = engine.M(k, e)
        if not V.dim:
            continue
        G = RowBatch.from_vectors([idx.vector(g, deg)], idx.size(deg))
        Vb = V.batch()
        for part in (product_batch(idx, G, deg, Vb, e), product_batch(idx, Vb, e, G, deg)):
            rs.append(part.rows + off)
            cs.append(part.cols)
            vs.append(part.vals)
        off += V.dim
    if not rs:
        return RowBatch.empty(N)
    return RowBatch(np.concatenate(rs), np.concatenate(cs), np.concatenate(vs), off, N)


@dataclass
class StandardFiber:
    k: int
    maxdeg: int
    perdegree: dict[int, QuotientSpace]
    weights: dict[int, list[tuple[int, ...]]]
    stable: bool
    engine: LCSEngine = field(repr=False)

    @property
    def totaldim(self) -> int:
        return sum(q.dim for q in self.perdegree.values())

    def dims(self) -> dict[int, int]:
        return {d: q.dim for d, q in sorted(self.perdegree.items())}

    def all_weights(self) -> list[tuple[int, ...]]:
        return [w for d in sorted(self.weights) for w in self.weights[d]]

    def basis(self, d: int) -> list[NCPoly]:
        q = self.perdegree[d]
        return [self.engine.poly_of_row(q.complement, i, d) for i in range(q.dim)]

    def top_degree(self) -> int | None:
        nz = [d for d, q in self.perdegree.items() if q.dim]
        return max(nz) if nz else None

    def coords(self, p: NCPoly, d: int) -> list[Fraction]:
        return self.perdegree[d].coords(self.engine.reduce_poly(p, d))

    def is_zero(self, p: NCPoly, d: int) -> bool:
        """p lies in M_{k+1} + A+ * M_k in degree d."""
        return self.perdegree[d].is_zero(self.engine.reduce_poly(p, d))


def _weights(index: WordIndex, B: EchelonBasis, d: int) -> list[tuple[int, ...]]:
    md = index.multidegrees(d)
    out = []
    for i in range(B.dim):
        cols, _ = B.int_row(i)
        ws = {tuple(int(x) for x in md[c]) for c in cols.tolist()}
        if len(ws) != 1:
            raise ValueError("standard fiber basis vector is not multihomogeneous")
        out.append(ws.pop())
    return out


def standard_fiber(P: Presentation | LCSEngine, k: int, D: int, acting: Sequence[tuple[int, NCPoly]] | None = None) -> StandardFiber:
    """St(N_k) in degrees 0..D for a free presentation.

    `acting` overrides the star generators (for experiments); by default
    A+ * N_k is generated by the x_i and the [x_i, x_j].
    """
    eng = P if isinstance(P, LCSEngine) else LCSEngine(P)
    if not eng.P.is_free:
        raise ValueError("standard fibers are computed for free presentations only")
    if k < 2:
        raise ValueError("k must be >= 2")
    acting = star_generators(eng.P) if acting is None else list(acting)
    per, weights = {}, {}
    for d in range(D + 1):
        N = eng.ncols(d)
        Mk = eng.M(k, d)
        sub_rows = RowBatch.concat([eng.M(k + 1, d).batch(), star_image(eng, k, d, acting)], N)
        S = echelonize(sub_rows)
        q = QuotientSpace(S, Mk, check=False)
        per[d] = q
        weights[d] = _weights(eng.index, q.complement, d)
    stable = D >= 1 and per[D].dim == 0 and per[D - 1].dim == 0
    return StandardFiber(k, D, per, weights, stable, eng)


# ----------------------------------------------------------------------
# vector fields acting on N_k and St(N_k)


def wn_action_on_Nk(engine: LCSEngine, D: Derivation, k: int, d: int) -> list[list[Fraction]]:
    """Matrix (rows: N_k(d+w) basis, columns: N_k(d) basis) of the induced map."""
    w = D.weight(engine.degrees)
    if w is None:
        raise ValueError("derivation is not graded")
    src = nk_space(engine, k, d)
    dst = nk_space(engine, k, d + w)
    basis = [engine.poly_of_row(src.complement, i, d) for i in range(src.dim)]
    mat = [[Fraction(0)] * src.dim for _ in range(dst.dim)]
    for j, v in enumerate(basis):
        c = dst.coords(engine.reduce_poly(D(v), d + w))
        for i, x in enumerate(c):
            mat[i][j] = x
    return mat


def st_action(fiber: StandardFiber, D: Derivation, d: int) -> list[list[Fraction]]:
    """Matrix of a vector field vanishing at the origin on St(d) -> St(d+w)."""
    eng = fiber.engine
    w = D.weight(eng.degrees)
    if w is None or w < 0:
        raise ValueError("derivation must be graded of weight >= 0")
    src = fiber.basis(d)
    ndst = fiber.perdegree[d + w].dim if d + w in fiber.perdegree else None
    if ndst is None:
        raise ValueError(f"degree {d + w} is outside the computed window")
    mat = [[Fraction(0)] * len(src) for _ in range(ndst)]
    for j, v in enumerate(src):
        for i, x in enumerate(fiber.coords(D(v), d + w)):
            mat[i][j] = x
    return mat


def monomial_field(n: int, expo: Sequence[int], j: int) -> Derivation:
    """Lift of x^expo d/dx_j (symmetrized)."""
    images = [{} for _ in range(n)]
    images[j] = {tuple(expo): 1}
    return Derivation.from_commutative(images)


def monomial_fields(n: int, w: int) -> Iterator[tuple[tuple[int, ...], int, Derivation]]:
    """All x^a d/dx_j with |a| = w + 1, in a fixed order."""
    for expo in sorted(_compositions(w + 1, n), reverse=True):
        for j in range(n):
            yield expo, j, monomial_field(n, expo, j)


def _compositions(total: int, parts: int) -> list[tuple[int, ...]]:
    if parts == 1:
        return [(total,)]
    return [(a,) + rest for a in range(total + 1) for rest in _compositions(total - a, parts - 1)]


@dataclass(frozen=True)
class ActionWitness:
    field: tuple[tuple[int, ...], int]  # (exponent, j) of x^a d/dx_j
    degree: int
    source_index: int
    image: tuple[Fraction, ...]


def positive_weight_witnesses(fiber: StandardFiber, max_weight: int | None = None) -> list[ActionWitness]:
    """Nonzero actions of monomial vector fields of weight >= 1 on St(N_k).

    Finite-dimensional W_n^0 modules on which the positive part acts by zero
    are sums of gl_n-modules, so any witness shows the composition series
    does not split into irreducibles.
    """
    n = fiber.engine.n
    degs = [d for d, q in fiber.perdegree.items() if q.dim]
    out = []
    if not degs:
        return out
    span = max(degs) - min(degs)
    for w in range(1, (span if max_weight is None else max_weight) + 1):
        for expo, j, D in monomial_fields(n, w):
            for d in degs:
                if d + w > fiber.maxdeg or not fiber.perdegree[d + w].dim:
                    continue
                mat = st_action(fiber, D, d)
                for s in range(len(mat[0]) if mat else 0):
                    col = tuple(mat[i][s] for i in range(len(mat)))
                    if any(col):
                        out.append(ActionWitness((expo, j), d, s, col))
    return out


def max_weight_shift(fiber: StandardFiber) -> int:
    """Largest weight of a monomial vector field acting nonzero on the fiber (0 if none)."""
    ws = positive_weight_witnesses(fiber)
    if not ws:
        return 0
    return max(sum(w.field[0]) - 1 for w in ws)


def x2sq_witness(fiber: StandardFiber) -> dict:
    """x_2^2 d/dx_2 applied to [x_1,[x_1,x_2]] versus 2 [x_1,x_2]^2 in St(N_3(A_2))."""
    x1, x2 = NCPoly.gen(0), NCPoly.gen(1)
    D = Derivation([NCPoly.zero(), mul(x2, x2)] + [NCPoly.zero()] * (fiber.engine.n - 2))
    src = iterated_commutator(x1, x1, x2)
    img = D(src)
    c = commutator(x1, x2)
    target = mul(c, c) * 2
    return {
        "image_equals_target": fiber.is_zero(img - target, 4),
        "image_nonzero": not fiber.is_zero(img, 4),
        "source_nonzero": not fiber.is_zero(src, 3),
    }


# ----------------------------------------------------------------------
# the reduced spanning set for St(N_k)


def reduced_spanning_set(n: int, k: int, D: int) -> dict[int, list[NCPoly]]:
    """a * [l_1, [l_2, ..., [l_{k-1}, l_k]]] with l_1, l_k generators,
    l_2..l_{k-1} words of length <= 2, and a a product of brackets [x_i, x_j].
    Grouped by degree (all generators of degree 1), degrees <= D.
    """
    gens = [NCPoly.gen(i) for i in range(n)]
    mids = gens + [mul(a, b) for a in gens for b in gens]
    brackets = [commutator(gens[i], gens[j]) for i, j in itertools.combinations(range(n), 2)]
    out: dict[int, list[NCPoly]] = {}
    cores = []
    for l1 in range(n):
        for lk in range(n):
            for middle in itertools.product(range(len(mids)), repeat=k - 2):
                deg = 2 + sum(1 if m < n else 2 for m in middle)
                if deg > D:
                    continue
                p = iterated_commutator(gens[l1], *[mids[m] for m in middle], gens[lk])
                if p:
                    cores.append((deg, p))
    for deg, core in cores:
        out.setdefault(deg, []).append(core)
        prods = [(0, NCPoly.one())]
        frontier = prods
        while frontier:
            nxt = []
            for dd, a in frontier:
                for b in brackets:
                    if deg + dd + 2 <= D:
                        nxt.append((dd + 2, mul(a, b)))
            for dd, a in nxt:
                out.setdefault(deg + dd, []).append(star_act(a, core))
            frontier = nxt
    return out
