"""Polynomial differential forms on affine n-space.

A term is (exponent vector, strictly increasing tuple of differential
indices).  The public algebra is the even part with the Fedosov product

    w o v = w ^ v + dw ^ dv,

and `fs_map` sends a word x_{i1} ... x_{id} to x_{i1} o ... o x_{id}.
Its kernel in each degree is M_3 of the free algebra, which gives an
independent check of the word-side engine.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .freealg import NCPoly, WordIndex
from .linalg import EchelonBasis, RowBatch, echelonize

Key = tuple[tuple[int, ...], tuple[int, ...]]


def _sort_sign(idx: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Sign of the sorting permutation and the sorted tuple; sign 0 on repeats."""
    if len(set(idx)) != len(idx):
        return 0, ()
    inv = sum(1 for a, b in itertools.combinations(idx, 2) if a > b)
    return (-1 if inv % 2 else 1), tuple(sorted(idx))


class Form:
    __slots__ = ("n", "_terms")

    def __init__(self, n: int, terms: Mapping[Key, object] | Iterable[tuple[Key, object]] = ()):
        self.n = n
        acc: dict[Key, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for (e, w), c in items:
            c = Fraction(c)
            if not c:
                continue
            key = (tuple(e), tuple(w))
            v = acc.get(key, 0) + c
            if v:
                acc[key] = v
            else:
                acc.pop(key, None)
        self._terms = acc

    @classmethod
    def _raw(cls, n, terms):
        f = cls.__new__(cls)
        f.n = n
        f._terms = terms
        return f

    @classmethod
    def coordinate(cls, n: int, i: int) -> "Form":
        e = [0] * n
        e[i] = 1
        return cls(n, {(tuple(e), ()): 1})

    @classmethod
    def constant(cls, n: int, c=1) -> "Form":
        return cls(n, {((0,) * n, ()): c})

    @classmethod
    def differential(cls, n: int, *idx: int) -> "Form":
        """dx_{i1} ^ ... ^ dx_{ik}."""
        s, w = _sort_sign(idx)
        return cls(n, {((0,) * n, w): s} if s else {})

    @property
    def terms(self) -> Mapping[Key, Fraction]:
        return self._terms

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        return self.n == other.n and self._terms == other._terms

    def __hash__(self):
        return hash((self.n, frozenset(self._terms.items())))

    def __add__(self, other: "Form") -> "Form":
        acc = dict(self._terms)
        for k, c in other._terms.items():
            v = acc.get(k, 0) + c
            if v:
                acc[k] = v
            else:
                del acc[k]
        return Form._raw(self.n, acc)

    def __neg__(self):
        return Form._raw(self.n, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        c = Fraction(c)
        if not c:
            return Form(self.n)
        return Form._raw(self.n, {k: v * c for k, v in self._terms.items()})

    __rmul__ = __mul__

    def is_even(self) -> bool:
        return all(len(w) % 2 == 0 for _, w in self._terms)

    def degrees(self) -> set[int]:
        return {sum(e) + len(w) for e, w in self._terms}

    def __repr__(self):
        return f"Form({self.n}, {self._terms!r})"


EvenForm = Form


def wedge(a: Form, b: Form) -> Form:
    acc: dict[Key, Fraction] = {}
    for (e1, w1), c1 in a.terms.items():
        for (e2, w2), c2 in b.terms.items():
            s, w = _sort_sign(w1 + w2)
            if not s:
                continue
            key = (tuple(x + y for x, y in zip(e1, e2)), w)
            v = acc.get(key, 0) + s * c1 * c2
            if v:
                acc[key] = v
            else:
                del acc[key]
    return Form._raw(a.n, acc)


def dee(a: Form) -> Form:
    """Exterior derivative: d(f dx_I) = sum_j (df/dx_j) dx_j ^ dx_I."""
    acc: dict[Key, Fraction] = {}
    for (e, w), c in a.terms.items():
        for j in range(a.n):
            if not e[j] or j in w:
                continue
            s, nw = _sort_sign((j,) + w)
            ne = list(e)
            ne[j] -= 1
            key = (tuple(ne), nw)
            v = acc.get(key, 0) + s * e[j] * c
            if v:
                acc[key] = v
            else:
                del acc[key]
    return Form._raw(a.n, acc)


def fedosov_mul(a: Form, b: Form) -> Form:
    return wedge(a, b) + wedge(dee(a), dee(b))


def fs_map(p: NCPoly, n: int) -> Form:
    """Algebra map from the free algebra on n degree-1 generators to (forms, o)."""
    cache: dict[tuple[int, ...], Form] = {(): Form.constant(n)}
    out = Form(n)
    for w, c in p.terms.items():
        out = out + _fs_word(w, n, cache) * c
    return out


def _fs_word(w: tuple[int, ...], n: int, cache: dict) -> Form:
    got = cache.get(w)
    if got is None:
        got = fedosov_mul(_fs_word(w[:-1], n, cache), Form.coordinate(n, w[-1]))
        cache[w] = got
    return got


# ----------------------------------------------------------------------
# graded pieces and the word-side comparison


def form_basis(n: int, d: int, even: bool = True) -> list[Key]:
    """Monomial basis (exponent, wedge) of degree-d forms, fixed order."""
    out = []
    for size in range(0, min(n, d) + 1):
        if even and size % 2:
            continue
        for w in itertools.combinations(range(n), size):
            for e in _exponents(n, d - size):
                out.append((e, w))
    return out


def _exponents(n: int, total: int) -> list[tuple[int, ...]]:
    if n == 0:
        return [()] if total == 0 else []
    if n == 1:
        return [(total,)]
    return [(a,) + rest for a in range(total, -1, -1) for rest in _exponents(n - 1, total - a)]


def even_form_dim(n: int, d: int) -> int:
    return sum(math.comb(n, j) * math.comb(d - j + n - 1, n - 1)
               for j in range(0, min(n, d) + 1, 2))


def fs_matrix(n: int, d: int, index: WordIndex | None = None):
    """Images of all degree-d words as rows over the degree-d even-form basis."""
    index = index or WordIndex([1] * n)
    keys = form_basis(n, d)
    pos = {k: i for i, k in enumerate(keys)}
    cache: dict = {(): Form.constant(n)}
    rows = []
    for w in index.words(d):
        f = _fs_word(w, n, cache)
        rows.append({pos[k]: c for k, c in f.terms.items()})
    return keys, rows


def fs_kernel(n: int, d: int, index: WordIndex | None = None) -> EchelonBasis:
    """Echelon basis of ker(fs) inside the degree-d word span.

    Uses rows (fs(w) | e_w) with the form block first: echelon rows whose
    pivot falls in the word block are exactly the kernel.
    """
    index = index or WordIndex([1] * n)
    keys, rows = fs_matrix(n, d, index)
    m, N = len(keys), index.size(d)
    aug = []
    for j, r in enumerate(rows):
        v = dict(r)
        v[m + j] = 1
        aug.append(v)
    E = echelonize(RowBatch.from_vectors(aug, m + N))
    kern = []
    for i, p in enumerate(E.pivots.tolist()):
        if p >= m:
            cols, vals = E.int_row(i)
            kern.append({int(c) - m: v for c, v in zip(cols.tolist(), vals)})
    return echelonize(RowBatch.from_vectors(kern, N))


def fs_rank(n: int, d: int, index: WordIndex | None = None) -> int:
    keys, rows = fs_matrix(n, d, index)
    return echelonize(RowBatch.from_vectors(rows, len(keys))).dim
