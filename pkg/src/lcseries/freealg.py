"""Words and noncommutative polynomials over the rationals.

A word is a plain tuple of generator indices; the empty tuple is the unit.
Words of a fixed total degree are ordered length-first, then
lexicographically on generator indices.  That order fixes every column
index used by the linear algebra, so it must never change.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

Word = tuple[int, ...]


@dataclass(frozen=True)
class GeneratorSpec:
    name: str
    degree: int = 1

    def __post_init__(self):
        if not isinstance(self.degree, int) or self.degree < 1:
            raise ValueError(f"generator {self.name!r} must have degree >= 1, got {self.degree!r}")


def word_degree(word: Word, degrees: Sequence[int]) -> int:
    return sum(degrees[i] for i in word)


def enumerate_words(gens: Sequence[GeneratorSpec] | Sequence[int], d: int) -> list[Word]:
    """All words of total degree exactly `d`, in length-then-lex order.

    `gens` may be generator specs or a bare sequence of degrees.
    """
    if d < 0:
        raise ValueError("degree must be nonnegative")
    degrees = _degrees(gens)
    out = list(_words_of_degree(tuple(degrees), d))
    out.sort(key=lambda w: (len(w), w))
    return out


def _degrees(gens) -> tuple[int, ...]:
    return tuple(g.degree if isinstance(g, GeneratorSpec) else int(g) for g in gens)


def _words_of_degree(degrees: tuple[int, ...], d: int) -> Iterator[Word]:
    if d == 0:
        yield ()
        return
    for i, di in enumerate(degrees):
        if di <= d:
            for rest in _words_of_degree(degrees, d - di):
                yield (i,) + rest


def _as_fraction(c) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


class NCPoly:
    """Finite rational combination of words; immutable."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Word, object] | Iterable[tuple[Word, object]] = ()):
        acc: dict[Word, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for w, c in items:
            c = _as_fraction(c)
            if c:
                w = tuple(w)
                v = acc.get(w, 0) + c
                if v:
                    acc[w] = v
                else:
                    acc.pop(w, None)
        self._terms = acc
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict[Word, Fraction]) -> "NCPoly":
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def word(cls, word: Word, coeff=1) -> "NCPoly":
        return cls({tuple(word): coeff})

    @classmethod
    def gen(cls, i: int) -> "NCPoly":
        return cls({(i,): 1})

    @classmethod
    def one(cls) -> "NCPoly":
        return cls({(): 1})

    @classmethod
    def zero(cls) -> "NCPoly":
        return cls._raw({})

    @property
    def terms(self) -> Mapping[Word, Fraction]:
        return self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(sorted(self._terms.items(), key=lambda t: (len(t[0]), t[0])))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = NCPoly.one() * other
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __add__(self, other):
        other = _coerce(other)
        acc = dict(self._terms)
        for w, c in other._terms.items():
            v = acc.get(w, 0) + c
            if v:
                acc[w] = v
            else:
                del acc[w]
        return NCPoly._raw(acc)

    __radd__ = __add__

    def __neg__(self):
        return NCPoly._raw({w: -c for w, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = _as_fraction(other)
            if not other:
                return NCPoly.zero()
            return NCPoly._raw({w: c * other for w, c in self._terms.items()})
        if isinstance(other, NCPoly):
            return mul(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __truediv__(self, other):
        return self * (Fraction(1) / _as_fraction(other))

    def degrees(self, degrees: Sequence[int]) -> set[int]:
        return {word_degree(w, degrees) for w in self._terms}

    def homogeneous_degree(self, degrees: Sequence[int]) -> int | None:
        """The common degree of all words, or None if mixed or zero."""
        ds = self.degrees(degrees)
        return ds.pop() if len(ds) == 1 else None

    def component(self, d: int, degrees: Sequence[int]) -> "NCPoly":
        return NCPoly._raw({w: c for w, c in self._terms.items() if word_degree(w, degrees) == d})

    def multidegree_support(self, n: int) -> set[tuple[int, ...]]:
        return {_multidegree(w, n) for w in self._terms}

    def __repr__(self):
        if not self._terms:
            return "NCPoly(0)"
        return f"NCPoly({dict(iter(self))!r})"

    def format(self, names: Sequence[str] | None = None) -> str:
        if not self._terms:
            return "0"
        names = names or [f"x{i + 1}" for i in range(1 + max((max(w) for w in self._terms if w), default=0))]
        parts = []
        for w, c in self:
            mono = " ".join(names[i] for i in w)
            if not mono:
                s = str(c)
            elif c == 1:
                s = mono
            elif c == -1:
                s = "-" + mono
            else:
                s = f"{c} {mono}"
            parts.append(s)
        out = " + ".join(parts)
        return out.replace("+ -", "- ")


def _coerce(x) -> NCPoly:
    if isinstance(x, NCPoly):
        return x
    if isinstance(x, (int, Fraction)):
        return NCPoly({(): x})
    raise TypeError(f"cannot coerce {type(x).__name__} to NCPoly")


def _multidegree(w: Word, n: int) -> tuple[int, ...]:
    md = [0] * n
    for i in w:
        md[i] += 1
    return tuple(md)


def mul(p: NCPoly, q: NCPoly) -> NCPoly:
    acc: dict[Word, Fraction] = {}
    for u, a in p._terms.items():
        for v, b in q._terms.items():
            w = u + v
            c = acc.get(w, 0) + a * b
            if c:
                acc[w] = c
            else:
                del acc[w]
    return NCPoly._raw(acc)


def commutator(p: NCPoly, q: NCPoly) -> NCPoly:
    return mul(p, q) - mul(q, p)


def iterated_commutator(*ps: NCPoly) -> NCPoly:
    """[p1, [p2, [..., [p_{k-1}, p_k]...]]]."""
    out = ps[-1]
    for p in reversed(ps[:-1]):
        out = commutator(p, out)
    return out


class Derivation:
    """Derivation of the free algebra given by its values on the generators."""

    def __init__(self, images: Sequence[NCPoly]):
        self.images = tuple(_coerce(p) for p in images)

    @property
    def n(self) -> int:
        return len(self.images)

    def weight(self, degrees: Sequence[int]) -> int | None:
        """Common degree shift w with deg D(x_i) = deg x_i + w, or None."""
        shifts = set()
        for i, img in enumerate(self.images):
            if not img:
                continue
            d = img.homogeneous_degree(degrees)
            if d is None:
                return None
            shifts.add(d - degrees[i])
        if len(shifts) > 1:
            return None
        return shifts.pop() if shifts else 0

    def __call__(self, p: NCPoly) -> NCPoly:
        return apply_derivation(self, p)

    def bracket(self, other: "Derivation") -> "Derivation":
        """[D1, D2] = D1 D2 - D2 D1, again a derivation."""
        return Derivation([self(b) - other(a) for a, b in zip(self.images, other.images)])

    @classmethod
    def euler(cls, n: int, degrees: Sequence[int] | None = None) -> "Derivation":
        degrees = degrees or [1] * n
        return cls([NCPoly.gen(i) * degrees[i] for i in range(n)])

    @classmethod
    def from_commutative(cls, images: Sequence[Mapping[tuple[int, ...], object]]) -> "Derivation":
        """Lift a polynomial vector field sum_i f_i d/dx_i by symmetrizing each f_i."""
        return cls([symmetrized_lift(f) for f in images])


def symmetrized_lift(f: Mapping[tuple[int, ...], object]) -> NCPoly:
    """Average of all orderings of each commutative monomial x^a."""
    acc: dict[Word, Fraction] = {}
    for expo, c in f.items():
        c = _as_fraction(c)
        letters = [i for i, e in enumerate(expo) for _ in range(e)]
        orders = set(itertools.permutations(letters))
        share = c / len(orders)
        for w in orders:
            acc[w] = acc.get(w, 0) + share
    return NCPoly(acc)


def apply_derivation(D: Derivation, p: NCPoly) -> NCPoly:
    acc: dict[Word, Fraction] = {}
    for w, c in p.terms.items():
        for j, letter in enumerate(w):
            img = D.images[letter]
            if not img:
                continue
            left, right = w[:j], w[j + 1:]
            for u, a in img.terms.items():
                key = left + u + right
                v = acc.get(key, 0) + c * a
                if v:
                    acc[key] = v
                else:
                    del acc[key]
    return NCPoly._raw(acc)


class WordIndex:
    """Per-degree interning of words into column indices.

    Degree-`d` words are numbered in `enumerate_words` order; the tables are
    built lazily and never mutated afterwards.
    """

    def __init__(self, gens: Sequence[GeneratorSpec] | Sequence[int]):
        self.degrees = _degrees(gens)
        self.n = len(self.degrees)
        self._words: dict[int, list[Word]] = {}
        self._index: dict[int, dict[Word, int]] = {}
        self._concat: dict[tuple[int, int], np.ndarray] = {}
        self._md: dict[int, np.ndarray] = {}

    def words(self, d: int) -> list[Word]:
        ws = self._words.get(d)
        if ws is None:
            ws = self._words[d] = enumerate_words(self.degrees, d)
        return ws

    def size(self, d: int) -> int:
        return len(self.words(d)) if d >= 0 else 0

    def index(self, d: int) -> dict[Word, int]:
        ix = self._index.get(d)
        if ix is None:
            ix = self._index[d] = {w: i for i, w in enumerate(self.words(d))}
        return ix

    def multidegrees(self, d: int) -> np.ndarray:
        md = self._md.get(d)
        if md is None:
            ws = self.words(d)
            md = np.zeros((len(ws), self.n), dtype=np.int64)
            for r, w in enumerate(ws):
                for i in w:
                    md[r, i] += 1
            self._md[d] = md
        return md

    def concat(self, f: int, e: int) -> np.ndarray:
        """Table T with T[i, j] = index of words(f)[i] + words(e)[j] in degree f+e."""
        key = (f, e)
        t = self._concat.get(key)
        if t is None:
            target = self.index(f + e)
            left, right = self.words(f), self.words(e)
            t = np.empty((len(left), len(right)), dtype=np.int64)
            for i, u in enumerate(left):
                row = t[i]
                for j, v in enumerate(right):
                    row[j] = target[u + v]
            self._concat[key] = t
        return t

    def vector(self, p: NCPoly, d: int) -> dict[int, Fraction]:
        ix = self.index(d)
        out = {}
        for w, c in p.terms.items():
            try:
                out[ix[w]] = c
            except KeyError:
                raise ValueError(f"word {w} is not of degree {d}") from None
        return out

    def poly(self, vec: Mapping[int, object], d: int) -> NCPoly:
        ws = self.words(d)
        return NCPoly({ws[i]: c for i, c in vec.items()})

    @cached_property
    def generator_words(self) -> list[tuple[int, int]]:
        """(degree, column index) of each generator's one-letter word."""
        return [(di, self.index(di)[(i,)]) for i, di in enumerate(self.degrees)]


def count_commutative_monomials(degrees: Sequence[int], d: int) -> int:
    if all(x == 1 for x in degrees):
        n = len(degrees)
        return math.comb(d + n - 1, n - 1) if n else int(d == 0)
    ways = [1] + [0] * d
    for di in degrees:
        for t in range(di, d + 1):
            ways[t] += ways[t - di]
    return ways[d]
