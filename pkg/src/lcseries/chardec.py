"""Torus characters of standard fibers and their Schur expansions."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Mapping, Sequence

Partition = tuple[int, ...]


class CharacterError(ValueError):
    pass


@dataclass(frozen=True)
class Character:
    n: int
    coeffs: Mapping[tuple[int, ...], int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {tuple(k): int(v) for k, v in self.coeffs.items() if v}
        for k in clean:
            if len(k) != self.n:
                raise CharacterError(f"exponent {k} has the wrong length for n={self.n}")
        object.__setattr__(self, "coeffs", clean)

    def __add__(self, other: "Character") -> "Character":
        acc = Counter(self.coeffs)
        acc.update(other.coeffs)
        return Character(self.n, acc)

    def scaled(self, m: int) -> "Character":
        return Character(self.n, {k: m * v for k, v in self.coeffs.items()})

    @property
    def dim(self) -> int:
        return sum(self.coeffs.values())

    def is_symmetric(self) -> bool:
        for k, v in self.coeffs.items():
            for j in range(self.n - 1):
                t = list(k)
                t[j], t[j + 1] = t[j + 1], t[j]
                if self.coeffs.get(tuple(t), 0) != v:
                    return False
        return True


def character_of(fiber) -> Character:
    """Multidegree histogram of a standard fiber basis."""
    c = Character(fiber.engine.n, Counter(fiber.all_weights()))
    if not c.is_symmetric():
        raise CharacterError(f"standard fiber character is not symmetric: {dict(c.coeffs)}")
    return c


def ssyt(shape: Partition, n: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Semistandard tableaux of `shape` with entries 0..n-1, row by row."""
    shape = tuple(x for x in shape if x)
    if len(shape) > n:
        return

    def fill(r: int, rows: list[tuple[int, ...]]):
        if r == len(shape):
            yield tuple(rows)
            return
        above = rows[r - 1] if r else None
        for row in _rows(shape[r], n, above):
            yield from fill(r + 1, rows + [row])

    yield from fill(0, [])


def _rows(length: int, n: int, above) -> Iterator[tuple[int, ...]]:
    def go(pos: int, lo: int, acc: tuple[int, ...]):
        if pos == length:
            yield acc
            return
        start = max(lo, above[pos] + 1 if above is not None else 0)
        for v in range(start, n):
            yield from go(pos + 1, v, acc + (v,))

    yield from go(0, 0, ())


@lru_cache(maxsize=None)
def _schur(shape: Partition, n: int) -> tuple[tuple[tuple[int, ...], int], ...]:
    acc: Counter = Counter()
    for t in ssyt(shape, n):
        content = [0] * n
        for row in t:
            for v in row:
                content[v] += 1
        acc[tuple(content)] += 1
    return tuple(sorted(acc.items()))


def schur_expand(shape: Sequence[int], n: int) -> Character:
    shape = tuple(x for x in shape if x)
    if len(shape) > n:
        raise CharacterError(f"partition {shape} has more than {n} parts")
    return Character(n, dict(_schur(shape, n)))


def ssyt_count(shape: Sequence[int], n: int) -> int:
    return sum(v for _, v in _schur(tuple(x for x in shape if x), n))


@dataclass(frozen=True)
class SchurDecomp:
    n: int
    multiplicities: Mapping[Partition, int]

    @property
    def dim(self) -> int:
        return sum(m * ssyt_count(lam, self.n) for lam, m in self.multiplicities.items())

    def as_strings(self) -> dict[str, int]:
        return {partition_str(lam): m for lam, m in sorted(self.multiplicities.items())}


def partition_str(lam: Sequence[int]) -> str:
    return "(" + ",".join(str(x) for x in lam) + ")"


def decompose(c: Character) -> SchurDecomp:
    """Peel off s_lambda at the lex-greatest exponent until nothing is left."""
    if any(v < 0 for v in c.coeffs.values()):
        raise CharacterError("not a character: negative coefficient")
    if not c.is_symmetric():
        raise CharacterError("not a character: not symmetric")
    rest = Counter(c.coeffs)
    mult: dict[Partition, int] = {}
    while rest:
        top = max(rest)
        m = rest[top]
        lam = tuple(x for x in top if x)
        if list(top) != sorted(top, reverse=True):
            raise CharacterError(f"not a character: leading exponent {top} is not a partition")
        mult[lam] = mult.get(lam, 0) + m
        for k, v in _schur(lam, c.n):
            rest[k] -= m * v
            if rest[k] < 0:
                raise CharacterError(f"not a character: negative multiplicity at {k}")
            if rest[k] == 0:
                del rest[k]
    return SchurDecomp(c.n, mult)


def kerchev_bound(k: int, n: int) -> int:
    """Degree bound on |lambda| for V_lambda inside St(N_k(A_n))."""
    if k % 2:
        return 2 * k - 2
    return 2 * k - 2 + 2 * ((n - 2) // 2)
