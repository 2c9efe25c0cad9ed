"""Independent brute-force oracles.

Nothing here imports the elimination code; spans are ranked with a plain
Bareiss routine on dense Python-int matrices built from dict polynomials.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction


def bareiss_rank(rows: list[list[int]]) -> int:
    M = [list(r) for r in rows if any(r)]
    if not M:
        return 0
    m, n = len(M), len(M[0])
    rank, prev = 0, 1
    for col in range(n):
        piv = next((i for i in range(rank, m) if M[i][col]), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        p = M[rank][col]
        for i in range(rank + 1, m):
            M[i] = [(p * M[i][j] - M[i][col] * M[rank][j]) // prev for j in range(n)]
        prev = p
        rank += 1
        if rank == m:
            break
    return rank


def integer_rows(vecs, cols) -> list[list[int]]:
    pos = {c: i for i, c in enumerate(cols)}
    out = []
    for v in vecs:
        den = math.lcm(*[Fraction(c).denominator for c in v.values()]) if v else 1
        row = [0] * len(cols)
        for w, c in v.items():
            row[pos[w]] = int(Fraction(c) * den)
        out.append(row)
    return out


def words(n: int, d: int):
    return list(itertools.product(range(n), repeat=d))


# dict polynomials: {word tuple: Fraction}

def p_add(a, b, s=1):
    out = dict(a)
    for w, c in b.items():
        out[w] = out.get(w, 0) + s * c
        if not out[w]:
            del out[w]
    return out


def p_mul(a, b):
    out = {}
    for u, x in a.items():
        for v, y in b.items():
            out[u + v] = out.get(u + v, 0) + x * y
    return {w: c for w, c in out.items() if c}


def p_br(a, b):
    return p_add(p_mul(a, b), p_mul(b, a), -1)


def brute_L(n: int, k: int, d: int) -> list[dict]:
    """Right-nested brackets [w1,[w2,...,[w_{k-1},w_k]]] of words, total degree d."""
    out = []
    for comp in _compositions(d, k):
        for ws in itertools.product(*[words(n, c) for c in comp]):
            p = {ws[-1]: 1}
            for w in reversed(ws[:-1]):
                p = p_br({w: 1}, p)
            if p:
                out.append(p)
    return out


def brute_M(n: int, k: int, d: int) -> list[dict]:
    out = []
    for a in range(d - k + 1):
        for u in words(n, a):
            for l in brute_L(n, k, d - a):
                out.append(p_mul({u: 1}, l))
    return out


def brute_ideal(n: int, relations: list[dict], d: int) -> list[dict]:
    out = []
    for r in relations:
        e = len(next(iter(r)))
        for a in range(d - e + 1):
            for u in words(n, a):
                for v in words(n, d - e - a):
                    out.append(p_mul(p_mul({u: 1}, r), {v: 1}))
    return out


def span_rank(vecs, n: int, d: int) -> int:
    return bareiss_rank(integer_rows(vecs, words(n, d)))


def _compositions(total: int, parts: int):
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for a in range(1, total - parts + 2):
        for rest in _compositions(total - a, parts - 1):
            yield (a,) + rest


def hook_content_dim(shape, n: int) -> int:
    """dim of the GL_n irreducible with highest weight `shape`."""
    num, den = 1, 1
    conj = [sum(1 for r in shape if r > j) for j in range(shape[0])] if shape else []
    for i, r in enumerate(shape):
        for j in range(r):
            num *= n + j - i
            den *= (r - j - 1) + (conj[j] - i - 1) + 1
    return num // den


def fraction_rref(rows: list[list[int]]) -> list[list[Fraction]]:
    """Textbook RREF over Q, nonzero rows only."""
    M = [[Fraction(x) for x in r] for r in rows]
    if not M:
        return []
    m, n = len(M), len(M[0])
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        p = M[r][c]
        M[r] = [x / p for x in M[r]]
        for i in range(m):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        r += 1
        if r == m:
            break
    return M[:r]
