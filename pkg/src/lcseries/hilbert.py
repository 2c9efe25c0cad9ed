"""Rational fits of Hilbert series of N_k.

The pole locations are known in advance (roots of unity of orders d_i), the
pole orders are not.  The fit multiplies the truncated series by
prod_i (1 - t^{d_i})^e and calls the result stable when the top quarter of
the truncated numerator vanishes; otherwise e is doubled, at most twice.
Stability is evidence from a finite window, not a proof.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .freealg import GeneratorSpec


def poly_mul(a: Sequence[int], b: Sequence[int], trunc: int | None = None) -> list[int]:
    n = len(a) + len(b) - 1 if a and b else 0
    if trunc is not None:
        n = min(n, trunc + 1)
    out = [0] * n
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            if i + j >= n:
                break
            out[i + j] += x * y
    return out


def denominator_poly(gen_degrees: Sequence[int], exponent: int) -> list[int]:
    out = [1]
    for d in gen_degrees:
        f = [1] + [0] * (d - 1) + [-1]
        for _ in range(exponent):
            out = poly_mul(out, f)
    return out


def series_expand(numerator: Sequence[int], factors: Sequence[tuple[int, int]], D: int) -> list[int]:
    """Coefficients 0..D of numerator / prod (1 - t^d)^e, for (d, e) in factors."""
    out = list(numerator[: D + 1]) + [0] * max(0, D + 1 - len(numerator))
    for d, e in factors:
        for _ in range(e):
            # divide by (1 - t^d): running sum with stride d
            for i in range(d, D + 1):
                out[i] += out[i - d]
    return out


def _strip(p: list[int]) -> list[int]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _divide_exact(num: list[int], d: int) -> list[int] | None:
    """num / (1 - t^d) if it is a polynomial, else None."""
    num = _strip(list(num))
    if not num:
        return []
    if len(num) <= d:
        return None
    q = [0] * (len(num) - d)
    for i in range(len(q)):
        q[i] = num[i] + (q[i - d] if i >= d else 0)
    return q if _strip(poly_mul(q, [1] + [0] * (d - 1) + [-1])) == num else None


@dataclass(frozen=True)
class SeriesFit:
    numerator: tuple[int, ...]
    gen_degrees: tuple[int, ...]
    exponent: int
    fitwindow: tuple[int, int]
    stable: bool

    def denominator(self) -> list[int]:
        return denominator_poly(self.gen_degrees, self.exponent)

    def factors(self) -> list[tuple[int, int]]:
        return [(d, self.exponent) for d in self.gen_degrees]

    def expand(self, D: int | None = None) -> list[int]:
        D = self.fitwindow[1] if D is None else D
        return series_expand(list(self.numerator), self.factors(), D)

    def reduced(self) -> tuple[list[int], list[tuple[int, int]]]:
        """Cancel factors (1 - t^d) dividing the numerator exactly."""
        num = _strip(list(self.numerator))
        counts: dict[int, int] = {}
        for d, e in self.factors():
            counts[d] = counts.get(d, 0) + e
        if not num:
            return [], []
        for d in sorted(counts):
            while counts[d]:
                q = _divide_exact(num, d)
                if q is None:
                    break
                num = q
                counts[d] -= 1
        return num, [(d, e) for d, e in sorted(counts.items()) if e]


def fit_series(dims: Mapping[int, int], gens: Sequence[GeneratorSpec] | Sequence[int], D: int) -> SeriesFit:
    degs = tuple(g.degree if isinstance(g, GeneratorSpec) else int(g) for g in gens)
    series = [int(dims.get(d, 0)) for d in range(D + 1)]
    tail = math.ceil(D / 4)
    exponent = 1
    for attempt in range(3):
        num = poly_mul(series, denominator_poly(degs, exponent), trunc=D)
        num += [0] * (D + 1 - len(num))
        stable = not any(num[D + 1 - tail:]) if tail else True
        if stable or attempt == 2:
            break
        exponent *= 2
    return SeriesFit(tuple(_strip(num)), degs, exponent, (0, D), stable)


def format_fit(fit: SeriesFit, var: str = "t") -> str:
    num, facs = fit.reduced()

    def mono(c, i):
        if i == 0:
            return str(c)
        base = var if i == 1 else f"{var}^{i}"
        return base if c == 1 else ("-" + base if c == -1 else f"{c}{base}")

    top = " + ".join(mono(c, i) for i, c in enumerate(num) if c).replace("+ -", "- ") or "0"
    if not facs:
        return top
    base = [f"(1-{var})" if d == 1 else f"(1-{var}^{d})" for d, _ in facs]
    bottom = "".join(b if e == 1 else f"{b}^{e}" for b, (_, e) in zip(base, facs))
    return f"({top})/{bottom}"
