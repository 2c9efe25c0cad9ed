import math

import pytest

from lcseries import LCSEngine, NCPoly, Presentation, dim_table, verify_containments
from lcseries.freealg import commutator, count_commutative_monomials, mul
from lcseries.lcs import InvariantViolation, MemoryGuardError, PresentationError, lcs_slices
from lcseries.linalg import span_sum

from oracles import brute_ideal, brute_L, brute_M, span_rank

x, y, z = (NCPoly.gen(i) for i in range(3))

# <x,y | y^2>, <x,y | x^2, y^2, xy+yx>, <x,y | xy - yx> as dict polynomials
QUOTIENTS = {
    "y2": ([mul(y, y)], [{(1, 1): 1}]),
    "exterior": ([mul(x, x), mul(y, y), mul(x, y) + mul(y, x)],
                 [{(0, 0): 1}, {(1, 1): 1}, {(0, 1): 1, (1, 0): 1}]),
    "xy-yx": ([commutator(x, y)], [{(0, 1): 1, (1, 0): -1}]),
    "x2y": ([mul(mul(x, x), y) - mul(y, mul(x, x))], [{(0, 0, 1): 1, (1, 0, 0): -1}]),
}


@pytest.mark.parametrize("n,kmax,D", [(2, 4, 6), (3, 3, 4)])
def test_free_dims_match_brute_force(n, kmax, D):
    eng = LCSEngine(Presentation.free(n))
    for k in range(1, kmax + 1):
        for d in range(k, D + 1):
            assert eng.L(k, d).dim == span_rank(brute_L(n, k, d), n, d), (k, d)
            assert eng.M(k, d).dim == span_rank(brute_M(n, k, d), n, d), (k, d)


@pytest.mark.parametrize("name", sorted(QUOTIENTS))
def test_quotient_dims_match_brute_force(name):
    rels, raw = QUOTIENTS[name]
    eng = LCSEngine(Presentation(Presentation.free(2).generators, tuple(rels)))
    for d in range(1, 7):
        ideal = brute_ideal(2, raw, d)
        base = span_rank(ideal, 2, d)
        assert eng.ideal(d).dim == base
        for k in (1, 2, 3):
            span = ideal + (brute_M(2, k, d) if k > 1 else [{w: 1} for w in _words(d)])
            assert eng.M(k, d).dim == span_rank(span, 2, d) - base, (name, k, d)


def _words(d):
    import itertools
    return list(itertools.product(range(2), repeat=d))


@pytest.mark.parametrize("name", sorted(QUOTIENTS))
def test_functoriality_two_ways(name):
    rels, _ = QUOTIENTS[name]
    free = LCSEngine(Presentation.free(2))
    quo = LCSEngine(Presentation(Presentation.free(2).generators, tuple(rels)))
    for d in range(1, 8):
        I = quo.ideal(d)
        for k in (2, 3, 4):
            two_ways = span_sum(free.M(k, d), I).dim - I.dim
            assert quo.M(k, d).dim == two_ways


def test_known_free_dimensions(a2, a3):
    tab = dim_table(a2.P, 3, 8, a2)
    for d in range(2, 9):
        assert tab.N[(2, d)] == d - 1
        assert tab.B[(2, d)] == d - 1
        assert tab.N[(1, d)] == d + 1
        # A/M_3 has the size of even forms on the plane: 2d
        assert a2.ncols(d) - a2.M(3, d).dim == 2 * d
    assert [tab.N[(3, d)] for d in range(3, 9)] == [2, 5, 8, 11, 14, 17]
    for d in range(1, 6):
        assert a3.ncols(d) - a3.M(2, d).dim == math.comb(d + 2, 2)


@pytest.mark.parametrize("degs", [[1, 1], [1, 2], [2, 3], [1, 1, 2]])
def test_n1_is_commutative_quotient(degs):
    P = Presentation.free(len(degs), degrees=degs)
    eng = LCSEngine(P)
    for d in range(0, 8):
        if eng.index.size(d) > 3000:
            break
        n1 = eng.M(1, d).dim - eng.M(2, d).dim
        assert n1 == count_commutative_monomials(degs, d)


def test_weighted_generators_against_brute_word_count():
    P = Presentation.free(2, degrees=[1, 2])
    eng = LCSEngine(P)
    # fibonacci word counts
    assert [eng.ncols(d) for d in range(7)] == [1, 1, 2, 3, 5, 8, 13]
    tab = dim_table(P, 3, 7, eng)
    assert all(tab.N[(k, d)] >= 0 for k in range(1, 4) for d in range(8))


def test_y2_counterexample_classes_survive():
    rels, _ = QUOTIENTS["y2"]
    eng = LCSEngine(Presentation(Presentation.free(2).generators, tuple(rels)))
    for d in range(2, 9):
        xs = NCPoly.word((0,) * (d - 1))
        c = commutator(xs, y)
        assert eng.element_in(c, eng.M(2, d), d)
        assert not eng.element_in(c, eng.M(3, d), d)


def test_slices_are_nested(a2):
    sl = lcs_slices(a2.P, 4, 6, a2)
    for a, b in zip(sl, sl[1:]):
        for d in range(7):
            assert b.M.dim(d) <= a.M.dim(d) and b.L.dim(d) <= a.L.dim(d)


def test_verify_containments_free_a2(a2):
    rep = verify_containments(a2.P, 6, a2, seed=1)
    assert rep.ok, rep.failures()
    names = {e.name for e in rep.entries}
    assert {"M3*M2 in M4", "[A,[A,M2]] in M3", "[A,[A,M3]] in M4", "[A,M3] in L4", "M2*L3 in M4"} <= names


def test_verify_containments_quotient():
    rels, _ = QUOTIENTS["y2"]
    P = Presentation(Presentation.free(2).generators, tuple(rels))
    assert verify_containments(P, 6).ok


def test_verify_detects_a_false_claim(a2):
    # sanity check that membership can fail: M_2 is not inside M_3
    from lcseries.lcs import ContainmentReport, check_product

    rep = ContainmentReport()
    check_product(a2, rep, "A*M2 in M3", lambda a: a2.M(1, a), lambda b: a2.M(2, b), lambda d: a2.M(3, d), 4)
    assert not rep.ok


def test_chain_violation_raises(monkeypatch):
    eng = LCSEngine(Presentation.free(2))
    real = eng.M

    def broken(k, d):
        return real(1, d) if k == 3 else real(k, d)

    monkeypatch.setattr(eng, "M", broken)
    with pytest.raises(InvariantViolation):
        dim_table(eng.P, 3, 3, eng)


def test_memory_guard():
    eng = LCSEngine(Presentation.free(3), max_columns=100)
    with pytest.raises(MemoryGuardError):
        eng.M(2, 5)


def test_presentation_validation():
    gens = Presentation.free(2).generators
    with pytest.raises(PresentationError):
        Presentation(gens, (x + mul(x, y),))
    with pytest.raises(PresentationError):
        Presentation(gens, (NCPoly.zero(),))
    with pytest.raises(PresentationError):
        Presentation(gens, (z,))
    with pytest.raises(PresentationError):
        Presentation(gens + gens[:1])
    assert Presentation(gens, (mul(x, y) - mul(y, x),)).is_multihomogeneous()
    assert not Presentation(gens, (mul(x, x) + mul(y, y),)).is_multihomogeneous()
