import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lcseries import NCPoly, Presentation, standard_fiber
from lcseries.freealg import Derivation, WordIndex, commutator, iterated_commutator, mul
from lcseries.star import (
    max_weight_shift, monomial_field, nk_space, positive_weight_witnesses, random_element_of,
    random_homogeneous, reduced_spanning_set, same_class, st_action, star_act, star_assoc_defect,
    star_equal, star_generators, star_mul, wn_action_on_Nk, x2sq_witness,
)

x, y = NCPoly.gen(0), NCPoly.gen(1)
IDX = WordIndex([1, 1])


@given(st.integers(0, 10**6), st.integers(1, 3), st.integers(1, 3), st.integers(1, 3))
@settings(max_examples=40, deadline=None)
def test_associativity_defect_identity(seed, da, db, dc):
    rng = random.Random(seed)
    a, b, c = (random_homogeneous(IDX, d, rng) for d in (da, db, dc))
    assert star_assoc_defect(a, b, c) == commutator(b, commutator(a, c)) * Fraction(1, 4)


@given(st.integers(0, 10**6))
@settings(max_examples=25, deadline=None)
def test_star_commutative_associative_mod_m3(a2, seed):
    rng = random.Random(seed)
    a, b, c = (random_homogeneous(IDX, rng.randint(1, 2), rng) for _ in range(3))
    assert star_mul(a, b).representative == star_mul(b, a).representative
    assert star_equal(a2, star_mul(star_mul(a, b), c), star_mul(a, star_mul(b, c)))


def test_star_not_associative_in_free_algebra():
    assert star_assoc_defect(y, x, x) != NCPoly.zero()


@given(st.integers(0, 10**6))
@settings(max_examples=20, deadline=None)
def test_nk_is_a_module(a2, seed):
    # (a*b)*n = a*(b*n) in N_2, for n in M_2
    rng = random.Random(seed)
    nvec = random_element_of(a2, a2.M(2, 2), 2, rng)
    a, b = (random_homogeneous(IDX, 1, rng) for _ in range(2))
    lhs = star_act(star_mul(a, b), nvec)
    rhs = star_act(a, star_act(b, nvec))
    assert a2.element_in(lhs, a2.M(2, 4), 4)
    assert same_class(a2, 2, lhs, rhs)


def test_star_generators_include_brackets():
    gens = star_generators(Presentation.free(3))
    assert len(gens) == 3 + 3
    assert (2, commutator(x, y)) in gens


def test_fiber_n2_k2():
    f = standard_fiber(Presentation.free(2), 2, 6)
    assert f.dims()[2] == 1 and f.totaldim == 1
    assert f.all_weights() == [(1, 1)]
    assert f.stable


def test_fiber_n2_k3_and_witness(a2):
    f = standard_fiber(a2, 3, 6)
    assert f.totaldim == 3
    assert f.dims()[3] == 2 and f.dims()[4] == 1
    assert sorted(f.all_weights()) == [(1, 2), (2, 1), (2, 2)]
    w = x2sq_witness(f)
    assert w == {"image_equals_target": True, "image_nonzero": True, "source_nonzero": True}
    assert positive_weight_witnesses(f)
    assert max_weight_shift(f) == 1


@pytest.mark.parametrize("n,k,D", [(2, 3, 6), (2, 4, 7), (3, 2, 5), (3, 3, 6)])
def test_bracket_star_generators_add_nothing_beyond_xi(n, k, D):
    # A+ * N_k is generated by the x_i and [x_i, x_j]; empirically the x_i suffice
    P = Presentation.free(n)
    only_x = [(1, NCPoly.gen(i)) for i in range(n)]
    assert standard_fiber(P, k, D).dims() == standard_fiber(P, k, D, acting=only_x).dims()


def test_fiber_rejects_quotients():
    P = Presentation(Presentation.free(2).generators, (mul(y, y),))
    with pytest.raises(ValueError):
        standard_fiber(P, 2, 4)
    with pytest.raises(ValueError):
        standard_fiber(Presentation.free(2), 1, 4)


def test_euler_field_acts_by_degree(a2):
    E = Derivation.euler(2)
    for d in (3, 4):
        mat = wn_action_on_Nk(a2, E, 3, d)
        q = nk_space(a2, 3, d)
        assert mat == [[Fraction(d) if i == j else Fraction(0) for j in range(q.dim)] for i in range(q.dim)]


def test_wn_action_is_a_lie_algebra_action(a2):
    # [D1, D2] acts as the commutator of the matrices on N_2
    D1 = monomial_field(2, (2, 0), 1)
    D2 = monomial_field(2, (1, 1), 0)
    d = 3
    A1 = wn_action_on_Nk(a2, D1, 2, d)
    B2 = wn_action_on_Nk(a2, D2, 2, d + 1)
    B1 = wn_action_on_Nk(a2, D2, 2, d)
    A2 = wn_action_on_Nk(a2, D1, 2, d + 1)
    C = wn_action_on_Nk(a2, D1.bracket(D2), 2, d)

    def mm(P, Q):
        return [[sum(P[i][t] * Q[t][j] for t in range(len(Q))) for j in range(len(Q[0]))] for i in range(len(P))]

    lhs = [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(mm(A2, B1), mm(B2, A1))]
    assert lhs == C


def test_gl_action_on_fiber(a2):
    f = standard_fiber(a2, 3, 6)
    # x_1 d/dx_2 has weight 0 and moves (1,2) to (2,1)
    mat = st_action(f, monomial_field(2, (1, 0), 1), 3)
    assert any(any(r) for r in mat)


def test_reduced_spanning_set_spans_fiber(a2):
    f = standard_fiber(a2, 3, 6)
    span = reduced_spanning_set(2, 3, 6)
    for d, q in f.perdegree.items():
        if not q.dim:
            continue
        from lcseries.linalg import echelonize
        rows = [q.sub.residue(a2.reduce_poly(p, d)) for p in span.get(d, [])]
        assert echelonize([r for r in rows if r], a2.ncols(d)).dim == q.dim


@pytest.mark.parametrize("k", [2, 3, 4])
def test_fiber_weights_are_symmetric(k):
    from lcseries.chardec import character_of
    f = standard_fiber(Presentation.free(3), k, k + 2)
    assert character_of(f).is_symmetric()
