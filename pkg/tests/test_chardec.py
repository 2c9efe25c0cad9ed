import itertools
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lcseries.chardec import (
    Character, CharacterError, SchurDecomp, decompose, kerchev_bound, partition_str, schur_expand,
    ssyt, ssyt_count,
)

from oracles import hook_content_dim


def partitions(total, maxpart=None):
    maxpart = total if maxpart is None else maxpart
    if total == 0:
        yield ()
        return
    for p in range(min(total, maxpart), 0, -1):
        for rest in partitions(total - p, p):
            yield (p,) + rest


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_ssyt_count_is_hook_content(n):
    for t in range(1, 7):
        for lam in partitions(t):
            if len(lam) <= n:
                assert ssyt_count(lam, n) == hook_content_dim(lam, n), lam


def test_ssyt_are_semistandard():
    for t in ssyt((3, 2), 3):
        for row in t:
            assert list(row) == sorted(row)
        for a, b in zip(t[0], t[1]):
            assert a < b


def test_schur_polynomials_are_symmetric():
    for lam in [(2, 1), (3, 1, 1), (2, 2)]:
        assert schur_expand(lam, 3).is_symmetric()


def tensor_power(n, d):
    return Character(n, Counter(tuple(w.count(i) for i in range(n)) for w in itertools.product(range(n), repeat=d)))


def test_tensor_cube():
    dec = decompose(tensor_power(3, 3))
    assert dec.multiplicities == {(3,): 1, (2, 1): 2, (1, 1, 1): 1}
    assert dec.dim == 27


@given(st.lists(st.sampled_from([(2,), (1, 1), (2, 1), (3,), (2, 2), (3, 1), (1, 1, 1)]), min_size=1, max_size=5))
@settings(max_examples=60, deadline=None)
def test_decompose_inverts_expand(shapes):
    n = 3
    c = Character(n)
    for lam in shapes:
        c = c + schur_expand(lam, n)
    assert decompose(c).multiplicities == dict(Counter(shapes))


def test_rejects_non_characters():
    with pytest.raises(CharacterError):
        decompose(Character(2, {(1, 0): 1}))
    with pytest.raises(CharacterError):
        decompose(Character(2, {(1, 1): -1}))
    with pytest.raises(CharacterError):
        # symmetric but s_(2) consumes (1,1) once more than present
        decompose(Character(2, {(2, 0): 1, (0, 2): 1}))
    with pytest.raises(CharacterError):
        Character(2, {(1, 1, 1): 1})


def test_formatting_and_bound():
    assert partition_str((2, 1)) == "(2,1)"
    assert SchurDecomp(2, {(2, 1): 1, (2, 2): 1}).as_strings() == {"(2,1)": 1, "(2,2)": 1}
    assert [kerchev_bound(k, 2) for k in (2, 3, 4, 5)] == [2, 4, 6, 8]
    assert kerchev_bound(4, 4) == 8 and kerchev_bound(3, 4) == 4
