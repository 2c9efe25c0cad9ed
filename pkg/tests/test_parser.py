from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lcseries import NCPoly, Presentation
from lcseries.freealg import GeneratorSpec, commutator, iterated_commutator, mul
from lcseries.parser import ParseError, TrivialRelationWarning, format_presentation, parse_presentation, tokenize

x, y = NCPoly.gen(0), NCPoly.gen(1)
GENS = "generators: x:1, y:1\n"


def test_basic():
    P = parse_presentation(GENS + "relations: y y")
    assert P == Presentation(Presentation.free(2).generators, (mul(y, y),))


def test_grammar():
    P = parse_presentation(GENS + "relations: [x,[x,y]] - 1/2 x (x y - 2 y x) + 3 y y x")
    expected = iterated_commutator(x, x, y) - mul(x, mul(x, y) - mul(y, x) * 2) * Fraction(1, 2) + mul(mul(y, y), x) * 3
    assert P.relations == (expected,)


def test_separators_and_comments():
    P = parse_presentation("# two relations\ngenerators: x:1, y:2\nrelations:\n  x x; [x,\n y]\n  y y, x y x\n")
    assert len(P.relations) == 4
    assert P.degrees == (1, 2)


def test_default_degree():
    assert parse_presentation("generators: a, b:3").degrees == (1, 3)


def test_trivial_relation_dropped_with_warning():
    with pytest.warns(TrivialRelationWarning):
        P = parse_presentation(GENS + "relations: [x,[x,y]] - x x y + 2 x y x - y x x; y y")
    assert P.relations == (mul(y, y),)


def test_sign_convention_in_expansion():
    # [x,[x,y]] = xxy - 2xyx + yxx, so adding the same terms doubles it
    P = parse_presentation(GENS + "relations: [x,[x,y]] - 2 x y x + x x y + y x x")
    assert P.relations == (iterated_commutator(x, x, y) * 2,)


def test_inhomogeneous_names_both_degrees():
    with pytest.raises(ParseError) as e:
        parse_presentation(GENS + "relations: x y + y")
    assert "degrees 2 and 1" in str(e.value)
    assert e.value.line == 2 and e.value.col == 18
    assert "^" in str(e.value)


def test_unknown_generator():
    with pytest.raises(ParseError, match="unknown generator 'z'") as e:
        parse_presentation(GENS + "relations: x z")
    assert (e.value.line, e.value.col) == (2, 14)


def test_degree_zero_rejected():
    with pytest.raises(ParseError, match="degree 0"):
        parse_presentation("generators: x:0")


@pytest.mark.parametrize("text,fragment", [
    (GENS + "relations: x $ y", "unexpected character"),
    (GENS + "relations: [x, y", "expected ']'"),
    (GENS + "relations: x +", "expected a term"),
    (GENS + "relations: x/0", "unexpected"),
    (GENS + "relations: 1/0 x", "zero denominator"),
    ("relations: x", "generators block"),
    ("generators: x:1, x:1", "duplicate"),
    ("", "missing generators"),
    (GENS + "relations: 3", "degree 0"),
])
def test_errors(text, fragment):
    with pytest.raises(ParseError, match=fragment):
        parse_presentation(text)


def test_caret_excerpt_points_at_column():
    with pytest.raises(ParseError) as e:
        parse_presentation(GENS + "relations: x x ] y")
    lines = str(e.value).splitlines()
    assert lines[1].strip() == "relations: x x ] y"
    assert lines[2].index("^") == lines[1].index("]")


def test_tokenizer_positions():
    toks = tokenize("a 12/5\n [b")
    assert [(t.kind, t.line, t.col) for t in toks] == [
        ("name", 1, 1), ("num", 1, 3), ("nl", 1, 7), ("op", 2, 2), ("name", 2, 3), ("eof", 2, 4)]


# round trip on random presentations
word = st.lists(st.integers(0, 2), min_size=2, max_size=2).map(tuple)
coef = st.fractions(min_value=-5, max_value=5, max_denominator=4).filter(bool)
rel = st.dictionaries(word, coef, min_size=1, max_size=4).map(NCPoly)


@given(st.lists(rel, max_size=4), st.lists(st.integers(1, 1), min_size=3, max_size=3))
@settings(max_examples=80, deadline=None)
def test_roundtrip(rels, degs):
    P = Presentation(tuple(GeneratorSpec(a, d) for a, d in zip("abc", degs)), tuple(rels))
    assert parse_presentation(format_presentation(P)) == P


def test_roundtrip_weighted():
    P = parse_presentation("generators: u:2, v:1\nrelations: u v v - 1/3 v v u + [u, v v]")
    assert parse_presentation(format_presentation(P)) == P
