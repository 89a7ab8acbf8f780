import pytest
from hypothesis import given, strategies as st

from sutured.fock import (
    FockElement,
    LaxElement,
    charge,
    comparable_pairs,
    duality_H,
    leq,
    leq_closure,
    multiply,
    pairing,
    support_interval,
    words,
    words_of_degree,
)

word = st.text(alphabet="xy", max_size=6)


def element(max_len=5):
    return st.integers(0, max_len).flatmap(
        lambda n: st.dictionaries(st.sampled_from(words(n)), st.integers(-3, 3), max_size=6).map(FockElement)
    )


def test_word_counts():
    assert [len(words(n)) for n in range(5)] == [1, 2, 4, 8, 16]
    assert words(2) == ["xx", "xy", "yx", "yy"]
    assert words(4, 0) == ["xxyy", "xyxy", "xyyx", "yxxy", "yxyx", "yyxx"]


def test_charge():
    assert charge("xxy") == -1
    assert charge("") == 0


@given(word, word)
def test_leq_matches_swap_closure(a, b):
    if len(a) == len(b):
        assert leq(a, b) == (b in leq_closure(a))


def test_leq_examples():
    assert leq("xy", "yx")
    assert not leq("yx", "xy")
    assert leq("xxyy", "yyxx")


def test_comparable_pairs_are_catalan():
    assert [len(comparable_pairs(n)) for n in range(6)] == [1, 2, 5, 14, 42, 132]


@given(element(), element())
def test_pairing_bilinear(u, v):
    assert pairing(u + v, v) == pairing(u, v) + pairing(v, v)
    assert pairing(u.scale(-2), v) == -2 * pairing(u, v)


@given(element(4), element(4))
def test_duality(u, v):
    assert pairing(u, v) == pairing(v, duality_H(u))


@given(element())
def test_parse_round_trip(u):
    assert FockElement.parse(str(u)) == u


def test_parse_examples():
    assert FockElement.parse("xy-yx") == FockElement({"xy": 1, "yx": -1})
    assert str(FockElement.word("")) == "1"
    assert FockElement.parse("1") == FockElement.word("")
    assert FockElement.parse("2xy - 3yy")["yy"] == -3


def test_multiply_square():
    s = FockElement.parse("xy-yx")
    assert multiply(s, s) == FockElement.parse("xyxy-xyyx-yxxy+yxyx")


@given(element())
def test_lax_ignores_sign(u):
    assert LaxElement(u) == LaxElement(-u)
    if not u.is_zero():
        assert LaxElement(u).content() == u.content()


def test_lax_tuple():
    assert LaxElement((0, -1, 2)) == LaxElement((0, 1, -2))
    assert LaxElement((0, 0)).is_zero
    assert str(LaxElement(FockElement.parse("x"))) == "±x"


def test_support_interval():
    assert support_interval(FockElement.parse("xy-yx")) == ("xy", "yx")
    assert support_interval(FockElement.parse("xxyy+yyxx")) == ("xxyy", "yyxx")
    with pytest.raises(ValueError):
        support_interval(FockElement())


def test_words_of_degree():
    assert words_of_degree(1, 2) == ["xyy", "yxy", "yyx"]
