import pytest
from hypothesis import given, strategies as st

from sutured.chord import (
    VACUUM,
    ChordDiagram,
    DiagramParseError,
    InvalidDiagram,
    basis_diagram,
    basis_diagram_by_prepending,
    bypass_surgery,
    bypass_triples,
    catalan,
    enumerate_diagrams,
    euler_class,
    juxtapose,
    solve_table,
    suture_element,
)
from sutured.fock import FockElement, LaxElement, charge, multiply, words

diagram = st.integers(1, 5).flatmap(lambda k: st.sampled_from(enumerate_diagrams(k)))


def test_parse_and_print():
    d = ChordDiagram.parse("k=2; 0-3 1-2")
    assert str(d) == "k=2; 0-3 1-2; loops=0"
    assert ChordDiagram.parse(str(d)) == d
    assert ChordDiagram.parse("k=1; 0-1; loops=2").loops == 2


@pytest.mark.parametrize("text", ["", "garbage", "k=2; 0-1", "k=1; 0-x", "k=1; 0-1; loop=1"])
def test_parse_errors(text):
    with pytest.raises(DiagramParseError):
        ChordDiagram.parse(text)


@pytest.mark.parametrize("text", ["k=2; 0-2 1-3", "k=2; 0-1 0-2", "k=1; 0-5"])
def test_structural_errors(text):
    with pytest.raises(InvalidDiagram) as info:
        ChordDiagram.parse(text)
    assert not isinstance(info.value, DiagramParseError)


def test_catalan_counts():
    assert [len(enumerate_diagrams(k)) for k in range(1, 8)] == [catalan(k) for k in range(1, 8)]
    assert catalan(7) == 429


def test_letters():
    assert basis_diagram("") == VACUUM
    assert basis_diagram("x") == ChordDiagram.parse("k=2; 0-3 1-2")
    assert basis_diagram("y") == ChordDiagram.parse("k=2; 0-1 2-3")
    assert euler_class(basis_diagram("x")) == -1


@given(st.text(alphabet="xy", max_size=6))
def test_basis_constructions_agree(w):
    d = basis_diagram(w)
    assert d == basis_diagram_by_prepending(w)
    assert euler_class(d) == charge(w)


@given(diagram, diagram)
def test_juxtapose_multiplies(d1, d2):
    if d1.num_chords + d2.num_chords - 1 > 6:
        return
    d = juxtapose(d1, d2)
    assert euler_class(d) == euler_class(d1) + euler_class(d2)
    got = suture_element(d)
    want = LaxElement(multiply(suture_element(d1).value, suture_element(d2).value))
    assert got == want


@given(diagram)
def test_euler_is_charge(d):
    el = solve_table(d.num_chords).entries[d]
    assert {charge(w) for w in el} == {euler_class(d)}


@given(diagram)
def test_bypass_triples_sum_to_zero(d):
    t = solve_table(d.num_chords)
    for tr in bypass_triples(d):
        a, b, c = (t.entries[x] for x in tr.diagrams)
        assert any((a + b.scale(s) + c.scale(r)).is_zero() for s in (1, -1) for r in (1, -1))
        assert bypass_surgery(d, tr.arc_witness) in tr.diagrams


def test_tables_validate():
    for k in range(1, 7):
        assert solve_table(k).validate() == []


def test_table_sizes():
    assert [len(solve_table(k).entries) for k in range(1, 8)] == [1, 2, 5, 14, 42, 132, 429]


def test_loops_kill():
    d = ChordDiagram.parse("k=2; 0-1 2-3; loops=1")
    assert suture_element(d).is_zero


def test_basis_elements_are_words():
    for w in words(4):
        assert suture_element(basis_diagram(w)) == LaxElement(FockElement.word(w))


def test_menagerie():
    d = solve_table(5).by_pair()[("xyxy", "yxyx")]
    assert suture_element(d) == LaxElement(FockElement.parse("xyxy-xyyx-yxxy+yxyx"))
