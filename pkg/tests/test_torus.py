import pytest
from hypothesis import given, strategies as st

from sutured import torus as T
from sutured.chord import InvalidDiagram, basis_diagram, enumerate_diagrams, solve_table
from sutured.fock import LaxElement, words


def _pair():
    return solve_table(3).by_pair()[("xy", "yx")]


@pytest.mark.parametrize("w, want", [("xy", "Slope(0,1)"), ("yx", "Slope(1,0)"), ("xx", "BpArc(-)"), ("yy", "BpArc(+)")])
def test_basic_octagon_classes(w, want):
    assert str(T.glue_octagon(basis_diagram(w), T.OCTAGONS[(1, 1)])) == want


def test_pair_diagram_slope():
    assert str(T.glue_octagon(_pair(), T.OCTAGONS[(1, 1)])) == "Slope(-1,1)"


def test_lax_pair_canonical():
    assert T.lax_pair(1, -1) == (-1, 1)
    assert T.lax_pair(-2, 0) == (2, 0)
    assert T.lax_pair(3, 5) == (3, 5)


def test_slope_class_rejects_nonprimitive():
    with pytest.raises(ValueError):
        T.slope_class(2, 4)


def test_octagon_sizes():
    for (i, j), bg in T.OCTAGONS.items():
        assert bg.num_points == 2 * (i + j + 1)


def test_gluing_orders_agree():
    assert T.verify_gluing_orders() == []


def test_every_octagon_gluing_classifies():
    kinds = set()
    for ij, bg in T.OCTAGONS.items():
        for d in enumerate_diagrams(bg.num_points // 2):
            kinds.add(T.glue_octagon(d, bg).kind)
    assert kinds == set(T.CLASS_KINDS)


def test_sign_scheme_squares_commute():
    s = T.solve_sign_scheme()
    for ij in T.OCTAGONS:
        assert s.square(ij) == []
    # guard against an empty word list making the check vacuous
    assert [len(words(i + j, 0)) for i, j in T.OCTAGONS] == [2, 6, 6, 20]


def test_coherence_chase_consistent():
    lines = T.coherence_chase()
    assert lines and not any("FAIL" in l for l in lines)


def test_boundary_parallel_vanishes():
    r = T.derive_thm52()
    assert r.ok
    assert all(not any(v) for v in r.values.values())


def test_isolating_classes_vanish():
    for kind in ("HasContractible", "MultiLoopTorsion", "BpArcPlusBpLoop"):
        s = T.TorusSutureClass(kind, 0)
        assert T.is_isolating(s)
        assert T.element_T1(s).is_zero


def test_octagon_elements_match_classes():
    for ij, bg in T.OCTAGONS.items():
        for d in enumerate_diagrams(bg.num_points // 2):
            s = T.glue_octagon(d, bg)
            assert T.octagon_element(d, ij) == T.element_T1(s), (ij, d)


def test_element_examples():
    assert T.element_T1(T.slope_class(1, 0)) == LaxElement((0, 1, 0, 0))
    assert T.element_T1(T.slope_class(0, 1)) == LaxElement((0, 0, 1, 0))
    assert T.element_T1(T.slope_class(-1, 1)) == LaxElement((0, 1, -1, 0))
    assert T.element_T1(T.TorusSutureClass("BpArc", -2, -1)) == LaxElement((1, 0, 0, 0))
    assert T.element_T1(T.TorusSutureClass("BpArc", 2, 1)) == LaxElement((0, 0, 0, 1))


def test_farey_propagation_is_identity():
    table = T.farey_propagate(20)
    assert len(table) == len(T.primitive_vectors(20))
    assert all(T.lax_pair(*v) == k for k, v in table.items())


@given(st.integers(-30, 30), st.integers(-30, 30))
def test_primitive_slopes_primitive_elements(p, q):
    import math
    if math.gcd(p, q) != 1:
        return
    el = T.element_T1(T.slope_class(p, q))
    assert el.is_primitive()


@given(st.integers(-20, 20), st.integers(-20, 20))
def test_extend_to_sl2(p, q):
    import math
    if math.gcd(p, q) != 1:
        return
    m = T._extend_to_sl2(p, q)
    assert (m[0][0], m[1][0]) == (p, q)
    assert m[0][0] * m[1][1] - m[0][1] * m[1][0] == 1


_GENS = (((1, 1), (0, 1)), ((1, 0), (1, 1)), ((0, -1), (1, 0)))


def _mul(m, n):
    return tuple(tuple(sum(m[r][k] * n[k][c] for k in range(2)) for c in range(2)) for r in range(2))


@given(st.lists(st.sampled_from(_GENS), max_size=8))
def test_superbases_of_sl2_bases(gens):
    m = ((1, 0), (0, 1))
    for g in gens:
        m = _mul(m, g)
    u, v = (m[0][0], m[1][0]), (m[0][1], m[1][1])
    assert T.is_lax_basis(u, v)
    for sb in T.superbases(u, v):
        assert T.is_lax_superbasis(*sb)
        cu, cv, cw = (T.element_T1(T.slope_class(*x)).value[1:3] for x in sb)
        assert T.is_lax_superbasis(cu, cv, cw)


def test_not_superbasis():
    assert not T.is_lax_superbasis((1, 0), (0, 1), (2, 1))
    assert not T.is_lax_basis((2, 0), (0, 1))


def test_boundary_twist_invariance():
    r = T.verify_lemma55(bound=6)
    assert r.ok and r.realized and r.transported > 0


def test_boundary_twist_only_moves_slopes():
    s = T.TorusSutureClass("BpArc", 2, 1)
    assert T.boundary_dehn_twist(s) == s
    g = T.boundary_dehn_twist(T.slope_class(2, 3), 4)
    assert g.boundary_twists == 4 and g.slope == (2, 3)


def test_superbasis_triples():
    total = 0
    for ij in T.OCTAGONS:
        n, problems = T.verify_superbasis_triples(ij)
        assert problems == []
        total += n
    assert total > 0


def test_euler_shift_errors():
    from sutured.gluing import SidePairing, glued_euler_shift
    with pytest.raises(ValueError):
        glued_euler_shift(6, [SidePairing("a", (), ())])
