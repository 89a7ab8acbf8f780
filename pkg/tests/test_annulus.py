import pytest
from hypothesis import given, strategies as st

from sutured import annulus as ann
from sutured.chord import InvalidDiagram, basis_diagram, enumerate_diagrams, solve_table
from sutured.fock import LaxElement, words


def test_rectangle_layout_shapes():
    lay = ann.rectangle_layout(3)
    assert lay.top == (0, 1) and lay.bottom == (6, 5)
    assert lay.right == (2, 3, 4) and lay.left == (9, 8, 7)
    with pytest.raises(ValueError):
        ann.rectangle_layout(0)


def test_glue_mismatch():
    with pytest.raises(InvalidDiagram):
        ann.glue_rectangle(basis_diagram("xy"), 3)


@pytest.mark.parametrize("w, kind", [("xx", "BpNeg"), ("yy", "BpPos"), ("xy", "SlopeArcs"), ("yx", "LoopPlusBp")])
def test_phi1_normal_forms(w, kind):
    assert ann.normalize(ann.glue_rectangle(basis_diagram(w), 1)).kind == kind


def test_slope_arc_indices():
    assert ann.normalize(ann.glue_rectangle(basis_diagram("xy"), 1)).n == 0
    pair = solve_table(3).by_pair()[("xy", "yx")]
    assert ann.normalize(ann.glue_rectangle(pair, 1)).n == -1
    assert ann.normalize(ann.glue_rectangle(basis_diagram("xyxy"), 3)).n == 1


@given(st.integers(-6, 6))
def test_dehn_twist_steps_slope(k):
    base = ann.glue_rectangle(basis_diagram("xy"), 1)
    assert ann.normalize(ann.dehn_twist(base, k)) == ann.AnnulusNormalForm("SlopeArcs", -k)
    assert ann.dehn_twist(ann.dehn_twist(base, k), -k) == base


def test_every_glued_diagram_is_valid():
    for i in (1, 2, 3):
        for d in enumerate_diagrams(i + 2):
            c = ann.glue_rectangle(d, i)
            assert c.euler % 2 == 0


def test_torsion_evaluates_to_zero():
    for d in enumerate_diagrams(5):
        c = ann.glue_rectangle(d, 3)
        if c.essential_loops >= 2:
            assert ann.normalize(c).kind in ("Torsion", "HasContractible")
            assert ann.evaluate(ann.normalize(c)).is_zero
            assert ann.is_isolating_annulus(c)


def test_upsilon_is_unique_collar():
    ups = ann.upsilon_curves()
    assert ups.arcs == (("B0", "B1", 0), ("T0", "T1", -1))
    assert ups.euler == -2
    assert len(ann.search_upsilon()) == 1


def test_lemmas_left():
    lines = ann.derive_lemmas("left").identities
    for want in (
        "PHI[3](xxyy) = PHI[1](xy)",
        "PHI[3](xyyx) = PHI[1](yx)",
        "PHI[3](yxxy) = PHI[1](yx)",
        "PHI[3](yyxx) = PHI[1](yx)",
        "PHI[3](xyxy) = PHI[1](xy+yx)",
        "PHI[3](yxyx) = 0",
        "XI PHI[1](xy) = ±1",
        "XI PHI[1](yx) = 0",
        "XI PHI[3](xxyy-xyxy) = 0",
        "PHI[2](yxy) = 0",
    ):
        assert want in lines


def test_lemmas_right():
    lines = ann.derive_lemmas("right").identities
    assert "PHI[3](yxyx) = PHI[1](xy+yx)" in lines
    assert "PHI[3](xyxy) = 0" in lines


def test_phi2_kernel():
    assert ann.phi2_kills("yxy")
    assert not ann.phi2_kills("xyy")
    k = ann.derive_phi2(full=True)
    assert all(f == 1 for f in k.invariant_factors)


def test_full_phi3_extends_stage_one():
    stage1 = ann.derive_phi3("left")
    full = ann.derive_phi3("left", torsion_vanishes=True)
    for w in words(4, 0):
        assert full.column(w) == stage1.column(w)
    assert set(full.columns) == set(words(4))


def test_theta():
    assert ann.theta_matrix() == ((1, 0), (-1, 1))


def test_classification_matches_derived_maps():
    assert ann.verify_annulus_classification(10) == []


def test_evaluate_coordinates():
    assert ann.evaluate(ann.AnnulusNormalForm("SlopeArcs", 3)) == LaxElement((0, 1, 3, 0))
    assert ann.evaluate(ann.AnnulusNormalForm("LoopPlusBp")) == LaxElement((0, 0, 1, 0))
