import pytest

from app.lib.exceptions import InvalidMorphismError, PreconditionError
from app.models.moment_graph import Edge, MGMorphism, MomentGraph, Vertex
from app.models.ring import Polynomial
from app.models.sheaf import (
    EdgeModulePresentation,
    RestrictionMatrix,
    SheafData,
    StalkPresentation,
    StructureAlgebraElement,
)
from app.ops.bmp import bmp_sheaf
from app.ops.graph import (
    bruhat_graph,
    compose,
    identity_morphism,
    inverse_automorphism,
    restrict_morphism,
    right_mult_isomorphism,
)
from app.ops.sheaf import (
    act,
    constant_element,
    cs_element,
    hilbert_series,
    is_flabby,
    is_section,
    is_structure_element,
    pullback,
    restrict_sheaf,
    restriction_surjective,
    same_sheaf_data,
    section_constraint_matrix,
    sections_slice,
    sheaf_from_json,
    sheaf_to_json,
    structure_sheaf,
)
from tests.oracles import dense_rank

def _point_sheaf(field, degrees):
    graph = MomentGraph(2, [Vertex("", 0)], [])
    return SheafData(graph, field, {"": StalkPresentation(degrees)}, {}, {})

def _zero_bottom_sheaf(field):
    """Zero stalk at e below a free stalk at s1 on the A1 graph."""
    graph = MomentGraph(1, [Vertex("", 0), Vertex("1", 1)], [Edge("", "1", (1,))])
    return SheafData(
        graph, field,
        {"": StalkPresentation(()), "1": StalkPresentation((0,))},
        {("", "1"): EdgeModulePresentation("1", (0,), (1,))},
        {("", "1"): RestrictionMatrix("", ("", "1"), ((),))},
    )

def test_hilbert_series_of_a_point(qq):
    """Test for the graded dimensions of one free stalk"""
    assert hilbert_series(_point_sheaf(qq, (0,)), [""], 4) == [1, 2, 3]
    assert hilbert_series(_point_sheaf(qq, (0, 2)), [""], 4) == [1, 3, 5]

@pytest.mark.parametrize("d", [0, 2, 4])
def test_sections_against_dense_kernel(a2, qq, f3, d):
    """Test the incremental section dimension against the full constraint system"""
    for field in (qq, f3):
        sheaf = structure_sheaf(bruhat_graph(a2), field)
        ids = sheaf.graph.ids
        unknowns, rows = section_constraint_matrix(sheaf, ids, d)
        slice_ = sections_slice(sheaf, ids, d)
        if field == qq:
            assert slice_.dimension == len(unknowns) - dense_rank(rows, len(unknowns))
        for section in slice_.basis:
            assert is_section(sheaf, section, d)

def test_bmp_sections_against_dense_kernel(a3_2132_sheaf):
    """Test section dimensions of a singular sheaf against the dense kernel"""
    ids = a3_2132_sheaf.graph.ids
    for d in (0, 2):
        unknowns, rows = section_constraint_matrix(a3_2132_sheaf, ids, d)
        expected = len(unknowns) - dense_rank(rows, len(unknowns))
        assert sections_slice(a3_2132_sheaf, ids, d).dimension == expected

def test_sections_need_even_degree(a2, qq):
    """Test that odd degrees are refused"""
    with pytest.raises(PreconditionError):
        sections_slice(structure_sheaf(bruhat_graph(a2), qq), ["", "1"], 3)

def test_cs_element(a2, qq):
    """Test for the components x(coroot_s) of c_s"""
    graph = bruhat_graph(a2)
    x1, x2 = Polynomial.variable(qq, 2, 0), Polynomial.variable(qq, 2, 1)
    c1 = cs_element(a2, a2.s(1), graph, qq)
    assert c1.components[""] == x1
    assert c1.components["1"] == -x1
    assert c1.components["2"] == x1 + x2
    assert c1.degree() == 2
    with pytest.raises(PreconditionError):
        cs_element(a2, a2.element("12"), graph, qq)

def test_is_structure_element(a2, qq):
    """Test that edge congruences decide membership"""
    graph = bruhat_graph(a2)
    x1 = Polynomial.variable(qq, 2, 0)
    assert is_structure_element(constant_element(graph, qq, 3), graph, qq)
    bad = StructureAlgebraElement({"": x1, "2": Polynomial.zero(qq, 2)})
    assert not is_structure_element(bad, graph, qq)

def test_act_keeps_sections(a2, qq):
    """Test that Z acts on global sections"""
    sheaf = structure_sheaf(bruhat_graph(a2), qq)
    c2 = cs_element(a2, a2.s(2), sheaf.graph, qq)
    for section in sections_slice(sheaf, sheaf.graph.ids, 2).basis:
        image = act(c2, section, sheaf, 2)
        assert is_section(sheaf, image, 4)
    one = constant_element(sheaf.graph, qq)
    section = sections_slice(sheaf, sheaf.graph.ids, 0).basis[0]
    assert act(one, section, sheaf, 0) == section

def test_structure_sheaf_is_flabby_for_smooth_graph(a2, qq):
    """Test flabbiness of the structure sheaf on the A2 Bruhat graph"""
    sheaf = structure_sheaf(bruhat_graph(a2), qq)
    assert is_flabby(sheaf, 4).flabby
    for x in sheaf.graph.ids:
        assert restriction_surjective(sheaf, x, 2)

def test_zero_stalk_breaks_flabbiness(qq):
    """Test the witness for a sheaf that is not flabby"""
    sheaf = _zero_bottom_sheaf(qq)
    report = is_flabby(sheaf, 2)
    assert not report.flabby
    assert report.witness_vertex == ""
    assert report.witness_degree == 0
    assert not restriction_surjective(sheaf, "", 0)

def test_pullback_along_identity(a2_w0_sheaf):
    """Test that pulling back along the identity changes nothing"""
    f = identity_morphism(a2_w0_sheaf.graph)
    assert same_sheaf_data(pullback(f, a2_w0_sheaf), a2_w0_sheaf)

def test_pullback_along_inverse(a2, a2_w0_sheaf):
    """Test that the inverse map preserves stalks and section dimensions"""
    f = inverse_automorphism(a2, a2_w0_sheaf.graph)
    pulled = pullback(f, a2_w0_sheaf)
    for v in pulled.graph.ids:
        assert pulled.stalks[v] == a2_w0_sheaf.stalks[f.vertex_map[v]]
    ids = pulled.graph.ids
    assert hilbert_series(pulled, ids, 4) == hilbert_series(a2_w0_sheaf, ids, 4)

def test_pullback_along_invalid_morphism(a2_w0_sheaf):
    """Test that an invalid morphism is refused with its violations"""
    graph = a2_w0_sheaf.graph
    f = identity_morphism(graph)
    autos = dict(f.lattice_autos)
    autos["1"] = ((1, 1), (1, 1))
    with pytest.raises(InvalidMorphismError) as exc:
        pullback(MGMorphism(graph, graph, f.vertex_map, autos), a2_w0_sheaf)
    assert exc.value.violations

def test_sheaf_json_round_trip(a3_2132_sheaf, qq, f3):
    """Test that the JSON document rebuilds the same presentation"""
    text = sheaf_to_json(a3_2132_sheaf)
    assert same_sheaf_data(sheaf_from_json(text, qq), a3_2132_sheaf)
    with pytest.raises(PreconditionError):
        sheaf_from_json(text, f3)

def test_pullback_along_a_composite(a2, qq):
    """Test that pulling back along g after f is pulling back along g, then along f"""
    f = right_mult_isomorphism(a2, a2.element("21"), a2.longest_element, a2.s(1))
    g = restrict_morphism(inverse_automorphism(a2), f.target.ids)
    target = restrict_sheaf(bmp_sheaf(a2, a2.element("21"), qq), g.target.ids)
    assert sorted(g.target.ids) == ["2", "21"]
    composite = pullback(compose(f, g), target)
    stepwise = pullback(f, pullback(g, target))
    assert same_sheaf_data(composite, stepwise)
    assert composite.stalks == restrict_sheaf(bmp_sheaf(a2, a2.longest_element, qq), f.source.ids).stalks

def _collapse_onto_a_point(qq, tail_auto, head_auto):
    source = MomentGraph(1, [Vertex("", 0), Vertex("1", 1)], [Edge("", "1", (1,))])
    target = MomentGraph(1, [Vertex("", 0)], [])
    f = MGMorphism(source, target, {"": "", "1": ""}, {"": tail_auto, "1": head_auto})
    return f, SheafData(target, qq, {"": StalkPresentation((0,))}, {}, {})

def test_pullback_along_a_collapsed_edge(qq):
    """Test that a collapsed edge gets the canonical quotient of the common stalk"""
    f, point = _collapse_onto_a_point(qq, ((1,),), ((1,),))
    pulled = pullback(f, point)
    assert pulled.stalks == {"": StalkPresentation((0,)), "1": StalkPresentation((0,))}
    assert pulled.restrictions[("", "1")].entries == ((Polynomial.constant(qq, 1),),)

def test_pullback_refuses_a_twisted_collapsed_edge(qq):
    """Test that different automorphisms at the ends of a collapsed edge are refused"""
    f, point = _collapse_onto_a_point(qq, ((1,),), ((-1,),))
    with pytest.raises(InvalidMorphismError) as exc:
        pullback(f, point)
    assert exc.value.violations == ["collapsed edge ('', '1')"]
