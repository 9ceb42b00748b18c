import pytest

from app.lib.exceptions import GraphStructureError, LabelVanishesError, PreconditionError
from app.models.kl import QPolynomial
from app.models.moment_graph import Edge, MomentGraph, Vertex
from app.models.ring import Polynomial
from app.models.sheaf import EdgeModulePresentation, RestrictionMatrix, SheafData, StalkPresentation
from app.ops.bmp import (
    bmp_sheaf,
    build_bmp,
    degree_windows,
    gamma_divisibility_check,
    gamma_interval,
    graded_rank,
    hilbert_divisible,
    verify_axioms,
)
from app.ops.graph import bruhat_graph, restrict
from app.ops.kl import kl
from app.ops.sheaf import hilbert_series, is_flabby

def _mutant(sheaf, x, extra):
    """Copy of `sheaf` with a superfluous generator of degree `extra` at x."""
    field, n = sheaf.field, sheaf.graph.rank
    zero = Polynomial.zero(field, n)
    stalks = dict(sheaf.stalks)
    stalks[x] = StalkPresentation(tuple(sorted(sheaf.stalks[x].generator_degrees + (extra,))))
    position = stalks[x].generator_degrees.index(extra)
    edge_modules = dict(sheaf.edge_modules)
    restrictions = dict(sheaf.restrictions)
    for e in sheaf.graph.down_edges(x):
        edge_modules[e.key] = EdgeModulePresentation(x, stalks[x].generator_degrees, e.label)
        rows = list(sheaf.restrictions[e.key].entries)
        rows.insert(position, tuple(zero for _ in rows[0]))
        restrictions[e.key] = RestrictionMatrix(e.tail, e.key, tuple(rows))
    for e in sheaf.graph.up_edges(x):
        rows = [list(row) for row in sheaf.restrictions[e.key].entries]
        for row in rows:
            row.insert(position, zero)
        restrictions[e.key] = RestrictionMatrix(x, e.key, tuple(tuple(row) for row in rows))
    return SheafData(sheaf.graph, field, stalks, edge_modules, restrictions)

def test_single_vertex(qq):
    """Test that a one-point graph carries the free stalk"""
    graph = MomentGraph(2, [Vertex("", 0)], [])
    sheaf = build_bmp(graph, qq)
    assert sheaf.stalks[""] == StalkPresentation((0,))
    assert sheaf.converged[""]
    assert verify_axioms(sheaf).passed

def test_degree_windows(a2):
    """Test for the per-vertex degree windows"""
    graph = bruhat_graph(a2)
    assert degree_windows(graph, "121") == {"": 6, "1": 4, "2": 4, "12": 4, "21": 4, "121": 2}
    assert degree_windows(graph, "121", 1)["121"] == 4

def test_needs_unique_top(a2, qq):
    """Test that two maximal vertices are refused"""
    graph = restrict(bruhat_graph(a2), ["", "1", "2"])
    with pytest.raises(GraphStructureError):
        build_bmp(graph, qq)

def test_vanishing_label(f3):
    """Test that a label divisible by p is refused"""
    graph = MomentGraph(1, [Vertex("", 0), Vertex("1", 1)], [Edge("", "1", (3,))])
    with pytest.raises(LabelVanishesError):
        build_bmp(graph, f3)

def test_smooth_a2(a2, a2_w0_sheaf):
    """Test that every stalk below the longest element of A2 is free of rank one"""
    for y in a2_w0_sheaf.graph.ids:
        assert graded_rank(a2_w0_sheaf, y) == QPolynomial.one()
        assert a2_w0_sheaf.converged[y]
    assert a2_w0_sheaf.top == "121"
    with pytest.raises(PreconditionError):
        graded_rank(a2_w0_sheaf, "3")

def test_singular_a3(a3_2132_sheaf):
    """Test the stalk at s2 below s2s1s3s2"""
    assert a3_2132_sheaf.stalks["2"].generator_degrees == (0, 2)
    assert a3_2132_sheaf.stalks[""].generator_degrees == (0, 2)
    assert graded_rank(a3_2132_sheaf, "2") == QPolynomial((1, 1))
    assert graded_rank(a3_2132_sheaf, "21") == QPolynomial.one()

def test_axioms_hold(a2_w0_sheaf, a3_2132_sheaf):
    """Test that the constructed sheaves pass the axiom checker"""
    assert verify_axioms(a2_w0_sheaf).passed
    report = verify_axioms(a3_2132_sheaf)
    assert report.passed, report.failures
    assert report.degree_cap == 6

def test_superfluous_generator_is_caught(a2_w0_sheaf):
    """Test that an extra generator fails minimality at its vertex and degree"""
    report = verify_axioms(_mutant(a2_w0_sheaf, "1", 2))
    assert not report.passed
    assert any(f.axiom == "iii" and f.vertex == "1" and f.degree == 2 for f in report.failures)

def test_wrong_top_stalk(a2_w0_sheaf):
    """Test that the top stalk must be free of rank one in degree 0"""
    report = verify_axioms(_mutant(a2_w0_sheaf, "121", 2))
    assert not report.passed
    assert report.failures[0].axiom == "i"

def test_bmp_is_flabby(a3_2132_sheaf):
    """Test flabbiness of a singular canonical sheaf"""
    assert is_flabby(a3_2132_sheaf, 4).flabby

@pytest.mark.parametrize("word", ["2132", "12321", "1232", "123"])
def test_ranks_match_kl_over_q(a3, qq, word):
    """Test graded ranks of stalks against P_{y,w}"""
    w = a3.element(word)
    sheaf = bmp_sheaf(a3, w, qq)
    for y in a3.lower_interval(w):
        assert graded_rank(sheaf, a3.word(y)) == kl(a3, y, w)

def test_ranks_in_characteristic_five(a3, f5):
    """Test that F5 gives the same ranks in type A3"""
    w = a3.element("2132")
    sheaf = bmp_sheaf(a3, w, f5)
    for y in a3.lower_interval(w):
        assert graded_rank(sheaf, a3.word(y)) == kl(a3, y, w)

def test_parabolic_sheaf(a3, qq):
    """Test the canonical sheaf on W^J against the regular one"""
    J = frozenset({1, 3})
    w = a3.element("2132")
    sheaf = bmp_sheaf(a3, w, qq, J)
    regular = bmp_sheaf(a3, w * a3.longest_in(J), qq)
    w_J = a3.longest_in(J)
    for y in sheaf.graph.ids:
        assert graded_rank(sheaf, y) == graded_rank(regular, a3.word(a3.element(y) * w_J))

def test_gamma_interval(a2):
    """Test for [ys, w] without ys and y"""
    words = gamma_interval(a2, a2.s(1), a2.longest_element, a2.s(1))
    assert words == ["2", "12", "21", "121"]
    assert gamma_interval(a2, a2.s(1), a2.s(1), a2.s(1)) == []
    with pytest.raises(PreconditionError):
        gamma_interval(a2, a2.s(2), a2.longest_element, a2.s(1))

def test_gamma_divisibility(a2, a2_w0_sheaf):
    """Test that Hilbert series over the punctured interval are divisible by 1+q"""
    s1 = a2.s(1)
    assert gamma_divisibility_check(a2_w0_sheaf, a2, s1, a2.longest_element, s1)
    assert gamma_divisibility_check(a2_w0_sheaf, a2, s1, s1, s1)

def test_gamma_divisibility_defaults_to_the_degree_cap(a2, a2_w0_sheaf):
    """Test that the series is taken up to the sheaf's own degree cap"""
    s1, w0 = a2.s(1), a2.longest_element
    series = hilbert_series(a2_w0_sheaf, gamma_interval(a2, s1, w0, s1), a2_w0_sheaf.degree_cap)
    assert len(series) == a2_w0_sheaf.degree_cap // 2 + 1
    assert gamma_divisibility_check(a2_w0_sheaf, a2, s1, w0, s1) == hilbert_divisible(series)

def test_hilbert_divisible():
    """Test the coefficient criterion for H = (1+q) G"""
    assert hilbert_divisible([1, 3, 5])
    assert hilbert_divisible([1, 1, 1, 1])
    assert not hilbert_divisible([1, 0])
    assert not hilbert_divisible([2, 1, 2])
