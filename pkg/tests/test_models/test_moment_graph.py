import pytest

from app.lib.exceptions import GraphStructureError
from app.models.moment_graph import Edge, MomentGraph, Vertex

def _vertices():
    return [Vertex("a", 0), Vertex("b", 1), Vertex("c", 1), Vertex("d", 2)]

def test_order_is_closed():
    """Test that the order is the transitive closure of the edges"""
    graph = MomentGraph(2, _vertices(), [Edge("a", "b", (1, 0)), Edge("b", "d", (0, 1))])
    assert graph.leq("a", "d")
    assert graph.lt("a", "b")
    assert not graph.leq("c", "d")
    assert graph.above("a") == frozenset({"b", "d"})
    assert graph.maximal_vertices() == ["c", "d"]

def test_processing_order():
    """Test for decreasing length with ties by id"""
    graph = MomentGraph(2, _vertices(), [])
    assert graph.processing_order() == ["d", "b", "c", "a"]

def test_extra_order_relations():
    """Test that order pairs may be added without edges"""
    graph = MomentGraph(2, _vertices(), [], order=[("a", "c")])
    assert graph.lt("a", "c")
    assert graph.edge_between("a", "c") is None

def test_loop_is_rejected():
    """Test for a loop edge"""
    with pytest.raises(GraphStructureError):
        MomentGraph(2, _vertices(), [Edge("a", "a", (1, 0))])

def test_zero_label_is_rejected():
    """Test for a zero edge label"""
    with pytest.raises(GraphStructureError):
        MomentGraph(2, _vertices(), [Edge("a", "b", (0, 0))])

def test_multi_edge_is_rejected():
    """Test for two edges between the same vertices"""
    with pytest.raises(GraphStructureError):
        MomentGraph(2, _vertices(), [Edge("a", "b", (1, 0)), Edge("b", "a", (0, 1))])

def test_cycle_is_rejected():
    """Test for an order that goes against the lengths"""
    with pytest.raises(GraphStructureError):
        MomentGraph(2, _vertices(), [Edge("b", "a", (1, 0))])
    with pytest.raises(GraphStructureError):
        MomentGraph(2, _vertices(), [Edge("a", "b", (1, 0))], order=[("b", "a")])

def test_unknown_vertex():
    """Test for edges pointing outside the graph"""
    with pytest.raises(GraphStructureError):
        MomentGraph(2, _vertices(), [Edge("a", "z", (1, 0))])
    graph = MomentGraph(2, _vertices(), [])
    with pytest.raises(GraphStructureError):
        graph.vertex("z")
