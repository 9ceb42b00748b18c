from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

from app.lib.exceptions import GraphStructureError
from app.models.coxeter import WeylElement
from app.models.ring import LatticeVector

Matrix = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class Vertex:
    id: str
    length: int
    element: Optional[WeylElement] = field(default=None, compare=False)


@dataclass(frozen=True)
class Edge:
    tail: str
    head: str
    label: LatticeVector

    @property
    def key(self) -> tuple[str, str]:
        return (self.tail, self.head)


class MomentGraph:
    """Finite moment graph: vertices with a partial order, oriented labelled edges tail -> head.

    The order is stored transitively closed. It is generated by the edges plus
    any extra relations passed in `order`.
    """

    def __init__(self, rank: int, vertices: Iterable[Vertex], edges: Iterable[Edge],
                 order: Iterable[tuple[str, str]] = ()):
        self.rank = rank
        self.vertices: tuple[Vertex, ...] = tuple(sorted(vertices, key=lambda v: (v.length, v.id)))
        self._by_id = {v.id: v for v in self.vertices}
        if len(self._by_id) != len(self.vertices):
            raise GraphStructureError("duplicate vertex ids")
        edges = list(edges)
        unknown = sorted({v for e in edges for v in e.key if v not in self._by_id})
        if unknown:
            raise GraphStructureError(f"edges reference unknown vertices {unknown}")
        self.edges: tuple[Edge, ...] = tuple(
            sorted(edges, key=lambda e: (self._sort_key(e.tail), self._sort_key(e.head)))
        )
        self._check_edges()
        self._above = self._close(order)
        self._edge_index = {frozenset(e.key): e for e in self.edges}
        self._up: dict[str, list[Edge]] = {v.id: [] for v in self.vertices}
        self._down: dict[str, list[Edge]] = {v.id: [] for v in self.vertices}
        for e in self.edges:
            self._up[e.tail].append(e)
            self._down[e.head].append(e)

    def _check_edges(self) -> None:
        seen = set()
        for e in self.edges:
            if e.tail == e.head:
                raise GraphStructureError(f"loop at vertex {e.tail!r}")
            if len(e.label) != self.rank or not any(e.label):
                raise GraphStructureError(f"edge {e.key} has a zero or malformed label {e.label}")
            pair = frozenset(e.key)
            if pair in seen:
                raise GraphStructureError(f"multiple edges between {e.tail!r} and {e.head!r}")
            seen.add(pair)

    def _close(self, order: Iterable[tuple[str, str]]) -> dict[str, frozenset[str]]:
        succ: dict[str, set[str]] = {v.id: set() for v in self.vertices}
        for e in self.edges:
            succ[e.tail].add(e.head)
        for a, b in order:
            if a not in succ or b not in succ:
                raise GraphStructureError(f"order relation ({a!r}, {b!r}) references unknown vertices")
            if a != b:
                succ[a].add(b)
        above: dict[str, frozenset[str]] = {}
        for v in reversed(self.vertices):
            closure, stack = set(), list(succ[v.id])
            while stack:
                u = stack.pop()
                if u in closure:
                    continue
                if u == v.id:
                    raise GraphStructureError(f"directed cycle through {v.id!r}")
                closure.add(u)
                stack.extend(succ[u])
            for u in closure:
                if self._by_id[u].length <= v.length:
                    raise GraphStructureError(
                        f"order {v.id!r} < {u!r} is not compatible with vertex lengths"
                    )
            above[v.id] = frozenset(closure)
        return above

    def __contains__(self, vertex_id: str) -> bool:
        return vertex_id in self._by_id

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def ids(self) -> list[str]:
        return [v.id for v in self.vertices]

    def vertex(self, vertex_id: str) -> Vertex:
        try:
            return self._by_id[vertex_id]
        except KeyError:
            raise GraphStructureError(f"unknown vertex {vertex_id!r}") from None

    def leq(self, a: str, b: str) -> bool:
        return a == b or b in self._above[a]

    def lt(self, a: str, b: str) -> bool:
        return b in self._above[a]

    def above(self, vertex_id: str) -> frozenset[str]:
        """Vertices strictly above `vertex_id`."""
        return self._above[vertex_id]

    def order_pairs(self) -> list[tuple[str, str]]:
        return [(v.id, u) for v in self.vertices for u in sorted(self._above[v.id], key=self._sort_key)]

    def _sort_key(self, vertex_id: str) -> tuple[int, str]:
        v = self._by_id[vertex_id]
        return (v.length, v.id)

    def up_edges(self, vertex_id: str) -> list[Edge]:
        return self._up[vertex_id]

    def down_edges(self, vertex_id: str) -> list[Edge]:
        return self._down[vertex_id]

    def incident_edges(self, vertex_id: str) -> list[Edge]:
        return self._down[vertex_id] + self._up[vertex_id]

    def edge_between(self, a: str, b: str) -> Optional[Edge]:
        return self._edge_index.get(frozenset((a, b)))

    def maximal_vertices(self) -> list[str]:
        return [v.id for v in self.vertices if not self._above[v.id]]

    def processing_order(self) -> list[str]:
        """Decreasing length, ties by id."""
        return [v.id for v in sorted(self.vertices, key=lambda v: (-v.length, v.id))]


@dataclass(frozen=True)
class MGMorphism:
    """Vertex map plus lattice automorphisms f_{l,x} (matrices acting on coroot columns)."""

    source: MomentGraph
    target: MomentGraph
    vertex_map: Mapping[str, str]
    lattice_autos: Mapping[str, Matrix]
