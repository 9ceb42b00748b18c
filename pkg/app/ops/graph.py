import logging
from functools import lru_cache
from typing import Iterable, Mapping

from app.lib.exceptions import AmbiguousEdgeLabelError, PreconditionError
from app.lib.linalg import is_invertible
from app.models.coxeter import WeylElement
from app.models.moment_graph import Edge, Matrix, MGMorphism, MomentGraph, Vertex
from app.models.ring import CoefficientField, LatticeVector, RationalField
from app.ops.coxeter import WeylGroup
from app.schemas.graph import EdgeItem, GraphDocument, VertexItem
from app.schemas.report import GKMReport, GKMViolation, MorphismReport

logger = logging.getLogger(__name__)


def _proportional(field: CoefficientField, a: LatticeVector, b: LatticeVector) -> bool:
    """True when a and b are linearly dependent over `field` (all 2x2 minors vanish)."""
    n = len(a)
    return all(
        field.is_zero(field(a[i] * b[j] - a[j] * b[i]))
        for i in range(n) for j in range(i + 1, n)
    )


def bruhat_graph(group: WeylGroup, J: Iterable[int] = ()) -> MomentGraph:
    return _bruhat_graph(group, frozenset(J))


@lru_cache(maxsize=None)
def _bruhat_graph(group: WeylGroup, J: frozenset[int]) -> MomentGraph:
    reps = group.min_coset_reps(J).min_reps
    labels: dict[tuple[str, str], LatticeVector] = {}
    for x in reps:
        for t in group.reflections:
            y = group.project_to_min_rep(t.element * x, J)
            if y == x or not group.bruhat_lt(x, y):
                continue
            key = (group.word(x), group.word(y))
            previous = labels.get(key)
            if previous is None:
                labels[key] = t.coroot
            elif not _proportional(RationalField(), previous, t.coroot):
                logger.warning(
                    "ambiguous parabolic edge label on %s -> %s: %s vs %s", key[0] or "e", key[1] or "e",
                    previous, t.coroot,
                )
                raise AmbiguousEdgeLabelError(
                    f"ambiguous parabolic edge label between {key[0] or 'e'} and {key[1] or 'e'}"
                )
    vertices = [Vertex(group.word(x), group.length(x), x) for x in reps]
    edges = [Edge(tail, head, label) for (tail, head), label in labels.items()]
    order = [
        (group.word(x), group.word(y))
        for x in reps for y in reps
        if group.bruhat_lt(x, y)
    ]
    graph = MomentGraph(group.rank, vertices, edges, order)
    logger.info(
        "Bruhat graph of %s with J=%s: %d vertices, %d edges",
        group.datum.type_label, sorted(J), len(graph.vertices), len(graph.edges),
    )
    return graph


def restrict(graph: MomentGraph, vertex_set: Iterable[str]) -> MomentGraph:
    keep = set(vertex_set)
    for v in keep:
        graph.vertex(v)
    vertices = [v for v in graph.vertices if v.id in keep]
    edges = [e for e in graph.edges if e.tail in keep and e.head in keep]
    order = [(a, b) for a, b in graph.order_pairs() if a in keep and b in keep]
    return MomentGraph(graph.rank, vertices, edges, order)


def lower_graph(group: WeylGroup, w: WeylElement, J: Iterable[int] = ()) -> MomentGraph:
    """The Bruhat graph of W^J restricted to {<= w}."""
    J = frozenset(J)
    full = bruhat_graph(group, J)
    word = group.word(w)
    if word not in full:
        raise PreconditionError(f"{word or 'e'} is not a minimal coset representative for J={sorted(J)}")
    return restrict(full, [v.id for v in full.vertices if full.leq(v.id, word)])


def interval_graph(group: WeylGroup, y: WeylElement, w: WeylElement) -> MomentGraph:
    return restrict(bruhat_graph(group), [group.word(x) for x in group.interval(y, w)])


def is_k_moment_graph(graph: MomentGraph, field: CoefficientField) -> bool:
    return all(any(not field.is_zero(field(v)) for v in e.label) for e in graph.edges)


def is_gkm_pair(graph: MomentGraph, field: CoefficientField) -> GKMReport:
    vanishing = [[e.tail, e.head] for e in graph.edges if all(field.is_zero(field(v)) for v in e.label)]
    violations = []
    for vertex in graph.vertices:
        incident = graph.incident_edges(vertex.id)
        for i, a in enumerate(incident):
            for b in incident[i + 1:]:
                if _proportional(field, a.label, b.label):
                    violations.append(
                        GKMViolation(vertex=vertex.id, edge_a=[a.tail, a.head], edge_b=[b.tail, b.head])
                    )
    return GKMReport(
        field=field.label,
        is_k_moment_graph=not vanishing,
        is_gkm=not vanishing and not violations,
        vanishing_labels=vanishing,
        violations=violations,
    )


def _apply(matrix: Matrix, vector: LatticeVector) -> LatticeVector:
    return tuple(sum(row[j] * vector[j] for j in range(len(vector))) for row in matrix)


def _unit_multiple(field: CoefficientField, v: LatticeVector, target: LatticeVector):
    """Return h with v == h * target in Y_k, or None."""
    values = [field(a) for a in v]
    reference = [field(a) for a in target]
    pivot = next((i for i, a in enumerate(reference) if not field.is_zero(a)), None)
    if pivot is None:
        return None
    h = field.normalize(values[pivot] * field.inv(reference[pivot]))
    if any(not field.is_zero(values[i] - h * reference[i]) for i in range(len(values))):
        return None
    return h


def validate_morphism(f: MGMorphism, source: MomentGraph | None = None, target: MomentGraph | None = None,
                      field: CoefficientField = RationalField(), isomorphism: bool = False) -> MorphismReport:
    source = source or f.source
    target = target or f.target
    violations: list[str] = []
    for v in source.vertices:
        image = f.vertex_map.get(v.id)
        if image is None or image not in target:
            violations.append(f"MORPH1: vertex {v.id!r} has no image in the target graph")
        auto = f.lattice_autos.get(v.id)
        if auto is None or len(auto) != source.rank or not is_invertible(field, auto):
            violations.append(f"MORPH2: lattice automorphism at {v.id!r} is missing or not invertible over {field}")
    if violations:
        return MorphismReport(valid=False, violations=violations)

    fv = f.vertex_map
    for a in source.ids:
        for b in source.above(a):
            if not target.leq(fv[a], fv[b]):
                violations.append(f"MORPH1: order {a!r} < {b!r} not preserved")
    for e in source.edges:
        u, w = fv[e.tail], fv[e.head]
        if u == w:
            continue
        image = target.edge_between(u, w)
        if image is None:
            violations.append(f"MORPH1: edge {e.key} maps to non-edge ({u!r}, {w!r})")
            continue
        for endpoint in (e.tail, e.head):
            h = _unit_multiple(field, _apply(f.lattice_autos[endpoint], e.label), image.label)
            if h is None or field.is_zero(h):
                violations.append(f"MORPH2a: label of {e.key} not carried to a unit multiple at {endpoint!r}")
        at_tail, at_head = f.lattice_autos[e.tail], f.lattice_autos[e.head]
        for i in range(source.rank):
            column = tuple(at_tail[k][i] - at_head[k][i] for k in range(source.rank))
            if any(column) and _unit_multiple(field, column, image.label) is None:
                violations.append(f"MORPH2b: automorphisms at {e.key} differ off the image label")
                break

    if isomorphism:
        images = [fv[v] for v in source.ids]
        if len(set(images)) != len(target.vertices) or len(images) != len(target.vertices):
            violations.append("ISO1: vertex map is not a bijection")
        else:
            inverse = {fv[v]: v for v in source.ids}
            for a in target.ids:
                for b in target.above(a):
                    if not source.lt(inverse[a], inverse[b]):
                        violations.append(f"ISO1: order {a!r} < {b!r} not reflected")
        for e in target.edges:
            preimages = [s for s in source.edges if fv[s.tail] == e.tail and fv[s.head] == e.head]
            if len(preimages) != 1:
                violations.append(f"ISO2: edge {e.key} has {len(preimages)} preimages")
    return MorphismReport(valid=not violations, violations=violations)


def _identity_matrix(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def identity_morphism(graph: MomentGraph) -> MGMorphism:
    eye = _identity_matrix(graph.rank)
    return MGMorphism(graph, graph, {v: v for v in graph.ids}, {v: eye for v in graph.ids})


def compose(f: MGMorphism, g: MGMorphism) -> MGMorphism:
    """g after f."""
    n = f.source.rank
    autos = {}
    for x in f.source.ids:
        a, b = g.lattice_autos[f.vertex_map[x]], f.lattice_autos[x]
        autos[x] = tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)) for i in range(n))
    return MGMorphism(f.source, g.target, {x: g.vertex_map[f.vertex_map[x]] for x in f.source.ids}, autos)


def restrict_morphism(f: MGMorphism, vertex_set: Iterable[str]) -> MGMorphism:
    keep = set(vertex_set)
    source = restrict(f.source, keep)
    target = restrict(f.target, {f.vertex_map[v] for v in keep})
    return MGMorphism(
        source, target,
        {v: f.vertex_map[v] for v in keep},
        {v: f.lattice_autos[v] for v in keep},
    )


def inverse_automorphism(group: WeylGroup, graph: MomentGraph | None = None) -> MGMorphism:
    """x -> x^{-1} with f_{l,x} the matrix of x^{-1}, on the full Bruhat graph."""
    graph = graph or bruhat_graph(group)
    if len(graph.vertices) != group.order:
        raise PreconditionError("inverse automorphism needs the full Bruhat graph (J empty)")
    vertex_map, autos = {}, {}
    for v in graph.vertices:
        inv = group.inverse(v.element)
        vertex_map[v.id] = group.word(inv)
        autos[v.id] = inv.as_tuple()
    return MGMorphism(graph, graph, vertex_map, autos)


def right_mult_isomorphism(group: WeylGroup, y: WeylElement, w: WeylElement, s: WeylElement) -> MGMorphism:
    """[y, w] -> [ys, ws], x -> xs, identity on labels."""
    group.simple_index(s)
    ws = w * s
    if not group.bruhat_leq(y, w):
        raise PreconditionError("right multiplication isomorphism needs y <= w")
    if not group.bruhat_lt(ws, w):
        raise PreconditionError("right multiplication isomorphism needs ws < w")
    if group.bruhat_leq(y, ws):
        raise PreconditionError("right multiplication isomorphism needs y not below ws")
    source = interval_graph(group, y, w)
    target = interval_graph(group, y * s, ws)
    eye = _identity_matrix(group.rank)
    vertex_map = {v.id: group.word(v.element * s) for v in source.vertices}
    return MGMorphism(source, target, vertex_map, {v: eye for v in source.ids})


def _display(vertex_id: str) -> str:
    return vertex_id or "e"


def to_dot(graph: MomentGraph) -> str:
    lines = ["digraph moment_graph {"]
    for v in graph.vertices:
        lines.append(f'  "{v.id}" [label="{_display(v.id)}"];')
    for e in graph.edges:
        label = ",".join(str(c) for c in e.label)
        lines.append(f'  "{e.tail}" -> "{e.head}" [label="({label})"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_document(graph: MomentGraph) -> GraphDocument:
    return GraphDocument(
        rank=graph.rank,
        vertices=[VertexItem(id=v.id, word=v.id, length=v.length) for v in graph.vertices],
        edges=[EdgeItem(tail=e.tail, head=e.head, label=list(e.label)) for e in graph.edges],
        order=[[a, b] for a, b in graph.order_pairs()],
    )


def to_json(graph: MomentGraph) -> str:
    return to_document(graph).model_dump_json(indent=2)


def from_document(document: GraphDocument, elements: Mapping[str, WeylElement] | None = None) -> MomentGraph:
    elements = elements or {}
    vertices = [Vertex(v.id, v.length, elements.get(v.id)) for v in document.vertices]
    edges = [Edge(e.tail, e.head, tuple(e.label)) for e in document.edges]
    return MomentGraph(document.rank, vertices, edges, [(a, b) for a, b in document.order])


def from_json(text: str) -> MomentGraph:
    return from_document(GraphDocument.model_validate_json(text))
