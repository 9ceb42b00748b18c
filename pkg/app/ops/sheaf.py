"""Degree-sliced linear algebra for sheaves on moment graphs.

A degree-d slice of a stalk with generator degrees (d_1, ..., d_r) has
coordinates (j, mu) with mu running over monomial_basis(d - d_j). An edge
slice uses the head generators and only the monomials free of the label's
pivot variable, which are a basis of (S_k/(l))_{d - d_i}.
"""
import logging
from fractions import Fraction
from typing import Any, Iterable, Mapping, Sequence

from app.lib.exceptions import InvalidMorphismError, PreconditionError
from app.lib.linalg import EchelonForm, SparseVector, inverse_matrix
from app.models.moment_graph import Edge, MGMorphism, MomentGraph
from app.models.ring import CoefficientField, Exponent, Polynomial
from app.models.sheaf import (
    EdgeKey,
    EdgeModulePresentation,
    RestrictionMatrix,
    Section,
    SectionSlice,
    SheafData,
    StalkPresentation,
    StructureAlgebraElement,
)
from app.ops.graph import from_document, is_k_moment_graph, restrict, to_document, validate_morphism
from app.ops.ring import monomial_basis, reduce_mod_linear, reducer_for, twist_by_automorphism
from app.schemas.graph import SCHEMA_VERSION
from app.schemas.report import FlabbinessReport
from app.schemas.sheaf import (
    EdgeModuleItem,
    PolynomialTerm,
    RestrictionItem,
    SheafDocument,
    StalkItem,
)

logger = logging.getLogger(__name__)

Layout = tuple[tuple[int, Exponent], ...]


class SheafSlicer:
    """Coordinates and sparse matrices of one sheaf's degree slices, cached.

    Stalks and restrictions are read from the sheaf on first use, so a sheaf
    that is still being built can be sliced as long as every vertex is
    complete before it is queried.
    """

    def __init__(self, sheaf: SheafData):
        self.sheaf = sheaf
        self.field = sheaf.field
        self.rank = sheaf.graph.rank
        self._stalk_layouts: dict[tuple[str, int], tuple[Layout, dict]] = {}
        self._edge_layouts: dict[tuple[EdgeKey, int], tuple[Layout, dict]] = {}
        self._maps: dict[tuple[str, EdgeKey, int], list[SparseVector]] = {}
        self._mult: dict[tuple[EdgeKey, int, int], list[SparseVector]] = {}

    def reducer(self, key: EdgeKey):
        return reducer_for(tuple(self.sheaf.edge_modules[key].label), self.field)

    def stalk_layout(self, x: str, d: int) -> tuple[Layout, dict]:
        cached = self._stalk_layouts.get((x, d))
        if cached is None:
            layout = tuple(
                (j, mono)
                for j, dj in enumerate(self.sheaf.stalks[x].generator_degrees) if dj <= d
                for mono in monomial_basis(d - dj, self.rank)
            )
            cached = (layout, {coord: i for i, coord in enumerate(layout)})
            self._stalk_layouts[(x, d)] = cached
        return cached

    def edge_layout(self, key: EdgeKey, d: int) -> tuple[Layout, dict]:
        cached = self._edge_layouts.get((key, d))
        if cached is None:
            reducer = self.reducer(key)
            layout = tuple(
                (i, mono)
                for i, di in enumerate(self.sheaf.edge_modules[key].generator_degrees) if di <= d
                for mono in monomial_basis(d - di, self.rank)
                if reducer.is_reduced_monomial(mono)
            )
            cached = (layout, {coord: i for i, coord in enumerate(layout)})
            self._edge_layouts[(key, d)] = cached
        return cached

    def stalk_dimension(self, x: str, d: int) -> int:
        return len(self.stalk_layout(x, d)[0])

    def restriction_map(self, x: str, key: EdgeKey, d: int) -> list[SparseVector]:
        """Columns of rho_{x,E} in degree d: one sparse edge-coordinate vector per stalk coordinate."""
        cached = self._maps.get((x, key, d))
        if cached is not None:
            return cached
        field = self.field
        reducer = self.reducer(key)
        _, edge_index = self.edge_layout(key, d)
        layout, _ = self.stalk_layout(x, d)
        columns: list[SparseVector] = []
        if x == key[1]:
            for i, mono in layout:
                columns.append({
                    edge_index[(i, nu)]: value for nu, value in reducer.reduce_monomial(mono).items()
                })
        elif x == key[0]:
            entries = self.sheaf.restrictions[key].entries
            for j, mono in layout:
                column: SparseVector = {}
                for i, row in enumerate(entries):
                    p = row[j]
                    for tau, c in p.terms.items():
                        shifted = tuple(a + b for a, b in zip(tau, mono))
                        for nu, f in reducer.reduce_monomial(shifted).items():
                            idx = edge_index[(i, nu)]
                            total = field.normalize(column.get(idx, field.zero) + c * f)
                            if field.is_zero(total):
                                column.pop(idx, None)
                            else:
                                column[idx] = total
                columns.append(column)
        else:
            raise PreconditionError(f"vertex {x!r} is not an endpoint of edge {key}")
        self._maps[(x, key, d)] = columns
        return columns

    def multiplication_map(self, key: EdgeKey, d: int, m: int) -> list[SparseVector]:
        """Multiplication by x_m from the degree-d edge slice to the degree-(d+2) slice."""
        cached = self._mult.get((key, d, m))
        if cached is not None:
            return cached
        reducer = self.reducer(key)
        layout, _ = self.edge_layout(key, d)
        _, target = self.edge_layout(key, d + 2)
        columns = []
        for i, mono in layout:
            shifted = tuple(a + (1 if k == m else 0) for k, a in enumerate(mono))
            columns.append({target[(i, nu)]: v for nu, v in reducer.reduce_monomial(shifted).items()})
        self._mult[(key, d, m)] = columns
        return columns

    def to_polynomials(self, x: str, d: int, coords: Sequence[Any]) -> list[Polynomial]:
        layout, _ = self.stalk_layout(x, d)
        rank = self.sheaf.stalks[x].rank
        terms: list[dict] = [{} for _ in range(rank)]
        for (j, mono), value in zip(layout, coords):
            if not self.field.is_zero(value):
                terms[j][mono] = value
        return [Polynomial.from_normalized(self.field, self.rank, t) for t in terms]

    def from_polynomials(self, x: str, d: int, polys: Sequence[Polynomial]) -> tuple:
        layout, index = self.stalk_layout(x, d)
        coords = [self.field.zero] * len(layout)
        for j, p in enumerate(polys):
            for mono, value in p.terms.items():
                if (j, mono) not in index:
                    raise PreconditionError(f"component {j} at {x!r} is not homogeneous of the slice degree {d}")
                coords[index[(j, mono)]] = value
        return tuple(coords)


def _combine(field: CoefficientField, terms: Iterable[tuple[Any, Section]]) -> Section:
    out: dict[str, list] = {}
    for coefficient, section in terms:
        for vertex, coords in section.items():
            acc = out.setdefault(vertex, [field.zero] * len(coords))
            for i, value in enumerate(coords):
                if not field.is_zero(value):
                    acc[i] = field.normalize(acc[i] + coefficient * value)
    return {v: tuple(c) for v, c in out.items()}


class SectionTower:
    """Bases of Gamma(P)_d for a growing vertex set P, one vertex at a time.

    Sections are dicts vertex -> coordinates; a missing vertex means zero.
    Adding x solves R_{x,E} m_x = R_{y,E} m_y on the edges between x and P:
    every relation among the columns [-d_x | u_x(basis)] is a new basis section.
    """

    def __init__(self, slicer: SheafSlicer, degrees: Iterable[int]):
        self.slicer = slicer
        self.field = slicer.field
        self.degrees = tuple(degrees)
        self.members: list[str] = []
        self._member_set: set[str] = set()
        self.bases: dict[int, list[Section]] = {d: [] for d in self.degrees}
        self._boundary_cache: dict[tuple[str, int], list[SparseVector]] = {}

    def edges_to(self, x: str) -> list[tuple[Edge, str]]:
        graph = self.slicer.sheaf.graph
        out = []
        for e in graph.incident_edges(x):
            other = e.head if e.tail == x else e.tail
            if other in self._member_set:
                out.append((e, other))
        return out

    def boundaries(self, x: str, d: int) -> list[SparseVector]:
        """u_x applied to the current basis of Gamma(P)_d, keyed by (edge position, edge coordinate)."""
        cached = self._boundary_cache.get((x, d))
        if cached is not None:
            return cached
        field = self.field
        edges = self.edges_to(x)
        maps = [(k, other, self.slicer.restriction_map(other, e.key, d)) for k, (e, other) in enumerate(edges)]
        out = []
        for section in self.bases[d]:
            vector: SparseVector = {}
            for k, other, columns in maps:
                coords = section.get(other)
                if coords is None:
                    continue
                for j, value in enumerate(coords):
                    if field.is_zero(value):
                        continue
                    for c, entry in columns[j].items():
                        key = (k, c)
                        total = field.normalize(vector.get(key, field.zero) + value * entry)
                        if field.is_zero(total):
                            vector.pop(key, None)
                        else:
                            vector[key] = total
            out.append(vector)
        self._boundary_cache[(x, d)] = out
        return out

    def differential(self, x: str, d: int) -> list[SparseVector]:
        """d_x in degree d: one vector per stalk coordinate of x."""
        edges = self.edges_to(x)
        dim = self.slicer.stalk_dimension(x, d)
        columns: list[SparseVector] = [{} for _ in range(dim)]
        for k, (e, _) in enumerate(edges):
            for j, column in enumerate(self.slicer.restriction_map(x, e.key, d)):
                for c, value in column.items():
                    columns[j][(k, c)] = value
        return columns

    def add(self, x: str) -> None:
        if x in self._member_set:
            raise PreconditionError(f"vertex {x!r} already added")
        for d in self.degrees:
            self.bases[d] = self._extend(x, d)
            self._boundary_cache.pop((x, d), None)
        self.members.append(x)
        self._member_set.add(x)

    def _extend(self, x: str, d: int) -> list[Section]:
        field = self.field
        dim = self.slicer.stalk_dimension(x, d)
        echelon = EchelonForm(field)
        new_basis: list[Section] = []

        def x_part(tag: SparseVector) -> tuple:
            coords = [field.zero] * dim
            for (kind, j), value in tag.items():
                if kind == "v":
                    coords[j] = value
            return tuple(coords)

        for j, column in enumerate(self.differential(x, d)):
            negated = {c: field.normalize(-v) for c, v in column.items()}
            relation = echelon.insert(negated, {("v", j): field.one})
            if relation is not None:
                new_basis.append({x: x_part(relation)})

        old = self.bases[d]
        for i, vector in enumerate(self.boundaries(x, d)):
            relation = echelon.insert(vector, {("b", i): field.one})
            if relation is None:
                continue
            combination = [(value, old[k]) for (kind, k), value in relation.items() if kind == "b"]
            if len(combination) == 1 and combination[0][0] == field.one:
                section = dict(combination[0][1])
            else:
                section = _combine(field, combination)
            if dim:
                section[x] = x_part(relation)
            new_basis.append(section)
        logger.debug("sections over %d vertices in degree %d: dimension %d", len(self.members) + 1, d, len(new_basis))
        return new_basis


def _ordered(graph: MomentGraph, vertices: Iterable[str]) -> list[str]:
    keep = set(vertices)
    for v in keep:
        graph.vertex(v)
    return [v for v in graph.processing_order() if v in keep]


def build_tower(sheaf: SheafData, vertices: Iterable[str], degrees: Iterable[int],
                slicer: SheafSlicer | None = None) -> SectionTower:
    tower = SectionTower(slicer or SheafSlicer(sheaf), degrees)
    for x in _ordered(sheaf.graph, vertices):
        tower.add(x)
    return tower


def _check_degree(d: int) -> None:
    if d < 0 or d % 2:
        raise PreconditionError(f"section degree must be even and nonnegative, got {d}")


def _full_section(slicer: SheafSlicer, vertices: Sequence[str], d: int, section: Section) -> Section:
    field = slicer.field
    return {
        v: section.get(v, tuple([field.zero] * slicer.stalk_dimension(v, d)))
        for v in vertices
    }


def sections_slice(sheaf: SheafData, vertices: Iterable[str], d: int) -> SectionSlice:
    _check_degree(d)
    order = _ordered(sheaf.graph, vertices)
    slicer = SheafSlicer(sheaf)
    tower = build_tower(sheaf, order, (d,), slicer)
    listed = tuple(v.id for v in sheaf.graph.vertices if v.id in set(order))
    basis = tuple(_full_section(slicer, listed, d, s) for s in tower.bases[d])
    return SectionSlice(vertices=listed, degree=d, basis=basis)


def hilbert_series(sheaf: SheafData, vertices: Iterable[str], d_max: int) -> list[int]:
    degrees = range(0, d_max + 1, 2)
    tower = build_tower(sheaf, vertices, degrees)
    return [len(tower.bases[d]) for d in degrees]


def section_constraint_matrix(sheaf: SheafData, vertices: Iterable[str], d: int
                              ) -> tuple[list[tuple[str, int]], list[SparseVector]]:
    """The full linear system whose kernel is Gamma(I)_d: unknowns and sparse rows."""
    _check_degree(d)
    slicer = SheafSlicer(sheaf)
    order = [v.id for v in sheaf.graph.vertices if v.id in set(vertices)]
    unknowns = [(v, i) for v in order for i in range(slicer.stalk_dimension(v, d))]
    index = {u: k for k, u in enumerate(unknowns)}
    keep = set(order)
    rows: list[SparseVector] = []
    for e in sheaf.graph.edges:
        if e.tail not in keep or e.head not in keep:
            continue
        size = len(slicer.edge_layout(e.key, d)[0])
        edge_rows: list[SparseVector] = [{} for _ in range(size)]
        for sign, vertex in ((1, e.tail), (-1, e.head)):
            for j, column in enumerate(slicer.restriction_map(vertex, e.key, d)):
                for c, value in column.items():
                    edge_rows[c][index[(vertex, j)]] = sheaf.field.normalize(sign * value)
        rows.extend(edge_rows)
    return unknowns, rows


def is_section(sheaf: SheafData, section: Section, d: int, vertices: Iterable[str] | None = None) -> bool:
    """Re-check every edge equation with polynomial arithmetic."""
    slicer = SheafSlicer(sheaf)
    keep = set(vertices) if vertices is not None else set(section)
    polys = {}
    for v in keep:
        coords = section.get(v)
        if coords is None:
            coords = tuple([sheaf.field.zero] * slicer.stalk_dimension(v, d))
        polys[v] = slicer.to_polynomials(v, d, coords)
    for e in sheaf.graph.edges:
        if e.tail not in keep or e.head not in keep:
            continue
        entries = sheaf.restrictions[e.key].entries
        for i, row in enumerate(entries):
            image = Polynomial.zero(sheaf.field, sheaf.graph.rank)
            for j, p in enumerate(row):
                image = image + p * polys[e.tail][j]
            if reduce_mod_linear(image - polys[e.head][i], e.label) != 0:
                return False
    return True


# structure algebra

def cs_element(group, s, graph: MomentGraph, field: CoefficientField,
               vertices: Iterable[str] | None = None) -> StructureAlgebraElement:
    """c_s with component x(coroot_s) at each vertex x."""
    i = group.simple_index(s)
    keep = set(vertices) if vertices is not None else set(graph.ids)
    components = {}
    for v in graph.vertices:
        if v.id not in keep:
            continue
        if v.element is None:
            raise PreconditionError(f"vertex {v.id!r} carries no Weyl group element")
        components[v.id] = Polynomial.linear_form(field, v.element.column(i - 1))
    z = StructureAlgebraElement(components)
    if not is_structure_element(z, graph, field):
        raise PreconditionError(f"c_{i} failed the structure algebra membership check")
    return z


def is_structure_element(z: StructureAlgebraElement, graph: MomentGraph, field: CoefficientField) -> bool:
    for e in graph.edges:
        if e.tail not in z.components or e.head not in z.components:
            continue
        difference = z.components[e.tail] - z.components[e.head]
        if difference.field != field:
            return False
        if reduce_mod_linear(difference, e.label) != 0:
            return False
    return True


def constant_element(graph: MomentGraph, field: CoefficientField, value: Any = 1) -> StructureAlgebraElement:
    return StructureAlgebraElement({v: Polynomial.constant(field, graph.rank, value) for v in graph.ids})


def act(z: StructureAlgebraElement, section: Section, sheaf: SheafData, d: int) -> Section:
    """Componentwise product z . m; the result lives in degree d + deg z."""
    e = z.degree()
    slicer = SheafSlicer(sheaf)
    out = {}
    for v, coords in section.items():
        if v not in z.components:
            raise PreconditionError(f"structure algebra element has no component at {v!r}")
        polys = [z.components[v] * p for p in slicer.to_polynomials(v, d, coords)]
        out[v] = slicer.from_polynomials(v, d + e, polys)
    return out


# flabbiness

def _image_contains(field: CoefficientField, spanning: Iterable[SparseVector], vectors: Iterable[SparseVector]) -> bool:
    echelon = EchelonForm(field)
    for v in spanning:
        echelon.insert(v)
    return all(echelon.contains(v) for v in vectors)


def is_flabby(sheaf: SheafData, d_max: int) -> FlabbinessReport:
    """For each x: the image of Gamma({> x}) in the upward edge modules lies in the image of d_x."""
    graph = sheaf.graph
    degrees = range(0, d_max + 1, 2)
    slicer = SheafSlicer(sheaf)
    for x in graph.processing_order():
        above = graph.above(x)
        if not above:
            continue
        tower = build_tower(sheaf, above, degrees, slicer)
        for d in degrees:
            if not _image_contains(sheaf.field, tower.differential(x, d), tower.boundaries(x, d)):
                logger.info("sheaf is not flabby at %r in degree %d", x, d)
                return FlabbinessReport(flabby=False, degree_cap=d_max, witness_vertex=x, witness_degree=d)
    return FlabbinessReport(flabby=True, degree_cap=d_max)


def restriction_surjective(sheaf: SheafData, x: str, d: int) -> bool:
    """Gamma({>= x})_d -> Gamma({> x})_d is onto."""
    _check_degree(d)
    slicer = SheafSlicer(sheaf)
    tower = build_tower(sheaf, sheaf.graph.above(x), (d,), slicer)
    upper = len(tower.bases[d])
    differential = tower.differential(x, d)
    echelon = EchelonForm(sheaf.field)
    for column in differential:
        echelon.insert(column)
    kernel = len(differential) - echelon.rank
    tower.add(x)
    return len(tower.bases[d]) - kernel == upper


# constructions

def _identity(field: CoefficientField, rank: int, size: int) -> tuple[tuple[Polynomial, ...], ...]:
    one = Polynomial.constant(field, rank)
    zero = Polynomial.zero(field, rank)
    return tuple(tuple(one if i == j else zero for j in range(size)) for i in range(size))


def structure_sheaf(graph: MomentGraph, field: CoefficientField) -> SheafData:
    """Stalks S_k everywhere, tail maps the canonical quotient."""
    stalks = {v: StalkPresentation((0,)) for v in graph.ids}
    edges = {e.key: EdgeModulePresentation(e.head, (0,), e.label) for e in graph.edges}
    restrictions = {
        e.key: RestrictionMatrix(e.tail, e.key, _identity(field, graph.rank, 1)) for e in graph.edges
    }
    return SheafData(graph, field, stalks, edges, restrictions)


def restrict_sheaf(sheaf: SheafData, vertices: Iterable[str]) -> SheafData:
    graph = restrict(sheaf.graph, vertices)
    keys = {e.key for e in graph.edges}
    return SheafData(
        graph,
        sheaf.field,
        {v: sheaf.stalks[v] for v in graph.ids},
        {k: m for k, m in sheaf.edge_modules.items() if k in keys},
        {k: r for k, r in sheaf.restrictions.items() if k in keys},
    )


def pullback(f: MGMorphism, sheaf: SheafData) -> SheafData:
    """f*F on f.source; restriction entries are twisted by the inverse of f_{l,x} and reduced."""
    field = sheaf.field
    report = validate_morphism(f, field=field)
    if not report.valid:
        raise InvalidMorphismError("cannot pull back along an invalid morphism", report.violations)
    source = f.source
    missing = sorted({f.vertex_map[v] for v in source.ids} - set(sheaf.stalks))
    if missing:
        raise PreconditionError(f"sheaf has no stalks at image vertices {missing}")
    if not is_k_moment_graph(source, field):
        raise PreconditionError(f"source graph is not a moment graph over {field}")
    stalks = {v: sheaf.stalks[f.vertex_map[v]] for v in source.ids}
    edges: dict[EdgeKey, EdgeModulePresentation] = {}
    restrictions: dict[EdgeKey, RestrictionMatrix] = {}
    inverses: dict[str, list] = {}
    for e in source.edges:
        u, w = f.vertex_map[e.tail], f.vertex_map[e.head]
        degrees = stalks[e.head].generator_degrees
        edges[e.key] = EdgeModulePresentation(e.head, degrees, e.label)
        if u == w:
            # collapsed edge: canonical quotient of the common stalk, untwisted only when both ends agree
            if tuple(map(tuple, f.lattice_autos[e.tail])) != tuple(map(tuple, f.lattice_autos[e.head])):
                raise InvalidMorphismError(
                    f"edge {e.key} collapses onto {u!r} with different lattice automorphisms at its ends",
                    [f"collapsed edge {e.key}"],
                )
            restrictions[e.key] = RestrictionMatrix(e.tail, e.key, _identity(field, source.rank, len(degrees)))
            continue
        image = f.target.edge_between(u, w)
        if e.tail not in inverses:
            inverses[e.tail] = inverse_matrix(field, f.lattice_autos[e.tail])
        g = inverses[e.tail]
        entries = tuple(
            tuple(reduce_mod_linear(twist_by_automorphism(p, g), e.label) for p in row)
            for row in sheaf.restrictions[image.key].entries
        )
        restrictions[e.key] = RestrictionMatrix(e.tail, e.key, entries)
    return SheafData(source, field, stalks, edges, restrictions)


def same_sheaf_data(a: SheafData, b: SheafData) -> bool:
    return (
        a.field == b.field
        and a.graph.ids == b.graph.ids
        and a.stalks == b.stalks
        and a.edge_modules == b.edge_modules
        and {k: r.entries for k, r in a.restrictions.items()} == {k: r.entries for k, r in b.restrictions.items()}
    )


# serialization

def _terms(p: Polynomial) -> list[PolynomialTerm]:
    out = []
    for exponent, value in p.sorted_terms():
        value = Fraction(value)
        out.append(PolynomialTerm(exponents=list(exponent), numerator=value.numerator, denominator=value.denominator))
    return out


def sheaf_to_document(sheaf: SheafData) -> SheafDocument:
    return SheafDocument(
        schema_version=SCHEMA_VERSION,
        field=sheaf.field.label,
        graph=to_document(sheaf.graph),
        stalks=[StalkItem(vertex=v, generator_degrees=list(sheaf.stalks[v].generator_degrees))
                for v in sheaf.graph.ids],
        edge_modules=[
            EdgeModuleItem(tail=e.key[0], head=e.key[1], label=list(sheaf.edge_modules[e.key].label),
                           generator_degrees=list(sheaf.edge_modules[e.key].generator_degrees))
            for e in sheaf.graph.edges
        ],
        restrictions=[
            RestrictionItem(tail=e.key[0], head=e.key[1],
                            entries=[[_terms(p) for p in row] for row in sheaf.restrictions[e.key].entries])
            for e in sheaf.graph.edges
        ],
    )


def sheaf_to_json(sheaf: SheafData) -> str:
    return sheaf_to_document(sheaf).model_dump_json(indent=2)


def sheaf_from_json(text: str, field: CoefficientField, elements: Mapping | None = None) -> SheafData:
    document = SheafDocument.model_validate_json(text)
    if document.field != field.label:
        raise PreconditionError(f"sheaf document is over {document.field}, expected {field.label}")
    graph = from_document(document.graph, elements)
    stalks = {s.vertex: StalkPresentation(tuple(s.generator_degrees)) for s in document.stalks}
    edges = {
        (m.tail, m.head): EdgeModulePresentation(m.head, tuple(m.generator_degrees), tuple(m.label))
        for m in document.edge_modules
    }

    def poly(terms: list[PolynomialTerm]) -> Polynomial:
        return Polynomial(field, graph.rank, {tuple(t.exponents): Fraction(t.numerator, t.denominator) for t in terms})

    restrictions = {
        (r.tail, r.head): RestrictionMatrix(r.tail, (r.tail, r.head),
                                            tuple(tuple(poly(p) for p in row) for row in r.entries))
        for r in document.restrictions
    }
    return SheafData(graph, field, stalks, edges, restrictions)
