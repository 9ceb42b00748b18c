import logging
from functools import lru_cache

from app.lib.exceptions import GraphStructureError, LabelVanishesError, PreconditionError
from app.lib.linalg import EchelonForm, SparseVector, rank
from app.lib.utils import even_ceil
from app.models.coxeter import WeylElement
from app.models.kl import GradedRank, QPolynomial
from app.models.moment_graph import Edge, MomentGraph
from app.models.ring import CoefficientField, Polynomial
from app.models.sheaf import (
    BradenMacPhersonSheaf,
    EdgeModulePresentation,
    RestrictionMatrix,
    SheafData,
    StalkPresentation,
)
from app.ops.coxeter import WeylGroup
from app.ops.graph import is_gkm_pair, is_k_moment_graph, lower_graph, restrict
from app.ops.ring import reduce_mod_linear
from app.ops.sheaf import SectionTower, SheafSlicer, hilbert_series
from app.schemas.report import AxiomFailure, AxiomReport

logger = logging.getLogger(__name__)


def degree_windows(graph: MomentGraph, top: str, dmax_slack: int = 0) -> dict[str, int]:
    """t(x): least even degree >= l(top) - l(x) + 2 + slack."""
    top_length = graph.vertex(top).length
    return {v.id: even_ceil(top_length - v.length + 2 + dmax_slack) for v in graph.vertices}


def _unique_top(graph: MomentGraph) -> str:
    tops = graph.maximal_vertices()
    if len(tops) != 1:
        raise GraphStructureError(f"graph must have a unique maximal vertex, found {len(tops)}")
    return tops[0]


def _products(slicer: SheafSlicer, edges, previous: list[SparseVector], d: int) -> list[SparseVector]:
    """x_m * v for every basis vector v of B^{dx}_{d-2}: a spanning set of (S_+ B^{dx})_d."""
    field = slicer.field
    out = []
    for m in range(slicer.rank):
        maps = [slicer.multiplication_map(e.key, d - 2, m) for e, _ in edges]
        for vector in previous:
            product: SparseVector = {}
            for (k, c), value in vector.items():
                for c2, f in maps[k][c].items():
                    key = (k, c2)
                    total = field.normalize(product.get(key, field.zero) + value * f)
                    if field.is_zero(total):
                        product.pop(key, None)
                    else:
                        product[key] = total
            out.append(product)
    return out


def build_bmp(graph: MomentGraph, field: CoefficientField, dmax_slack: int = 0) -> BradenMacPhersonSheaf:
    """Braden-MacPherson sheaf on a graph with a unique maximal vertex."""
    top = _unique_top(graph)
    if not is_k_moment_graph(graph, field):
        raise LabelVanishesError(f"some edge label vanishes over {field}")
    window = degree_windows(graph, top, dmax_slack)
    cap = max(window.values())
    degrees = tuple(range(0, cap + 1, 2))
    sheaf = BradenMacPhersonSheaf(graph, field, {}, {}, {}, top=top, degree_cap=cap, window=window)
    slicer = SheafSlicer(sheaf)
    tower = SectionTower(slicer, degrees)
    sheaf.stalks[top] = StalkPresentation((0,))
    sheaf.converged[top] = True
    tower.add(top)

    for x in graph.processing_order()[1:]:
        up = graph.up_edges(x)
        for e in up:
            sheaf.edge_modules[e.key] = EdgeModulePresentation(
                e.head, sheaf.stalks[e.head].generator_degrees, e.label
            )
        edges = tower.edges_to(x)
        generators: list[tuple[int, SparseVector]] = []
        basis: list[SparseVector] = []
        for d in degrees:
            products = _products(slicer, edges, basis, d) if d else []
            boundary = tower.boundaries(x, d)
            echelon = EchelonForm(field)
            basis = []
            for vector in products:
                if echelon.insert(vector) is None:
                    basis.append(vector)
            for vector in boundary:
                if echelon.insert(vector) is None:
                    basis.append(vector)
                    generators.append((d, vector))
            logger.debug("vertex %r degree %d: B^dx dim %d, %d new generators",
                         x, d, len(basis), sum(1 for g in generators if g[0] == d))

        sheaf.stalks[x] = StalkPresentation(tuple(d for d, _ in generators))
        for k, (e, _) in enumerate(edges):
            sheaf.restrictions[e.key] = _restriction_from_generators(slicer, e, k, generators)
        unconverged = any(d >= window[x] - 2 for d, _ in generators)
        sheaf.converged[x] = not unconverged
        if unconverged:
            logger.warning("vertex %r has generators at the top of its degree window %d", x, window[x])
        tower.add(x)
    logger.info("built BMP sheaf on %d vertices over %s (degree cap %d)", len(graph.vertices), field, cap)
    return sheaf


def _restriction_from_generators(slicer: SheafSlicer, edge: Edge, k: int,
                                 generators: list[tuple[int, SparseVector]]) -> RestrictionMatrix:
    field, n = slicer.field, slicer.rank
    head_rank = len(slicer.sheaf.edge_modules[edge.key].generator_degrees)
    columns = []
    for d, vector in generators:
        layout, _ = slicer.edge_layout(edge.key, d)
        terms: list[dict] = [{} for _ in range(head_rank)]
        for (kk, c), value in vector.items():
            if kk == k:
                i, mono = layout[c]
                terms[i][mono] = value
        columns.append([Polynomial.from_normalized(field, n, t) for t in terms])
    entries = tuple(tuple(columns[j][i] for j in range(len(generators))) for i in range(head_rank))
    return RestrictionMatrix(edge.tail, edge.key, entries)


@lru_cache(maxsize=None)
def bmp_sheaf(group: WeylGroup, w: WeylElement, field: CoefficientField,
              J: frozenset[int] = frozenset(), dmax_slack: int = 0) -> BradenMacPhersonSheaf:
    """B^J_w on the Bruhat graph of W^J restricted to {<= w}, cached per input."""
    return build_bmp(lower_graph(group, w, J), field, dmax_slack)


def graded_rank(sheaf: SheafData, y: str) -> GradedRank:
    if y not in sheaf.stalks:
        raise PreconditionError(f"vertex {y!r} is not in the sheaf's graph")
    return QPolynomial.from_degrees(sheaf.stalks[y].generator_degrees)


def _check_presentation(sheaf: SheafData, failures: list[AxiomFailure]) -> None:
    graph, n = sheaf.graph, sheaf.graph.rank
    for e in graph.edges:
        module = sheaf.edge_modules.get(e.key)
        if module is None or module.head != e.head or tuple(module.label) != tuple(e.label):
            failures.append(AxiomFailure(axiom="ii", vertex=e.tail, detail=f"edge module of {e.key} does not match the graph"))
            continue
        if module.generator_degrees != sheaf.stalks[e.head].generator_degrees:
            failures.append(AxiomFailure(axiom="ii", vertex=e.tail, detail=f"edge module of {e.key} is not the head stalk mod its label"))
        matrix = sheaf.restrictions.get(e.key)
        tail_degrees = sheaf.stalks[e.tail].generator_degrees
        if matrix is None or len(matrix.entries) != len(module.generator_degrees) or any(
                len(row) != len(tail_degrees) for row in matrix.entries):
            failures.append(AxiomFailure(axiom="ii", vertex=e.tail, detail=f"restriction on {e.key} has the wrong shape"))
            continue
        for i, row in enumerate(matrix.entries):
            for j, p in enumerate(row):
                if p.is_zero():
                    continue
                if p.rank != n or not p.is_homogeneous() or p.degree() != tail_degrees[j] - module.generator_degrees[i]:
                    failures.append(AxiomFailure(axiom="ii", vertex=e.tail,
                                                 detail=f"entry ({i},{j}) on {e.key} is not homogeneous of the right degree"))
                elif reduce_mod_linear(p, e.label) != p:
                    failures.append(AxiomFailure(axiom="ii", vertex=e.tail,
                                                 detail=f"entry ({i},{j}) on {e.key} is not reduced mod its label"))


def verify_axioms(sheaf: SheafData, d_max: int | None = None) -> AxiomReport:
    """Check the characterising properties of the canonical sheaf up to a degree cap.

    Vertices are certified top-down. B^{dx} is computed from the sections over
    the vertices already certified; that set is upward closed, and certified
    vertices make it flabby, so the image equals the one of Gamma({> x}).
    """
    graph, field = sheaf.graph, sheaf.field
    failures: list[AxiomFailure] = []
    tops = graph.maximal_vertices()
    if len(tops) != 1:
        return AxiomReport(passed=False, degree_cap=d_max or 0, failures=[
            AxiomFailure(axiom="i", detail=f"graph has {len(tops)} maximal vertices")])
    top = tops[0]
    if d_max is None:
        d_max = max(degree_windows(graph, top).values())
    if sheaf.stalks.get(top) != StalkPresentation((0,)):
        failures.append(AxiomFailure(axiom="i", vertex=top, detail="top stalk is not S_k"))
    _check_presentation(sheaf, failures)
    if failures:
        return AxiomReport(passed=False, degree_cap=d_max, failures=failures)

    degrees = tuple(range(0, d_max + 1, 2))
    slicer = SheafSlicer(sheaf)
    tower = SectionTower(slicer, degrees)
    tower.add(top)
    for x in graph.processing_order()[1:]:
        stalk = sheaf.stalks[x].generator_degrees
        edges = tower.edges_to(x)
        basis: list = []
        for d in degrees:
            products = _products(slicer, edges, basis, d) if d else []
            boundary = tower.boundaries(x, d)
            echelon = EchelonForm(field)
            basis = [v for v in products if echelon.insert(v) is None]
            span_products = echelon.rank
            basis += [v for v in boundary if echelon.insert(v) is None]
            expected = echelon.rank - span_products
            found = sum(1 for g in stalk if g == d)
            if expected != found:
                failures.append(AxiomFailure(
                    axiom="iii", vertex=x, degree=d,
                    detail=f"{found} generators in degree {d}, minimal count is {expected}"))
            differential = tower.differential(x, d)
            image_rank = rank(field, differential)
            joint = rank(field, list(differential) + list(boundary))
            if not (image_rank == joint == echelon.rank):
                failures.append(AxiomFailure(
                    axiom="iii", vertex=x, degree=d,
                    detail="d_x does not map onto the image of the sections above"))
        tower.add(x)
    return AxiomReport(passed=not failures, degree_cap=d_max, failures=failures)


def gamma_interval(group: WeylGroup, y: WeylElement, w: WeylElement, s: WeylElement) -> list[str]:
    """[ys, w] minus {ys, y}."""
    group.simple_index(s)
    ys = y * s
    if not group.bruhat_leq(y, w):
        raise PreconditionError("needs y <= w")
    if not group.bruhat_lt(ys, y):
        raise PreconditionError("needs ys < y")
    if not group.bruhat_lt(w * s, w):
        raise PreconditionError("needs ws < w")
    return [group.word(x) for x in group.interval(ys, w) if x != ys and x != y]


def hilbert_divisible(series: list[int]) -> bool:
    """H = (1+q) G with G >= 0, checked on the available coefficients."""
    g_prev = 0
    for h in series:
        g = h - g_prev
        if g < 0:
            return False
        g_prev = g
    return True


def gamma_divisibility_check(sheaf: BradenMacPhersonSheaf, group: WeylGroup, y: WeylElement, w: WeylElement,
                             s: WeylElement, d_max: int | None = None) -> bool:
    vertices = gamma_interval(group, y, w, s)
    if not vertices:
        return True
    sub = restrict(sheaf.graph, vertices)
    if not is_gkm_pair(sub, sheaf.field).is_gkm:
        raise PreconditionError(f"restriction to [ys,w] minus {{ys,y}} is not a GKM pair over {sheaf.field}")
    if d_max is None:
        d_max = sheaf.degree_cap
    series = hilbert_series(sheaf, vertices, d_max)
    logger.debug("Hilbert series on %d vertices: %s", len(vertices), series)
    return hilbert_divisible(series)
