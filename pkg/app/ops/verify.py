"""Theorem-verification suites.

Each suite sweeps a group exhaustively (or the lower interval of a chosen
element) and returns a SuiteResult naming the statement it checks. Failures
are counterexamples; findings are observations that are not failures, such as
characteristic-p rank differences or skipped hypotheses.
"""
import logging
from dataclasses import dataclass, field as dataclass_field
from itertools import combinations
from typing import Callable, Iterable

from app.lib.exceptions import AlgebraError, PreconditionError
from app.models.coxeter import WeylElement
from app.models.kl import GradedRank
from app.models.ring import CoefficientField, RationalField
from app.ops.bmp import bmp_sheaf, gamma_divisibility_check, graded_rank, verify_axioms
from app.ops.coxeter import WeylGroup
from app.ops.graph import (
    bruhat_graph,
    inverse_automorphism,
    is_gkm_pair,
    lower_graph,
    restrict_morphism,
    right_mult_isomorphism,
    validate_morphism,
)
from app.ops.kl import kl_engine, verify_identities
from app.ops.sheaf import cs_element, is_flabby, pullback, restrict_sheaf
from app.schemas.report import SuiteResult, VerificationReport

logger = logging.getLogger(__name__)


@dataclass
class SuiteContext:
    group: WeylGroup
    field: CoefficientField = dataclass_field(default_factory=RationalField)
    J: frozenset[int] | None = None
    w: WeylElement | None = None
    dmax_slack: int = 0
    max_length: int | None = None

    def sweep(self) -> list[WeylElement]:
        elements = list(self.group.elements) if self.w is None else self.group.lower_interval(self.w)
        if self.max_length is not None:
            elements = [x for x in elements if self.group.length(x) <= self.max_length]
        return elements

    def rank(self, w: WeylElement, y: WeylElement, J: frozenset[int] = frozenset()) -> GradedRank:
        sheaf = bmp_sheaf(self.group, w, self.field, J, self.dmax_slack)
        return graded_rank(sheaf, self.group.word(y))

    def gkm_below(self, w: WeylElement, J: frozenset[int] = frozenset()) -> bool:
        return is_gkm_pair(lower_graph(self.group, w, J), self.field).is_gkm

    @property
    def exact(self) -> bool:
        return self.field.characteristic == 0


def _name(group: WeylGroup, x: WeylElement) -> str:
    return group.word(x) or "e"


def _triples(group: WeylGroup, elements: Iterable[WeylElement]):
    """(y, w, s) with y <= w and ws < w."""
    for w in elements:
        for i in group.right_descents(w):
            s = group.s(i)
            for y in group.lower_interval(w):
                yield y, w, s, i


def kl_identities_suite(ctx: SuiteContext) -> SuiteResult:
    group = ctx.group
    engine = kl_engine(group)
    report = verify_identities(group)
    result = SuiteResult(suite="kl-identities", theorem="", checked=report.checked, failures=list(report.violations))
    for w in ctx.sweep():
        for y in group.lower_interval(w):
            p = engine.kl(y, w)
            result.checked += 1
            if p.coefficient(0) != 1:
                result.failures.append(f"P({_name(group, y)},{_name(group, w)}) has constant term {p.coefficient(0)}")
            if y != w and 2 * p.degree > group.length(w) - group.length(y) - 1:
                result.failures.append(f"P({_name(group, y)},{_name(group, w)}) = {p} exceeds the degree bound")
            for i in group.left_descents(w):
                result.checked += 1
                if engine.recursion_step(y, w, group.s(i)) != p:
                    result.failures.append(
                        f"recursion along s{i} disagrees for P({_name(group, y)},{_name(group, w)})"
                    )
    return result


def ranks_vs_kl_suite(ctx: SuiteContext) -> SuiteResult:
    group = ctx.group
    engine = kl_engine(group)
    result = SuiteResult(suite="ranks-vs-kl", theorem="")
    for w in ctx.sweep():
        sheaf = bmp_sheaf(group, w, ctx.field, frozenset(), ctx.dmax_slack)
        for y in group.lower_interval(w):
            word = group.word(y)
            result.checked += 1
            if not sheaf.converged[word]:
                result.findings.append(f"B_{_name(group, w)} unconverged at {_name(group, y)}")
            rank, p = graded_rank(sheaf, word), engine.kl(y, w)
            if rank == p:
                continue
            line = f"rank of B_{_name(group, w)} at {_name(group, y)} is {rank}, P = {p}"
            (result.failures if ctx.exact else result.findings).append(line)
    return result


def rank_symmetry_suite(ctx: SuiteContext) -> SuiteResult:
    group = ctx.group
    result = SuiteResult(suite="thm58", theorem="")
    for w in ctx.sweep():
        w_inv = group.inverse(w)
        for y in group.lower_interval(w):
            result.checked += 1
            a, b = ctx.rank(w, y), ctx.rank(w_inv, group.inverse(y))
            if a != b:
                result.failures.append(f"inverse: rank at ({_name(group, y)},{_name(group, w)}) is {a} vs {b}")
    for y, w, s, i in _triples(group, ctx.sweep()):
        ws = w * s
        if group.bruhat_leq(y, ws):
            continue
        result.checked += 1
        a, b = ctx.rank(w, y), ctx.rank(ws, y * s)
        if a != b:
            result.failures.append(f"right s{i}: rank at ({_name(group, y)},{_name(group, w)}) is {a} vs {b}")
    return result


def rank_descent_suite(ctx: SuiteContext) -> SuiteResult:
    group = ctx.group
    result = SuiteResult(suite="thm62", theorem="")
    gkm: dict[int, bool] = {}
    for y, w, s, i in _triples(group, ctx.sweep()):
        k = group.index(w)
        if k not in gkm:
            gkm[k] = ctx.gkm_below(w)
            if not gkm[k]:
                logger.warning("graph below %s is not GKM over %s; skipping", _name(group, w), ctx.field)
        if not gkm[k]:
            result.skipped += 1
            continue
        result.checked += 1
        ys = y * s
        a, b = ctx.rank(w, y), ctx.rank(w, ys)
        if a != b:
            result.failures.append(
                f"rank of B_{_name(group, w)} at {_name(group, y)} is {a}, at {_name(group, ys)} is {b}"
            )
    return result


def _default_parabolics(group: WeylGroup) -> list[frozenset[int]]:
    """Singletons plus pairs of commuting simple reflections."""
    a = group.datum.cartan_matrix
    out = [frozenset({i}) for i in range(1, group.rank + 1)]
    out += [frozenset(pair) for pair in combinations(range(1, group.rank + 1), 2) if a[pair[0] - 1][pair[1] - 1] == 0]
    return out


def parabolic_suite(ctx: SuiteContext) -> SuiteResult:
    group = ctx.group
    engine = kl_engine(group)
    result = SuiteResult(suite="parabolic", theorem="")
    parabolics = [ctx.J] if ctx.J else _default_parabolics(group)
    for J in parabolics:
        w_J = group.longest_in(J)
        subgroup = group.parabolic_subgroup(J)
        for w in ctx.sweep():
            if not group.is_min_rep(w, J):
                continue
            top = w * w_J
            if not ctx.gkm_below(top):
                result.skipped += 1
                continue
            try:
                sheaf = bmp_sheaf(group, w, ctx.field, J, ctx.dmax_slack)
            except AlgebraError as exc:
                logger.warning("skipping J=%s w=%s: %s", sorted(J), _name(group, w), exc.detail)
                result.skipped += 1
                result.findings.append(f"J={sorted(J)} w={_name(group, w)}: {exc.detail}")
                continue
            for y in group.lower_interval(w):
                if not group.is_min_rep(y, J):
                    continue
                result.checked += 1
                rank = graded_rank(sheaf, group.word(y))
                regular = ctx.rank(top, y * w_J)
                if rank != regular:
                    result.failures.append(
                        f"J={sorted(J)}: rank of B^J_{_name(group, w)} at {_name(group, y)} is {rank}, regular rank {regular}"
                    )
                p = engine.parabolic_kl(J, y, w)
                if rank != p:
                    line = f"J={sorted(J)}: rank of B^J_{_name(group, w)} at {_name(group, y)} is {rank}, P^J = {p}"
                    (result.failures if ctx.exact else result.findings).append(line)
            for x in group.lower_interval(top):
                if not group.is_min_rep(x, J):
                    continue
                base = ctx.rank(top, x)
                for u in subgroup[1:]:
                    result.checked += 1
                    if ctx.rank(top, x * u) != base:
                        result.failures.append(
                            f"J={sorted(J)}: rank of B_{_name(group, top)} not constant on the coset of {_name(group, x)}"
                        )
    return result


def smoothness_suite(ctx: SuiteContext) -> SuiteResult:
    group = ctx.group
    w0 = group.longest_element
    result = SuiteResult(suite="smoothness", theorem="")
    for y in group.elements:
        result.checked += 1
        rank = ctx.rank(w0, y)
        if rank.coefficients != (1,):
            result.failures.append(f"rank of B_w0 at {_name(group, y)} is {rank}")
    return result


def gamma_div_suite(ctx: SuiteContext) -> SuiteResult:
    group = ctx.group
    result = SuiteResult(suite="gamma-div", theorem="")
    for y, w, s, i in _triples(group, ctx.sweep()):
        if not group.bruhat_lt(y * s, y):
            continue
        sheaf = bmp_sheaf(group, w, ctx.field, frozenset(), ctx.dmax_slack)
        try:
            divisible = gamma_divisibility_check(sheaf, group, y, w, s)
        except PreconditionError as exc:
            logger.warning("skipping (%s, %s, s%d): %s", _name(group, y), _name(group, w), i, exc.detail)
            result.skipped += 1
            continue
        result.checked += 1
        if not divisible:
            result.failures.append(f"sections for ({_name(group, y)},{_name(group, w)},s{i}) not divisible by 1+q")
    return result


def flabby_suite(ctx: SuiteContext) -> SuiteResult:
    group = ctx.group
    result = SuiteResult(suite="flabby", theorem="")
    for w in ctx.sweep():
        sheaf = bmp_sheaf(group, w, ctx.field, frozenset(), ctx.dmax_slack)
        result.checked += 2
        report = is_flabby(sheaf, sheaf.degree_cap)
        if not report.flabby:
            result.failures.append(
                f"B_{_name(group, w)} not flabby at {report.witness_vertex or 'e'} in degree {report.witness_degree}"
            )
        axioms = verify_axioms(sheaf, sheaf.degree_cap)
        for failure in axioms.failures:
            result.failures.append(f"B_{_name(group, w)} axiom {failure.axiom}: {failure.detail}")
    return result


def lemmas_suite(ctx: SuiteContext) -> SuiteResult:
    group = ctx.group
    result = SuiteResult(suite="lemmas", theorem="")
    for i in range(1, group.rank + 1):
        result.checked += 1
        try:
            cs_element(group, group.s(i), bruhat_graph(group), ctx.field)
        except PreconditionError as exc:
            result.failures.append(exc.detail)
    for y, w, s, i in _triples(group, ctx.sweep()):
        ys, ws = y * s, w * s
        label = f"({_name(group, y)},{_name(group, w)},s{i})"
        if group.bruhat_lt(ys, y):
            result.checked += 2
            expected = {t.element for t in group.g_l_set(y, w)} | {y * s * group.inverse(y)}
            if {t.element for t in group.g_l_set(ys, w)} != expected:
                result.failures.append(f"reflection set identity fails at {label}")
            interval = [x for x in group.interval(ys, w) if x != ys and x != y]
            keys = {group.index(x) for x in interval}
            if any(group.index(x * s) not in keys for x in interval):
                result.failures.append(f"[ys,w] minus {{ys,y}} not stable under x -> xs at {label}")
        if y != w:
            result.checked += 1
            if not group.check_lifting(y, w, s).holds:
                result.failures.append(f"lifting property fails at {label}")
        if not group.bruhat_leq(y, ws):
            result.checked += 1
            source, target = group.interval(y, w), group.interval(ys, ws)
            image = {group.index(x * s) for x in source}
            order_kept = all(
                group.bruhat_leq(a, b) == group.bruhat_leq(a * s, b * s) for a in source for b in source
            )
            if image != {group.index(x) for x in target} or not order_kept:
                result.failures.append(f"x -> xs is not an order isomorphism [y,w] -> [ys,ws] at {label}")
    return result


def pullback_suite(ctx: SuiteContext) -> SuiteResult:
    group, field = ctx.group, ctx.field
    result = SuiteResult(suite="pullback", theorem="")
    inverse = inverse_automorphism(group)
    result.checked += 1
    report = validate_morphism(inverse, field=field, isomorphism=True)
    result.failures += [f"inverse automorphism: {v}" for v in report.violations]
    for w in ctx.sweep():
        w_inv = group.inverse(w)
        source_ids = [group.word(x) for x in group.lower_interval(w)]
        f = restrict_morphism(inverse, source_ids)
        pulled = pullback(f, bmp_sheaf(group, w_inv, field, frozenset(), ctx.dmax_slack))
        own = bmp_sheaf(group, w, field, frozenset(), ctx.dmax_slack)
        result.checked += 1
        _compare_pullback(result, f"inverse at {_name(group, w)}", pulled, own.stalks, own.degree_cap)
    for y, w, s, i in _triples(group, ctx.sweep()):
        ws = w * s
        if group.bruhat_leq(y, ws):
            continue
        f = right_mult_isomorphism(group, y, w, s)
        label = f"right s{i} on [{_name(group, y)},{_name(group, w)}]"
        result.checked += 1
        report = validate_morphism(f, field=field, isomorphism=True)
        if not report.valid:
            result.failures += [f"{label}: {v}" for v in report.violations]
            continue
        target = restrict_sheaf(bmp_sheaf(group, ws, field, frozenset(), ctx.dmax_slack), f.target.ids)
        own = restrict_sheaf(bmp_sheaf(group, w, field, frozenset(), ctx.dmax_slack), f.source.ids)
        cap = bmp_sheaf(group, w, field, frozenset(), ctx.dmax_slack).degree_cap
        _compare_pullback(result, label, pullback(f, target), own.stalks, cap)
    return result


def _compare_pullback(result: SuiteResult, label: str, pulled, stalks, cap: int) -> None:
    if pulled.stalks != stalks:
        result.failures.append(f"{label}: pulled-back stalks differ from the canonical sheaf")
    axioms = verify_axioms(pulled, cap)
    for failure in axioms.failures:
        result.failures.append(f"{label}: axiom {failure.axiom} at {failure.vertex}: {failure.detail}")


def gkm_suite(ctx: SuiteContext) -> SuiteResult:
    group, field = ctx.group, ctx.field
    result = SuiteResult(suite="gkm", theorem="", checked=1)
    report = is_gkm_pair(bruhat_graph(group), field)
    expected = ctx.exact or (group.datum.type_label.startswith("A") and field.characteristic > 2)
    if report.is_gkm:
        return result
    line = f"Bruhat graph of {group.datum.type_label} is not GKM over {field.label} ({len(report.violations)} violations)"
    (result.failures if expected else result.findings).append(line)
    return result


SUITES: dict[str, tuple[str, Callable[[SuiteContext], SuiteResult]]] = {
    "kl-identities": ("KL polynomials: inverse symmetry and right multiplication by s", kl_identities_suite),
    "ranks-vs-kl": ("graded ranks of canonical sheaves equal KL polynomials in characteristic 0", ranks_vs_kl_suite),
    "thm58": ("ranks are invariant under inversion, and under right multiplication by s when y is not below ws", rank_symmetry_suite),
    "thm62": ("rank of B_w at y equals rank at ys whenever ws < w", rank_descent_suite),
    "parabolic": ("parabolic canonical sheaves: ranks match B_{ww_J} at yw_J and are constant on cosets", parabolic_suite),
    "smoothness": ("every stalk of B_w0 is free of rank 1", smoothness_suite),
    "gamma-div": ("sections over [ys,w] minus {ys,y} have Hilbert series divisible by 1+q", gamma_div_suite),
    "flabby": ("canonical sheaves are flabby and satisfy their characterising axioms", flabby_suite),
    "lemmas": ("reflection sets, s-stable intervals, lifting property, interval isomorphisms, c_s", lemmas_suite),
    "pullback": ("pullbacks of canonical sheaves along isomorphisms are canonical", pullback_suite),
    "gkm": ("type A Bruhat graphs are GKM over fields of characteristic other than 2", gkm_suite),
}


# descriptive spellings accepted on the command line
SUITE_ALIASES = {
    "rank-symmetry": "thm58",
    "rank-descent": "thm62",
}


def suite_names(requested: Iterable[str]) -> list[str]:
    names: list[str] = []
    for name in requested:
        name = SUITE_ALIASES.get(name, name)
        if name == "all":
            names += [n for n in SUITES if n not in names]
        elif name not in SUITES:
            raise PreconditionError(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all")
        elif name not in names:
            names.append(name)
    return names


def run_suite(name: str, ctx: SuiteContext) -> SuiteResult:
    theorem, suite = SUITES[name]
    logger.info("running suite %s on %s over %s", name, ctx.group.datum.type_label, ctx.field)
    result = suite(ctx)
    result.theorem = theorem
    logger.info("suite %s: %d checked, %d skipped, %d failures", name, result.checked, result.skipped, len(result.failures))
    return result


def run_suites(requested: Iterable[str], ctx: SuiteContext) -> VerificationReport:
    results = [run_suite(name, ctx) for name in suite_names(requested)]
    return VerificationReport(
        type=ctx.group.datum.type_label,
        field=ctx.field.label,
        suites=results,
        passed=all(r.passed for r in results),
    )
