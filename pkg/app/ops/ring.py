from functools import lru_cache
from typing import Any, Sequence

from app.lib.exceptions import FieldMismatchError, LabelVanishesError, PreconditionError, SingularMatrixError
from app.lib.linalg import is_invertible
from app.models.ring import CoefficientField, Exponent, LatticeVector, Polynomial


@lru_cache(maxsize=None)
def monomial_basis(d: int, n: int) -> tuple[Exponent, ...]:
    """Exponent vectors of degree d (variables in degree 2), graded-lex order."""
    if d < 0 or d % 2:
        raise PreconditionError(f"monomial degree must be even and nonnegative, got {d}")
    return tuple(_compositions(d // 2, n))


def _compositions(total: int, n: int):
    if n == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, n - 1):
            yield (first,) + rest


def label_pivot(label: LatticeVector, field: CoefficientField) -> int:
    for i, value in enumerate(label):
        if not field.is_zero(field(value)):
            return i
    raise LabelVanishesError(f"label {tuple(label)} vanishes over {field}")


class LinearReducer:
    """Canonical representatives in S_k/(l) for one label l, with a monomial cache."""

    def __init__(self, label: LatticeVector, field: CoefficientField):
        self.label = tuple(label)
        self.field = field
        self.rank = len(self.label)
        self.pivot = label_pivot(self.label, field)
        coefficients = [field(v) for v in self.label]
        scale = field.inv(coefficients[self.pivot])
        # x_pivot = sum over j != pivot of substitution[j] * x_j modulo l
        self.substitution = {
            j: field.normalize(-coefficients[j] * scale)
            for j in range(self.rank)
            if j != self.pivot and not field.is_zero(coefficients[j])
        }
        self._powers: list[dict[Exponent, Any]] = [{(0,) * self.rank: field.one}]
        self._cache: dict[Exponent, dict[Exponent, Any]] = {}

    def _pivot_power(self, k: int) -> dict[Exponent, Any]:
        field = self.field
        while len(self._powers) <= k:
            previous = self._powers[-1]
            nxt: dict[Exponent, Any] = {}
            for exponent, value in previous.items():
                for j, factor in self.substitution.items():
                    shifted = list(exponent)
                    shifted[j] += 1
                    shifted = tuple(shifted)
                    total = field.normalize(nxt.get(shifted, field.zero) + value * factor)
                    if field.is_zero(total):
                        nxt.pop(shifted, None)
                    else:
                        nxt[shifted] = total
            self._powers.append(nxt)
        return self._powers[k]

    def reduce_monomial(self, exponent: Exponent) -> dict[Exponent, Any]:
        cached = self._cache.get(exponent)
        if cached is not None:
            return cached
        k = exponent[self.pivot]
        if k == 0:
            result = {exponent: self.field.one}
        else:
            rest = list(exponent)
            rest[self.pivot] = 0
            result = {
                tuple(a + b for a, b in zip(term, rest)): value
                for term, value in self._pivot_power(k).items()
            }
        self._cache[exponent] = result
        return result

    def reduce_terms(self, terms: dict[Exponent, Any]) -> dict[Exponent, Any]:
        field = self.field
        out: dict[Exponent, Any] = {}
        for exponent, value in terms.items():
            for reduced, factor in self.reduce_monomial(exponent).items():
                total = field.normalize(out.get(reduced, field.zero) + value * factor)
                if field.is_zero(total):
                    out.pop(reduced, None)
                else:
                    out[reduced] = total
        return out

    def reduce(self, p: Polynomial) -> Polynomial:
        if p.field != self.field or p.rank != self.rank:
            raise FieldMismatchError(f"polynomial over {p.field}[{p.rank}] reduced by label over {self.field}[{self.rank}]")
        return Polynomial.from_normalized(self.field, self.rank, self.reduce_terms(p.terms))

    def is_reduced_monomial(self, exponent: Exponent) -> bool:
        return exponent[self.pivot] == 0


@lru_cache(maxsize=4096)
def reducer_for(label: LatticeVector, field: CoefficientField) -> LinearReducer:
    return LinearReducer(tuple(label), field)


def reduce_mod_linear(p: Polynomial, label: LatticeVector) -> Polynomial:
    if len(label) != p.rank:
        raise PreconditionError(f"label {tuple(label)} has rank {len(label)}, polynomial has rank {p.rank}")
    return reducer_for(tuple(label), p.field).reduce(p)


def twist_by_automorphism(p: Polynomial, g: Sequence[Sequence[Any]]) -> Polynomial:
    """Apply the ring automorphism x_i -> sum_k g[k][i] x_k.

    Matrices act on coordinate columns, so twist(twist(p, h), g) == twist(p, g @ h).
    """
    field, n = p.field, p.rank
    if len(g) != n or any(len(row) != n for row in g):
        raise PreconditionError(f"twist matrix must be {n}x{n}")
    if not is_invertible(field, g):
        raise SingularMatrixError(f"twist matrix is singular over {field}")
    images = [
        Polynomial(field, n, {tuple(1 if m == k else 0 for m in range(n)): g[k][i] for k in range(n)})
        for i in range(n)
    ]
    powers: dict[tuple[int, int], Polynomial] = {}
    result = Polynomial.zero(field, n)
    for exponent, value in p.terms.items():
        term = Polynomial.constant(field, n, value)
        for i, a in enumerate(exponent):
            if a:
                if (i, a) not in powers:
                    powers[(i, a)] = images[i] ** a
                term = term * powers[(i, a)]
        result = result + term
    return result


def linear_form(field: CoefficientField, vector: LatticeVector) -> Polynomial:
    return Polynomial.linear_form(field, vector)


def is_zero_in(field: CoefficientField, vector: LatticeVector) -> bool:
    return all(field.is_zero(field(v)) for v in vector)
