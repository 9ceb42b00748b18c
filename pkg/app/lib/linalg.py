"""Exact linear algebra over Q and F_p on sparse vectors (dicts keyed by sortable coordinates)."""
from typing import Any, Hashable, Iterable, Sequence

from app.lib.exceptions import SingularMatrixError
from app.models.ring import CoefficientField

SparseVector = dict[Hashable, Any]


def axpy(field: CoefficientField, target: SparseVector, factor: Any, source: SparseVector) -> None:
    """target -= factor * source, in place, dropping zeros."""
    for key, value in source.items():
        total = field.normalize(target.get(key, field.zero) - factor * value)
        if field.is_zero(total):
            target.pop(key, None)
        else:
            target[key] = total


class EchelonForm:
    """Incremental row echelon form.

    Each stored row has a distinct leading (smallest) key normalised to 1.
    Rows carry a tag recording which inserted vectors they combine, so a
    dependent insert yields the linear relation among the inserted vectors.
    """

    def __init__(self, field: CoefficientField):
        self.field = field
        self._rows: dict[Hashable, tuple[SparseVector, SparseVector]] = {}
        self._pivots: list[Hashable] = []

    def __len__(self) -> int:
        return len(self._rows)

    @property
    def rank(self) -> int:
        return len(self._rows)

    def reduce(self, vector: SparseVector, tag: SparseVector | None = None) -> tuple[SparseVector, SparseVector]:
        vector = dict(vector)
        tag = dict(tag or {})
        if not vector:
            return vector, tag
        for pivot in self._pivots:
            value = vector.get(pivot)
            if value is None:
                continue
            row, row_tag = self._rows[pivot]
            axpy(self.field, vector, value, row)
            axpy(self.field, tag, value, row_tag)
            if not vector:
                break
        return vector, tag

    def contains(self, vector: SparseVector) -> bool:
        residual, _ = self.reduce(vector)
        return not residual

    def insert(self, vector: SparseVector, tag: SparseVector | None = None) -> SparseVector | None:
        """Add `vector`; return None when it was independent, else the relation tag."""
        residual, residual_tag = self.reduce(vector, tag)
        if not residual:
            return residual_tag
        field = self.field
        pivot = min(residual)
        scale = field.inv(residual[pivot])
        row = {k: field.normalize(v * scale) for k, v in residual.items()}
        row_tag = {k: field.normalize(v * scale) for k, v in residual_tag.items()}
        self._rows[pivot] = (row, row_tag)
        self._insert_pivot(pivot)
        return None

    def _insert_pivot(self, pivot: Hashable) -> None:
        lo, hi = 0, len(self._pivots)
        while lo < hi:
            mid = (lo + hi) // 2
            if self._pivots[mid] < pivot:
                lo = mid + 1
            else:
                hi = mid
        self._pivots.insert(lo, pivot)


def rank(field: CoefficientField, vectors: Iterable[SparseVector]) -> int:
    echelon = EchelonForm(field)
    for vector in vectors:
        echelon.insert(vector)
    return echelon.rank


def dense_to_sparse(row: Sequence[Any], field: CoefficientField) -> SparseVector:
    out = {}
    for i, value in enumerate(row):
        value = field(value)
        if not field.is_zero(value):
            out[i] = value
    return out


def is_invertible(field: CoefficientField, matrix: Sequence[Sequence[Any]]) -> bool:
    n = len(matrix)
    return rank(field, (dense_to_sparse(row, field) for row in matrix)) == n


def inverse_matrix(field: CoefficientField, matrix: Sequence[Sequence[Any]]) -> list[list[Any]]:
    """Gauss-Jordan inverse over `field`."""
    n = len(matrix)
    work = [[field(v) for v in row] + [field.one if i == j else field.zero for j in range(n)]
            for i, row in enumerate(matrix)]
    for col in range(n):
        pivot_row = next((r for r in range(col, n) if not field.is_zero(work[r][col])), None)
        if pivot_row is None:
            raise SingularMatrixError(f"matrix is not invertible over {field}")
        work[col], work[pivot_row] = work[pivot_row], work[col]
        scale = field.inv(work[col][col])
        work[col] = [field.normalize(v * scale) for v in work[col]]
        for r in range(n):
            if r != col and not field.is_zero(work[r][col]):
                factor = work[r][col]
                work[r] = [field.normalize(a - factor * b) for a, b in zip(work[r], work[col])]
    return [row[n:] for row in work]
