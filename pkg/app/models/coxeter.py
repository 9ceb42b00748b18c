from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from app.lib.exceptions import NonFiniteCartanError, UnsupportedTypeError
from app.models.ring import LatticeVector

SUPPORTED_TYPES = ("A1", "A2", "A3", "A4", "B2", "B3", "C2", "C3", "D4", "G2")

# finite-type products a_ij * a_ji
_ALLOWED_BONDS = {0, 1, 2, 3}


def _type_a(n: int) -> list[list[int]]:
    return [[2 if i == j else -1 if abs(i - j) == 1 else 0 for j in range(n)] for i in range(n)]


def _cartan_matrix(label: str) -> list[list[int]]:
    family, n = label[0], int(label[1:])
    matrix = _type_a(n)
    if family == "A":
        return matrix
    if family == "B":
        matrix[n - 1][n - 2] = -2
        return matrix
    if family == "C":
        matrix[n - 2][n - 1] = -2
        return matrix
    if family == "D":
        matrix = _type_a(n)
        matrix[n - 2][n - 1] = matrix[n - 1][n - 2] = 0
        matrix[n - 3][n - 1] = matrix[n - 1][n - 3] = -1
        return matrix
    if family == "G":
        return [[2, -3], [-1, 2]]
    raise UnsupportedTypeError(f"unsupported Cartan type {label!r}")


@dataclass(frozen=True)
class CartanDatum:
    """Cartan type plus matrix with a_ij = <alpha_j, coroot_i>."""

    type_label: str
    cartan_matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        a = self.cartan_matrix
        n = len(a)
        if n == 0 or any(len(row) != n for row in a):
            raise NonFiniteCartanError("Cartan matrix must be square and nonempty")
        for i in range(n):
            if a[i][i] != 2:
                raise NonFiniteCartanError(f"diagonal entry a[{i}][{i}] must be 2")
            for j in range(n):
                if i == j:
                    continue
                if a[i][j] > 0:
                    raise NonFiniteCartanError(f"off-diagonal entry a[{i}][{j}] must be <= 0")
                if (a[i][j] == 0) != (a[j][i] == 0):
                    raise NonFiniteCartanError(f"a[{i}][{j}] and a[{j}][{i}] must vanish together")
                if a[i][j] * a[j][i] not in _ALLOWED_BONDS:
                    raise NonFiniteCartanError(f"bond between {i + 1} and {j + 1} is not of finite type")

    @classmethod
    def from_label(cls, label: str) -> "CartanDatum":
        label = label.strip().upper()
        if label not in SUPPORTED_TYPES:
            raise UnsupportedTypeError(
                f"unsupported Cartan type {label!r}; expected one of {', '.join(SUPPORTED_TYPES)}"
            )
        return cls(label, tuple(tuple(row) for row in _cartan_matrix(label)))

    @property
    def rank(self) -> int:
        return len(self.cartan_matrix)


@dataclass(frozen=True)
class RootSystem:
    simple_roots: tuple[LatticeVector, ...]
    simple_coroots: tuple[LatticeVector, ...]
    positive_roots: tuple[LatticeVector, ...]
    coroot_of: Mapping[LatticeVector, LatticeVector] = field(hash=False)

    @property
    def positive_coroots(self) -> tuple[LatticeVector, ...]:
        return tuple(self.coroot_of[root] for root in self.positive_roots)


class WeylElement:
    """Element of W given by its integer matrix on the coroot lattice (columns = images of simple coroots)."""

    __slots__ = ("matrix", "key")

    def __init__(self, matrix):
        matrix = np.array(matrix, dtype=np.int64)
        matrix.setflags(write=False)
        self.matrix = matrix
        self.key = matrix.tobytes()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WeylElement):
            return NotImplemented
        return self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        return WeylElement(self.matrix @ other.matrix)

    @property
    def rank(self) -> int:
        return self.matrix.shape[0]

    def act(self, vector: LatticeVector) -> LatticeVector:
        return tuple(int(v) for v in self.matrix @ np.array(vector, dtype=np.int64))

    def as_tuple(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(int(v) for v in row) for row in self.matrix)

    def column(self, i: int) -> LatticeVector:
        return tuple(int(v) for v in self.matrix[:, i])

    def __repr__(self) -> str:
        return f"WeylElement({self.as_tuple()})"


@dataclass(frozen=True)
class Reflection:
    element: WeylElement
    positive_root: LatticeVector
    coroot: LatticeVector


@dataclass(frozen=True)
class ParabolicQuotient:
    J: frozenset[int]
    min_reps: tuple[WeylElement, ...]
    w_J: WeylElement


@dataclass(frozen=True)
class LiftingCheck:
    descent_case: bool
    ascent_case: bool
    us_below_v: bool

    @property
    def holds(self) -> bool:
        return self.descent_case and self.ascent_case and self.us_below_v
