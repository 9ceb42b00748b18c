from dataclasses import dataclass, field
from typing import Mapping

from app.lib.exceptions import PreconditionError
from app.models.moment_graph import MomentGraph
from app.models.ring import CoefficientField, LatticeVector, Polynomial

EdgeKey = tuple[str, str]
# a section in one degree: vertex -> coordinates in that stalk's degree slice
Section = dict[str, tuple]


@dataclass(frozen=True)
class StalkPresentation:
    """Graded free module sum of S_k{-d_i}; an empty degree tuple is the zero module."""

    generator_degrees: tuple[int, ...]

    def __post_init__(self):
        if any(d < 0 or d % 2 for d in self.generator_degrees):
            raise PreconditionError(f"generator degrees must be even and nonnegative: {self.generator_degrees}")
        if list(self.generator_degrees) != sorted(self.generator_degrees):
            raise PreconditionError(f"generator degrees must be sorted: {self.generator_degrees}")

    @property
    def rank(self) -> int:
        return len(self.generator_degrees)


@dataclass(frozen=True)
class EdgeModulePresentation:
    head: str
    generator_degrees: tuple[int, ...]
    label: LatticeVector


@dataclass(frozen=True)
class RestrictionMatrix:
    """Tail restriction rho_{x,E}; rows index head generators, columns tail generators."""

    source: str
    edge: EdgeKey
    entries: tuple[tuple[Polynomial, ...], ...]


@dataclass
class SheafData:
    graph: MomentGraph
    field: CoefficientField
    stalks: dict[str, StalkPresentation]
    edge_modules: dict[EdgeKey, EdgeModulePresentation]
    restrictions: dict[EdgeKey, RestrictionMatrix]

    def stalk(self, vertex_id: str) -> StalkPresentation:
        return self.stalks[vertex_id]


@dataclass
class BradenMacPhersonSheaf(SheafData):
    top: str = ""
    degree_cap: int = 0
    window: dict[str, int] = field(default_factory=dict)
    converged: dict[str, bool] = field(default_factory=dict)


@dataclass(frozen=True)
class SectionSlice:
    vertices: tuple[str, ...]
    degree: int
    basis: tuple[Section, ...]

    @property
    def dimension(self) -> int:
        return len(self.basis)


@dataclass(frozen=True)
class StructureAlgebraElement:
    components: Mapping[str, Polynomial]

    def degree(self) -> int:
        degrees = {p.degree() for p in self.components.values() if not p.is_zero()}
        if len(degrees) > 1:
            raise PreconditionError("structure algebra element is not homogeneous")
        return degrees.pop() if degrees else 0

    def __mul__(self, other: "StructureAlgebraElement") -> "StructureAlgebraElement":
        keys = self.components.keys() & other.components.keys()
        return StructureAlgebraElement({k: self.components[k] * other.components[k] for k in keys})
