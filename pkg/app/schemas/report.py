from pydantic import BaseModel
from typing import List, Optional

from app.schemas.graph import SCHEMA_VERSION


class GKMViolation(BaseModel):
    vertex: str
    edge_a: List[str]
    edge_b: List[str]


class GKMReport(BaseModel):
    schema_version: int = SCHEMA_VERSION
    field: str
    is_k_moment_graph: bool
    is_gkm: bool
    vanishing_labels: List[List[str]] = []
    violations: List[GKMViolation] = []


class MorphismReport(BaseModel):
    valid: bool
    violations: List[str] = []


class AxiomFailure(BaseModel):
    axiom: str
    vertex: Optional[str] = None
    degree: Optional[int] = None
    detail: str


class AxiomReport(BaseModel):
    passed: bool
    degree_cap: int
    failures: List[AxiomFailure] = []


class FlabbinessReport(BaseModel):
    flabby: bool
    degree_cap: int
    witness_vertex: Optional[str] = None
    witness_degree: Optional[int] = None


class IdentityReport(BaseModel):
    checked: int
    violations: List[str] = []

    @property
    def passed(self) -> bool:
        return not self.violations


class SuiteResult(BaseModel):
    suite: str
    theorem: str
    checked: int = 0
    skipped: int = 0
    failures: List[str] = []
    findings: List[str] = []

    @property
    def passed(self) -> bool:
        return not self.failures


class VerificationReport(BaseModel):
    schema_version: int = SCHEMA_VERSION
    type: str
    field: str
    suites: List[SuiteResult]
    passed: bool
