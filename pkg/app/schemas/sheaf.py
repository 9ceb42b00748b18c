from pydantic import BaseModel, ConfigDict
from typing import List

from app.schemas.graph import SCHEMA_VERSION, GraphDocument


class PolynomialTerm(BaseModel):
    exponents: List[int]
    numerator: int
    denominator: int = 1


class StalkItem(BaseModel):
    vertex: str
    generator_degrees: List[int]


class EdgeModuleItem(BaseModel):
    tail: str
    head: str
    label: List[int]
    generator_degrees: List[int]


class RestrictionItem(BaseModel):
    tail: str
    head: str
    # rows index head generators, columns index tail generators
    entries: List[List[List[PolynomialTerm]]]


class SheafDocument(BaseModel):
    schema_version: int = SCHEMA_VERSION
    field: str
    graph: GraphDocument
    stalks: List[StalkItem]
    edge_modules: List[EdgeModuleItem]
    restrictions: List[RestrictionItem]

    model_config = ConfigDict(extra='forbid')
