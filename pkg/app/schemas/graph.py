from pydantic import BaseModel, ConfigDict
from typing import List

SCHEMA_VERSION = 1


class VertexItem(BaseModel):
    id: str
    word: str
    length: int


class EdgeItem(BaseModel):
    tail: str
    head: str
    label: List[int]


class GraphDocument(BaseModel):
    schema_version: int = SCHEMA_VERSION
    rank: int
    vertices: List[VertexItem]
    edges: List[EdgeItem]
    order: List[List[str]]

    model_config = ConfigDict(extra='forbid')
