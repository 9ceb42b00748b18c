from pydantic import BaseModel
from typing import List, Optional

from app.schemas.graph import SCHEMA_VERSION


class RankRow(BaseModel):
    w: str
    y: str
    field: str
    coefficients: List[int]
    converged: bool
    wall_time: Optional[float] = None


class RankTable(BaseModel):
    schema_version: int = SCHEMA_VERSION
    type: str
    J: List[int] = []
    rows: List[RankRow]


class KLRow(BaseModel):
    y: str
    w: str
    coefficients: List[int]


class KLTable(BaseModel):
    schema_version: int = SCHEMA_VERSION
    type: str
    J: List[int] = []
    rows: List[KLRow]
