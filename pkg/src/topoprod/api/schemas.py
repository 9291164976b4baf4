"""Request and response schemas for the HTTP service.

Structured payloads (words, sequences, models, loops) travel as JSON trees
in the canonical wire format and are validated by the codec; the schemas
here type the flat parts of each request and the closed response shapes.
"""

from __future__ import annotations

from typing import Optional, Union

from pydantic import BaseModel, Field


class ClassifyRequest(BaseModel):
    model: dict


class IsoRequest(BaseModel):
    left: dict
    right: dict


class ProjectRequest(BaseModel):
    word: dict
    n: int = Field(ge=0)


class EqRequest(BaseModel):
    left: dict
    right: dict
    n: int = Field(default=32, ge=0)


class NeqRequest(BaseModel):
    left: dict
    right: dict
    nMax: int = Field(default=32, ge=0)


class WordPairRequest(BaseModel):
    left: dict
    right: dict


class WordRequest(BaseModel):
    word: dict


class RootRequest(BaseModel):
    word: dict
    k: int = Field(ge=1)


class LoopRequest(BaseModel):
    loop: dict


class SeqPairRequest(BaseModel):
    left: dict
    right: dict


class RegroupRequest(BaseModel):
    seq: dict
    grouping: dict


class SumRequest(BaseModel):
    seq: dict
    m: int = Field(ge=0)


class HealthResponse(BaseModel):
    status: str


class EqResponse(BaseModel):
    equal: bool
    level: int


class NeqResponse(BaseModel):
    separated: bool
    level: Optional[int]
    checkedUpTo: int


class SumResponse(BaseModel):
    m: int
    sum: Union[dict, str]
