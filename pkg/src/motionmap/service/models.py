"""Request / response bodies for the HTTP endpoints."""

from __future__ import annotations

from typing import Any

from pydantic import BaseModel, Field


class HealthResponse(BaseModel):
    status: str = "ok"
    name: str = "motionmap"
    version: str = "1"


class MappingParams(BaseModel):
    mapping: str
    gain_t: str = "constant:1"
    gain_r: str = "constant:1"
    ego_t: bool = False
    ego_r: bool = False


class RunRequest(MappingParams):
    trace: str


class MetricsBody(BaseModel):
    duration_s: float
    steps: int
    clutch_count: int
    path_len_t: float
    path_len_r: float
    mean_step_t: float
    mean_step_r: float
    max_excursion_t: float
    max_excursion_r: float


class RunResponse(BaseModel):
    object_trace: str
    gains: list[tuple[int, float, float]]
    metrics: MetricsBody


class CheckRequest(RunRequest):
    tol: float = 1e-9


class CheckResponse(BaseModel):
    report: str
    noncompliant_t: int
    noncompliant_r: int
    nulling: str


class ClassifyRequest(BaseModel):
    seed: int = 42
    trials: int = Field(default=1000, ge=1)
    tol: float = Field(default=1e-9, gt=0)


class ClassifyResponse(BaseModel):
    report: str
    verdicts: dict[str, dict[str, str]]


class GenRequest(BaseModel):
    kind: str
    params: dict[str, Any] = Field(default_factory=dict)
    seed: int = 0


class GenResponse(BaseModel):
    trace: str


class ErrorInfo(BaseModel):
    kind: str  # parse | config | engine
    message: str


class ErrorResponse(BaseModel):
    error: ErrorInfo
