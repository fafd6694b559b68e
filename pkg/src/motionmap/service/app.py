"""HTTP + websocket service around the mapping engine.

Batch endpoints take whole traces and return whole results; the /session
websocket speaks the live message protocol (see session.py).  All errors
come back as {"error": {"kind": parse|config|engine, "message": ...}} with
status 400 so clients can map them onto exit codes.
"""

from __future__ import annotations

import json
from pathlib import Path

from fastapi import FastAPI, Request, WebSocket, WebSocketDisconnect
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from ..compliance import check_trace, classify
from ..engine import MappingConfig, MappingKind, parse_mapping_kind
from ..errors import ConfigError, EngineError, TraceError
from ..gains import parse_gain_spec
from ..replay import object_trace, replay
from ..report import render_check_report, render_classify_summary
from ..traces import gen_trajectory, parse_trace, serialize_trace
from .models import (
    CheckRequest,
    CheckResponse,
    ClassifyRequest,
    ClassifyResponse,
    GenRequest,
    GenResponse,
    HealthResponse,
    MappingParams,
    RunRequest,
    RunResponse,
)
from .session import ObjectStore, SessionDriver, default_config

_ERROR_KINDS = {TraceError: "parse", ConfigError: "config", EngineError: "engine"}


def _config_from(params: MappingParams) -> MappingConfig:
    return MappingConfig(
        parse_mapping_kind(params.mapping),
        parse_gain_spec(params.gain_t),
        parse_gain_spec(params.gain_r),
        params.ego_t,
        params.ego_r,
    )


def create_app(session_config: MappingConfig | None = None) -> FastAPI:
    app = FastAPI(title="motionmap", docs_url=None, redoc_url=None)
    app.state.store = ObjectStore()
    app.state.session_config = session_config if session_config is not None else default_config()

    for exc_type, kind in _ERROR_KINDS.items():

        def handler(request: Request, exc: Exception, kind: str = kind) -> JSONResponse:
            return JSONResponse(
                status_code=400,
                content={"error": {"kind": kind, "message": str(exc)}},
            )

        app.add_exception_handler(exc_type, handler)

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse()

    @app.post("/run", response_model=RunResponse)
    def run(req: RunRequest) -> RunResponse:
        trace = parse_trace(req.trace)
        config = _config_from(req)
        result = replay(trace, config)
        return RunResponse(
            object_trace=serialize_trace(object_trace(result, trace)),
            gains=list(result.gains),
            metrics=vars(result.metrics),
        )

    @app.post("/check", response_model=CheckResponse)
    def check(req: CheckRequest) -> CheckResponse:
        if not req.tol > 0:
            raise ConfigError("tol must be > 0")
        trace = parse_trace(req.trace)
        config = _config_from(req)
        outcome = check_trace(trace, config, req.tol)
        return CheckResponse(
            report=render_check_report(outcome),
            noncompliant_t=outcome.noncompliant_t,
            noncompliant_r=outcome.noncompliant_r,
            nulling=outcome.nulling,
        )

    @app.post("/classify", response_model=ClassifyResponse)
    def classify_all(req: ClassifyRequest) -> ClassifyResponse:
        reports = [
            classify(kind, seed=req.seed, trials=req.trials, tol=req.tol)
            for kind in MappingKind
        ]
        verdicts = {
            rep.mapping.value: {key: cell.verdict for key, cell in rep.cells.items()}
            for rep in reports
        }
        return ClassifyResponse(report=render_classify_summary(reports), verdicts=verdicts)

    @app.post("/gen", response_model=GenResponse)
    def gen(req: GenRequest) -> GenResponse:
        trace = gen_trajectory(req.kind, req.params, req.seed)
        return GenResponse(trace=serialize_trace(trace))

    @app.websocket("/session")
    async def session_ws(ws: WebSocket) -> None:
        await ws.accept()
        driver = SessionDriver(config=app.state.session_config, store=app.state.store)
        try:
            while True:
                frame = await ws.receive_text()
                for line in frame.splitlines():
                    if not line.strip():
                        continue
                    for resp in driver.handle_line(line):
                        await ws.send_text(json.dumps(resp, separators=(",", ":")))
        except WebSocketDisconnect:
            pass

    # serve the browser playground when a build is present
    for candidate in (
        Path(__file__).resolve().parents[3] / "frontend" / "dist",
        Path.cwd() / "frontend" / "dist",
    ):
        if candidate.is_dir():
            app.mount("/playground", StaticFiles(directory=str(candidate), html=True), name="playground")
            break

    return app
