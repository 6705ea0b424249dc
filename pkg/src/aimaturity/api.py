"""HTTP API over the engine service.

Resource paths and payloads are documented in ``docs/http-api.md``. Every
engine error maps to exactly one machine code; responses that touch an
assessment carry its current revision so clients can drive the optimistic
concurrency loop. When a built UI bundle is configured it is served from the
root path, with the API namespaced under ``/api``.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import Depends, FastAPI, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .config import ServiceConfig
from .errors import (
    CorruptDocument,
    DomainError,
    GranularityMismatch,
    GranularityUnsupported,
    InapplicableTarget,
    IntegrityError,
    MaturityError,
    MixedOrganizations,
    NoData,
    NotFound,
    ParseError,
    RevisionConflict,
    ScopeUnsupported,
    Unauthorized,
    UnknownSystem,
    ValidationError,
)
from .questionnaire import LifecycleStage
from .service import EngineService, questionnaire_payload
from .session import GranularityMode
from .storage import AssessmentDocument

_STATUS_BY_ERROR = {
    ParseError: 400,
    IntegrityError: 400,
    DomainError: 400,
    ValidationError: 400,
    InapplicableTarget: 400,
    GranularityMismatch: 400,
    GranularityUnsupported: 400,
    ScopeUnsupported: 400,
    UnknownSystem: 404,
    NoData: 404,
    MixedOrganizations: 400,
    Unauthorized: 401,
    RevisionConflict: 409,
    NotFound: 404,
    CorruptDocument: 500,
}


def _status_for(error: MaturityError) -> int:
    for klass, status in _STATUS_BY_ERROR.items():
        if isinstance(error, klass):
            return status
    return 500


class SystemPayload(BaseModel):
    system_id: str
    name: str = ""
    stage: str
    description: str = ""


class CreateAssessmentPayload(BaseModel):
    org_id: str
    org_name: str = ""
    scope: str
    granularity: str
    systems: list[SystemPayload]
    assessment_id: str | None = None
    as_of: str | None = None


class ResponsePayload(BaseModel):
    expected_revision: int
    metrics: dict | None = None
    na: bool = False
    evidence: list[dict] = Field(default_factory=list)
    note: str = ""


def _document_payload(document: AssessmentDocument) -> dict:
    return {
        "revision": document.revision,
        "checksum": document.checksum,
        "saved_at": document.saved_at,
        "assessment": document.assessment.to_dict(),
    }


def create_app(config: ServiceConfig, service: EngineService | None = None) -> FastAPI:
    service = service or EngineService.from_config(config)
    app = FastAPI(title="aimaturity", version="0.1.0")

    @app.exception_handler(MaturityError)
    async def _engine_error(_request: Request, error: MaturityError):
        return JSONResponse(
            status_code=_status_for(error),
            content={"code": error.code, "message": error.message, "ids": list(error.ids)},
        )

    async def _authorized(request: Request) -> None:
        if config.api_token is None:
            return
        header = request.headers.get("authorization", "")
        if header != f"Bearer {config.api_token}":
            raise Unauthorized("missing or invalid bearer token")

    auth = Depends(_authorized)

    @app.get("/api/questionnaire", dependencies=[auth])
    def get_questionnaire(stage: str | None = None, granularity: str | None = None):
        return questionnaire_payload(
            service.questionnaire,
            LifecycleStage.from_token(stage) if stage else None,
            GranularityMode.from_token(granularity) if granularity else None,
        )

    @app.post("/api/assessments", status_code=201, dependencies=[auth])
    def create_assessment(payload: CreateAssessmentPayload):
        document = service.create(
            org_id=payload.org_id,
            org_name=payload.org_name,
            scope=payload.scope,
            granularity=payload.granularity,
            systems=[s.model_dump() for s in payload.systems],
            assessment_id=payload.assessment_id,
            as_of=payload.as_of,
        )
        return _document_payload(document)

    @app.get("/api/assessments", dependencies=[auth])
    def list_assessments(org: str | None = None):
        return {"assessments": [s.to_dict() for s in service.store.list(org)]}

    @app.get("/api/assessments/{assessment_id}", dependencies=[auth])
    def get_assessment(assessment_id: str, revision: int | None = None):
        return _document_payload(service.get(assessment_id, revision))

    @app.get("/api/assessments/{assessment_id}/targets", dependencies=[auth])
    def get_targets(assessment_id: str, system: str | None = None):
        return service.targets(assessment_id, system)

    @app.put("/api/assessments/{assessment_id}/responses/{target}", dependencies=[auth])
    def put_response(
        assessment_id: str,
        target: str,
        payload: ResponsePayload,
        system: str | None = None,
    ):
        body = {
            "target": target,
            "metrics": payload.metrics,
            "na": payload.na,
            "evidence": payload.evidence,
            "note": payload.note,
        }
        if payload.metrics is None:
            body.pop("metrics")
        document, response, replayed = service.put_response(
            assessment_id,
            body,
            system_id=system,
            expected_revision=payload.expected_revision,
        )
        return {
            "revision": document.revision,
            "replayed": replayed,
            "response": response.to_dict(),
        }

    @app.get("/api/assessments/{assessment_id}/completeness", dependencies=[auth])
    def get_completeness(assessment_id: str):
        return service.completeness(assessment_id)

    @app.get("/api/assessments/{assessment_id}/aggregates", dependencies=[auth])
    def get_aggregates(assessment_id: str, mode: str = "pillar", system: str | None = None):
        return service.aggregates(assessment_id, mode, system)

    @app.get("/api/assessments/{assessment_id}/diagnostics", dependencies=[auth])
    def get_diagnostics(assessment_id: str):
        return service.diagnostics(assessment_id)

    @app.get("/api/assessments/{assessment_id}/report", dependencies=[auth])
    def get_report(assessment_id: str):
        bundle = service.report(assessment_id)
        return {"markdown": bundle.markdown, "chart_data": bundle.chart_data}

    @app.get("/api/organizations/{org_id}/trajectory", dependencies=[auth])
    def get_trajectory(org_id: str):
        return {"org_id": org_id, "points": service.trajectory(org_id)}

    ui_dir = config.ui_dir or _default_ui_dir()
    if ui_dir is not None and ui_dir.exists():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app


def _default_ui_dir() -> Path | None:
    candidate = Path(__file__).resolve().parents[2] / "frontend" / "dist"
    return candidate if candidate.exists() else None


def serve(config: ServiceConfig) -> None:
    """Run the HTTP service until interrupted."""
    import uvicorn

    uvicorn.run(create_app(config), host=config.host, port=config.port, log_level="info")
