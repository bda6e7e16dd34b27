"""HTTP/JSON API over the gateway."""

from __future__ import annotations

import logging
from contextlib import asynccontextmanager

from fastapi import Depends, FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response
from pydantic import BaseModel, Field

from ..dicom import dictionary
from ..engine import QueryFilters, PatientFilters, SeriesFilters, StationConfig, StudyFilters
from ..engine.tree import AllStationsFailedError
from ..preview import PreviewError
from .auth import AuthError, AuthorizationError, ConflictError
from .core import Gateway, UnknownStationError, resolve_tag
from .previews import NotRetrievedError
from .settings import Preferences

log = logging.getLogger(__name__)

_MEDIA_TYPES = {
    ".jpg": "image/jpeg",
    ".pgm": "image/x-portable-graymap",
    ".ppm": "image/x-portable-pixmap",
}


class ApiError(Exception):
    def __init__(self, status_code: int, code: str, message: str, detail=None):
        self.status_code = status_code
        self.code = code
        self.message = message
        self.detail = detail
        super().__init__(message)


def _error_response(status_code: int, code: str, message: str, detail=None) -> JSONResponse:
    return JSONResponse(status_code=status_code,
                        content={"code": code, "message": message,
                                 "detail": detail})


class LoginBody(BaseModel):
    username: str
    password: str


class UserBody(BaseModel):
    username: str
    password: str
    role: str = "user"


class StationBody(BaseModel):
    name: str
    ae_title: str
    host: str
    port: int


class VerifyBody(BaseModel):
    station: str = "all"


class PreferencesBody(BaseModel):
    exact_match: bool = False
    connect_timeout_s: int = 5
    dimse_timeout_s: int = 30
    output_root: str


class CustomField(BaseModel):
    tag: str
    value: str


class QueryBody(BaseModel):
    station: str = "all"
    study_date: str = ""
    study_time: str = ""
    study_id: str = ""
    referring_physician_name: str = ""
    accession_number: str = ""
    study_instance_uid: str = ""
    patient_id: str = ""
    patient_name: str = ""
    sex: str = ""
    birth_date: str = ""
    modality: str = ""
    series_instance_uid: str = ""
    series_number: str = ""
    custom: list[CustomField] = Field(default_factory=list)

    def to_filters(self) -> QueryFilters:
        return QueryFilters(
            study=StudyFilters(
                study_date=self.study_date,
                study_time=self.study_time,
                study_id=self.study_id,
                referring_physician_name=self.referring_physician_name,
                accession_number=self.accession_number,
                study_instance_uid=self.study_instance_uid,
            ),
            patient=PatientFilters(
                patient_id=self.patient_id,
                patient_name=self.patient_name,
                sex=self.sex,
                birth_date=self.birth_date,
            ),
            series=SeriesFilters(
                modality=self.modality,
                series_instance_uid=self.series_instance_uid,
                series_number=self.series_number,
            ),
            custom=tuple((resolve_tag(f.tag), f.value) for f in self.custom),
        )


class RetrieveBody(BaseModel):
    scope: str
    station: str
    study_uid: str
    series_uid: str | None = None


def _station_doc(s: StationConfig) -> dict:
    return {"name": s.name, "ae_title": s.ae_title, "host": s.host, "port": s.port}


def create_app(gateway: Gateway, *, cors_origins: list[str] | None = None) -> FastAPI:
    @asynccontextmanager
    async def lifespan(app: FastAPI):
        gateway.start()
        try:
            yield
        finally:
            gateway.stop()

    app = FastAPI(title="pacsbridge gateway", lifespan=lifespan,
                  docs_url=None, redoc_url=None, openapi_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=cors_origins or ["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    # -- error mapping

    @app.exception_handler(ApiError)
    async def handle_api_error(_req: Request, exc: ApiError):
        return _error_response(exc.status_code, exc.code, exc.message, exc.detail)

    @app.exception_handler(AuthError)
    async def handle_auth(_req: Request, exc: AuthError):
        return _error_response(401, "auth_failed", "invalid credentials or session")

    @app.exception_handler(AuthorizationError)
    async def handle_forbidden(_req: Request, exc: AuthorizationError):
        return _error_response(403, "forbidden", str(exc))

    @app.exception_handler(ConflictError)
    async def handle_conflict(_req: Request, exc: ConflictError):
        return _error_response(409, "conflict", str(exc))

    @app.exception_handler(UnknownStationError)
    async def handle_unknown_station(_req: Request, exc: UnknownStationError):
        return _error_response(404, "unknown_station", str(exc))

    @app.exception_handler(NotRetrievedError)
    async def handle_not_retrieved(_req: Request, exc: NotRetrievedError):
        return _error_response(409, "not_retrieved", str(exc))

    @app.exception_handler(AllStationsFailedError)
    async def handle_all_failed(_req: Request, exc: AllStationsFailedError):
        detail = [{"station": e.station.name, "message": e.message}
                  for e in exc.errors]
        return _error_response(502, "all_stations_failed",
                               "every station errored", detail)

    @app.exception_handler(PreviewError)
    async def handle_preview(_req: Request, exc: PreviewError):
        return _error_response(422, "preview_failed", str(exc))

    @app.exception_handler(ValueError)
    async def handle_value_error(_req: Request, exc: ValueError):
        return _error_response(400, "validation", str(exc))

    @app.exception_handler(RequestValidationError)
    async def handle_request_validation(_req: Request, exc: RequestValidationError):
        return _error_response(400, "validation", "malformed request body",
                               exc.errors())

    # -- auth dependency

    def require_session(request: Request):
        header = request.headers.get("authorization", "")
        token = header.removeprefix("Bearer ").strip() if header else None
        return gateway.require_session(token)

    # -- routes

    @app.get("/health")
    async def health():
        return {"status": "ok"}

    @app.post("/login")
    async def login(body: LoginBody):
        session = gateway.login(body.username, body.password)
        return {"token": session.token, "username": session.username,
                "role": session.role, "expires_at": session.expires_at}

    @app.post("/users", status_code=201)
    async def create_user(body: UserBody, session=Depends(require_session)):
        record = gateway.create_user(session, body.username, body.password,
                                     body.role)
        return {"username": record.username, "role": record.role,
                "created_at": record.created_at}

    @app.get("/stations")
    async def list_stations(session=Depends(require_session)):
        return {"stations": [_station_doc(s) for s in gateway.stations()]}

    @app.post("/stations", status_code=201)
    async def add_station(body: StationBody, session=Depends(require_session)):
        station = StationConfig(body.name, body.ae_title, body.host, body.port)
        gateway.add_station(station)
        return _station_doc(station)

    @app.delete("/stations")
    async def remove_station(name: str, session=Depends(require_session)):
        if not gateway.remove_station(name):
            raise ApiError(404, "unknown_station", f"no station named {name!r}")
        return {"removed": name}

    @app.post("/stations/verify")
    async def verify_stations(body: VerifyBody | None = None,
                              session=Depends(require_session)):
        statuses = gateway.verify_stations(body.station if body else "all")
        return {"statuses": [{
            "station": _station_doc(s.station),
            "reachable": s.reachable,
            "checked_at": s.checked_at,
            "latency_ms": round(s.latency * 1000, 3) if s.latency else None,
            "detail": s.detail,
        } for s in statuses]}

    @app.get("/preferences")
    async def get_preferences(session=Depends(require_session)):
        return vars(gateway.preferences)

    @app.put("/preferences")
    async def put_preferences(body: PreferencesBody,
                              session=Depends(require_session)):
        gateway.set_preferences(Preferences(
            exact_match=body.exact_match,
            connect_timeout_s=body.connect_timeout_s,
            dimse_timeout_s=body.dimse_timeout_s,
            output_root=body.output_root,
        ))
        return vars(gateway.preferences)

    @app.post("/query")
    async def query(body: QueryBody, session=Depends(require_session)):
        tree = gateway.query(body.station, body.to_filters())
        return tree.to_document()

    @app.post("/retrieve", status_code=202)
    async def retrieve(body: RetrieveBody, session=Depends(require_session)):
        job_id = gateway.submit_retrieve(body.scope, body.station,
                                         body.study_uid, body.series_uid)
        return {"job_id": job_id}

    @app.get("/jobs/{job_id}")
    async def job_status(job_id: str, session=Depends(require_session)):
        job = gateway.job(job_id)
        if job is None:
            raise ApiError(404, "unknown_job", f"no job {job_id!r}")
        return job.to_document()

    @app.get("/previews/{study_uid}")
    async def study_previews(study_uid: str, session=Depends(require_session)):
        return gateway.previews.study_manifest(study_uid)

    @app.get("/previews/{study_uid}/{series_uid}")
    async def series_previews(study_uid: str, series_uid: str,
                              session=Depends(require_session)):
        return gateway.previews.series_manifest(study_uid, series_uid)

    @app.get("/previews/{study_uid}/{series_uid}/{name}")
    async def preview_image(study_uid: str, series_uid: str, name: str,
                            session=Depends(require_session)):
        path = gateway.previews.image_path(study_uid, series_uid, name)
        media_type = _MEDIA_TYPES.get(path.suffix, "application/octet-stream")
        return Response(content=path.read_bytes(), media_type=media_type)

    @app.get("/dictionary")
    async def dictionary_search(q: str = "", session=Depends(require_session)):
        entries = dictionary.search_keywords(q) if q else dictionary.all_entries()[:25]
        return {"entries": [{
            "keyword": e.keyword,
            "tag": str(e.tag),
            "vr": e.vr.value,
        } for e in entries]}

    return app
