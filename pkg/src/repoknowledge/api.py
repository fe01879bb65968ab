"""HTTP facade over the analysis service.

Route paths follow the published endpoint table verbatim; auth endpoints are
additional plumbing. Result documents are served from their canonical byte
serialization so the service and the CLI emit identical files.
"""

from __future__ import annotations

from fastapi import Depends, FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .errors import (
    AuthError,
    DuplicateUsername,
    InvalidCredentials,
    NotFound,
    NotReady,
    ValidationError,
)
from .pipeline import AnalysisService
from .report import canonical_json

__all__ = [
    "PATH_GET_RESULT",
    "PATH_LIST_PROCESSES",
    "PATH_START_PROCESS",
    "create_app",
]

PATH_START_PROCESS = (
    "/git-repository-version-process/start-git-repository-version-process"
)
PATH_LIST_PROCESSES = "/git-repository-version-process/user/{id}"
PATH_GET_RESULT = "/git-repository-version/{id}"


class StartProcessBody(BaseModel):
    url: str = Field(min_length=1)
    branch: str | None = None


class RegisterBody(BaseModel):
    username: str = Field(min_length=1)
    credential: str


class LoginBody(BaseModel):
    username: str
    credential: str


def create_app(service: AnalysisService) -> FastAPI:
    app = FastAPI(title="repoknowledge", openapi_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(service.config.cors_origins),
        allow_methods=["*"],
        allow_headers=["*"],
    )

    def authenticated_user(request: Request) -> str:
        header = request.headers.get("Authorization", "")
        if not header.startswith("Bearer "):
            raise AuthError("missing bearer token")
        return service.user_for_token(header.removeprefix("Bearer "))

    @app.exception_handler(RequestValidationError)
    async def invalid_body(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"detail": exc.errors()})

    @app.exception_handler(ValidationError)
    async def domain_validation(request: Request, exc: ValidationError):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.exception_handler(AuthError)
    async def unauthorized(request: Request, exc: AuthError):
        return JSONResponse(status_code=401, content={"detail": str(exc)})

    @app.exception_handler(DuplicateUsername)
    async def duplicate(request: Request, exc: DuplicateUsername):
        return JSONResponse(status_code=409, content={"detail": str(exc)})

    @app.exception_handler(NotFound)
    async def not_found(request: Request, exc: NotFound):
        return JSONResponse(status_code=404, content={"detail": str(exc)})

    @app.exception_handler(NotReady)
    async def not_ready(request: Request, exc: NotReady):
        return JSONResponse(status_code=409, content={"detail": str(exc)})

    @app.post("/auth/register", status_code=201)
    def register(body: RegisterBody):
        user_id = service.register_user(body.username, body.credential)
        return {"userId": user_id}

    @app.post("/auth/login")
    def login(body: LoginBody):
        try:
            token, expires_at = service.authenticate(body.username, body.credential)
        except InvalidCredentials as exc:
            return JSONResponse(status_code=401, content={"detail": str(exc)})
        return {
            "token": token,
            "expiresAt": expires_at,
            "userId": service.user_for_token(token),
        }

    @app.post(PATH_START_PROCESS, status_code=202)
    def start_process(body: StartProcessBody,
                      user_id: str = Depends(authenticated_user)):
        job_id = service.start_analysis(user_id, body.url, body.branch)
        return {"jobId": job_id}

    @app.get(PATH_LIST_PROCESSES)
    def list_processes(id: str, user_id: str = Depends(authenticated_user)):
        if id != user_id:
            return JSONResponse(
                status_code=403,
                content={"detail": "token does not match the requested user"},
            )
        return service.list_jobs(id)

    @app.get(PATH_GET_RESULT)
    def get_result(id: str, user_id: str = Depends(authenticated_user)):
        document = service.get_result(id)
        return Response(
            content=canonical_json(document), media_type="application/json"
        )

    return app
