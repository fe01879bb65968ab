"""Asynchronous clone-and-analyze jobs with durable users, jobs, and results.

One SQLite database holds three keyspaces (users, jobs, results). Jobs move
through a fixed stage order; each stage is persisted before its phase runs, so
an observer polling the job list sees progress. Results are stored as one
self-contained report document per version and never mutated afterwards.

Session tokens are held in memory: restarting the service invalidates open
sessions but never loses users, jobs, or results.
"""

from __future__ import annotations

import hashlib
import hmac
import json
import logging
import queue
import secrets
import shutil
import sqlite3
import threading
import time
import uuid
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any

from .analysis import run_analysis
from .config import ServiceConfig
from .errors import (
    AuthError,
    DuplicateUsername,
    InvalidCredentials,
    NotFound,
    NotReady,
    ValidationError,
)
from .mining import RepoSource
from .report import build_report

__all__ = ["AnalysisService", "JobStage", "Store"]

log = logging.getLogger(__name__)

_PBKDF2_ITERATIONS = 60_000
_MIN_CREDENTIAL_LENGTH = 8


class JobStage(str, Enum):
    INITIALIZED = "Initialized"
    CLONING = "Cloning"
    EXTRACTING_HISTORY = "ExtractingHistory"
    COMPUTING_DOE = "ComputingDoe"
    COMPUTING_TRUCK_FACTOR = "ComputingTruckFactor"
    FINISHED = "Finished"
    FAILED = "Failed"


STAGE_ORDER = [
    JobStage.INITIALIZED,
    JobStage.CLONING,
    JobStage.EXTRACTING_HISTORY,
    JobStage.COMPUTING_DOE,
    JobStage.COMPUTING_TRUCK_FACTOR,
    JobStage.FINISHED,
]

TERMINAL_STAGES = {JobStage.FINISHED, JobStage.FAILED}


@dataclass(frozen=True)
class AnalysisJob:
    job_id: str
    user_id: str
    repo_url: str
    branch: str | None
    stage: JobStage
    started_at: float
    finished_at: float | None
    error: str | None
    result_id: str | None

    def summary(self) -> dict[str, Any]:
        doc: dict[str, Any] = {
            "jobId": self.job_id,
            "url": self.repo_url,
            "branch": self.branch,
            "startedAt": self.started_at,
            "stage": self.stage.value,
        }
        if self.finished_at is not None:
            doc["finishedAt"] = self.finished_at
        if self.result_id is not None:
            doc["resultId"] = self.result_id
        if self.error is not None:
            doc["error"] = self.error
        return doc


_SCHEMA = """
CREATE TABLE IF NOT EXISTS users (
    user_id TEXT PRIMARY KEY,
    username TEXT UNIQUE NOT NULL,
    credential_hash TEXT NOT NULL,
    created_at REAL NOT NULL
);
CREATE TABLE IF NOT EXISTS jobs (
    seq INTEGER PRIMARY KEY AUTOINCREMENT,
    job_id TEXT UNIQUE NOT NULL,
    user_id TEXT NOT NULL,
    repo_url TEXT NOT NULL,
    branch TEXT,
    stage TEXT NOT NULL,
    started_at REAL NOT NULL,
    finished_at REAL,
    error TEXT,
    result_id TEXT
);
CREATE TABLE IF NOT EXISTS job_events (
    event_id INTEGER PRIMARY KEY AUTOINCREMENT,
    job_id TEXT NOT NULL,
    stage TEXT NOT NULL,
    at REAL NOT NULL
);
CREATE TABLE IF NOT EXISTS results (
    version_id TEXT PRIMARY KEY,
    job_id TEXT NOT NULL,
    document TEXT NOT NULL,
    created_at REAL NOT NULL
);
"""


class Store:
    """Durable storage; every method opens its own connection (thread-safe)."""

    def __init__(self, path: str | Path):
        self._path = str(path)
        with self._connect() as conn:
            conn.executescript(_SCHEMA)

    def _connect(self) -> sqlite3.Connection:
        conn = sqlite3.connect(self._path, timeout=30.0)
        conn.row_factory = sqlite3.Row
        return conn

    # -- users ---------------------------------------------------------------

    def add_user(self, user_id: str, username: str, credential_hash: str) -> None:
        try:
            with self._connect() as conn:
                conn.execute(
                    "INSERT INTO users VALUES (?, ?, ?, ?)",
                    (user_id, username, credential_hash, time.time()),
                )
        except sqlite3.IntegrityError:
            raise DuplicateUsername(f"username {username!r} is already taken")

    def user_by_name(self, username: str) -> sqlite3.Row | None:
        with self._connect() as conn:
            return conn.execute(
                "SELECT * FROM users WHERE username = ?", (username,)
            ).fetchone()

    def user_exists(self, user_id: str) -> bool:
        with self._connect() as conn:
            row = conn.execute(
                "SELECT 1 FROM users WHERE user_id = ?", (user_id,)
            ).fetchone()
        return row is not None

    # -- jobs ----------------------------------------------------------------

    def insert_job(self, job: AnalysisJob) -> None:
        with self._connect() as conn:
            conn.execute(
                "INSERT INTO jobs (job_id, user_id, repo_url, branch, stage,"
                " started_at, finished_at, error, result_id)"
                " VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?)",
                (job.job_id, job.user_id, job.repo_url, job.branch,
                 job.stage.value, job.started_at, job.finished_at, job.error,
                 job.result_id),
            )
            conn.execute(
                "INSERT INTO job_events (job_id, stage, at) VALUES (?, ?, ?)",
                (job.job_id, job.stage.value, time.time()),
            )

    def set_stage(
        self,
        job_id: str,
        stage: JobStage,
        error: str | None = None,
        result_id: str | None = None,
        finished_at: float | None = None,
    ) -> None:
        with self._connect() as conn:
            conn.execute(
                "UPDATE jobs SET stage = ?,"
                " error = COALESCE(?, error),"
                " result_id = COALESCE(?, result_id),"
                " finished_at = COALESCE(?, finished_at)"
                " WHERE job_id = ?",
                (stage.value, error, result_id, finished_at, job_id),
            )
            conn.execute(
                "INSERT INTO job_events (job_id, stage, at) VALUES (?, ?, ?)",
                (job_id, stage.value, time.time()),
            )

    def job(self, job_id: str) -> AnalysisJob | None:
        with self._connect() as conn:
            row = conn.execute(
                "SELECT * FROM jobs WHERE job_id = ?", (job_id,)
            ).fetchone()
        return self._to_job(row) if row else None

    def jobs_for_user(self, user_id: str) -> list[AnalysisJob]:
        with self._connect() as conn:
            rows = conn.execute(
                "SELECT * FROM jobs WHERE user_id = ?"
                " ORDER BY started_at DESC, seq DESC",
                (user_id,),
            ).fetchall()
        return [self._to_job(row) for row in rows]

    def stage_history(self, job_id: str) -> list[JobStage]:
        with self._connect() as conn:
            rows = conn.execute(
                "SELECT stage FROM job_events WHERE job_id = ? ORDER BY event_id",
                (job_id,),
            ).fetchall()
        return [JobStage(row["stage"]) for row in rows]

    def fail_interrupted_jobs(self) -> int:
        """Mark every non-terminal job as failed; returns how many."""
        terminal = tuple(stage.value for stage in TERMINAL_STAGES)
        with self._connect() as conn:
            rows = conn.execute(
                f"SELECT job_id FROM jobs WHERE stage NOT IN ({','.join('?' * len(terminal))})",
                terminal,
            ).fetchall()
        for row in rows:
            self.set_stage(
                row["job_id"], JobStage.FAILED,
                error="interrupted: service restarted mid-analysis",
                finished_at=time.time(),
            )
        return len(rows)

    @staticmethod
    def _to_job(row: sqlite3.Row) -> AnalysisJob:
        return AnalysisJob(
            job_id=row["job_id"],
            user_id=row["user_id"],
            repo_url=row["repo_url"],
            branch=row["branch"],
            stage=JobStage(row["stage"]),
            started_at=row["started_at"],
            finished_at=row["finished_at"],
            error=row["error"],
            result_id=row["result_id"],
        )

    # -- results ---------------------------------------------------------------

    def insert_result(self, version_id: str, job_id: str, document: dict) -> None:
        with self._connect() as conn:
            conn.execute(
                "INSERT INTO results VALUES (?, ?, ?, ?)",
                (version_id, job_id, json.dumps(document, sort_keys=True),
                 time.time()),
            )

    def result(self, version_id: str) -> dict | None:
        with self._connect() as conn:
            row = conn.execute(
                "SELECT document FROM results WHERE version_id = ?", (version_id,)
            ).fetchone()
        return json.loads(row["document"]) if row else None


def _hash_credential(credential: str, salt: bytes | None = None) -> str:
    salt = salt or secrets.token_bytes(16)
    digest = hashlib.pbkdf2_hmac(
        "sha256", credential.encode("utf-8"), salt, _PBKDF2_ITERATIONS
    )
    return f"pbkdf2:{_PBKDF2_ITERATIONS}:{salt.hex()}:{digest.hex()}"

def _verify_credential(credential: str, stored: str) -> bool:
    try:
        _, iterations, salt_hex, digest_hex = stored.split(":")
        digest = hashlib.pbkdf2_hmac(
            "sha256", credential.encode("utf-8"),
            bytes.fromhex(salt_hex), int(iterations),
        )
        return hmac.compare_digest(digest.hex(), digest_hex)
    except (ValueError, TypeError):
        return False


class AnalysisService:
    """User accounts, session tokens, and the FIFO analysis job queue."""

    def __init__(self, config: ServiceConfig):
        self.config = config
        self.store = Store(config.store_path)
        interrupted = self.store.fail_interrupted_jobs()
        if interrupted:
            log.warning("marked %d interrupted job(s) as failed", interrupted)
        Path(config.workdir_root).mkdir(parents=True, exist_ok=True)

        self._tokens: dict[str, tuple[str, float]] = {}
        self._token_lock = threading.Lock()
        self._queue: queue.Queue[str | None] = queue.Queue()
        self._workers = [
            threading.Thread(target=self._worker_loop, daemon=True,
                             name=f"analysis-worker-{i}")
            for i in range(config.worker_count)
        ]
        for worker in self._workers:
            worker.start()

    # -- accounts and sessions -------------------------------------------------

    def register_user(self, username: str, credential: str) -> str:
        if not username or not username.strip():
            raise ValidationError("username must be non-empty")
        if len(credential) < _MIN_CREDENTIAL_LENGTH:
            raise ValidationError(
                f"credential must be at least {_MIN_CREDENTIAL_LENGTH} characters"
            )
        user_id = uuid.uuid4().hex
        self.store.add_user(user_id, username, _hash_credential(credential))
        return user_id

    def authenticate(self, username: str, credential: str) -> tuple[str, float]:
        """Returns (token, expiry epoch seconds)."""
        row = self.store.user_by_name(username)
        if row is None or not _verify_credential(credential, row["credential_hash"]):
            raise InvalidCredentials("unknown username or wrong credential")
        token = secrets.token_urlsafe(32)
        expires_at = time.time() + self.config.token_lifetime
        with self._token_lock:
            self._tokens[token] = (row["user_id"], expires_at)
        return token, expires_at

    def user_for_token(self, token: str) -> str:
        with self._token_lock:
            entry = self._tokens.get(token)
            if entry is None:
                raise AuthError("invalid session token")
            user_id, expires_at = entry
            if time.time() >= expires_at:
                del self._tokens[token]
                raise AuthError("session token expired")
        return user_id

    # -- jobs --------------------------------------------------------------------

    def start_analysis(
        self, user_id: str, repo_url: str, branch: str | None = None
    ) -> str:
        if not self.store.user_exists(user_id):
            raise AuthError(f"unknown user {user_id}")
        if not repo_url or not repo_url.strip():
            raise ValidationError("repository URL must be non-empty")
        job = AnalysisJob(
            job_id=uuid.uuid4().hex,
            user_id=user_id,
            repo_url=repo_url,
            branch=branch or None,
            stage=JobStage.INITIALIZED,
            started_at=time.time(),
            finished_at=None,
            error=None,
            result_id=None,
        )
        self.store.insert_job(job)
        self._queue.put(job.job_id)
        return job.job_id

    def list_jobs(self, user_id: str) -> list[dict[str, Any]]:
        if not self.store.user_exists(user_id):
            raise AuthError(f"unknown user {user_id}")
        return [job.summary() for job in self.store.jobs_for_user(user_id)]

    def get_result(self, result_or_job_id: str) -> dict[str, Any]:
        document = self.store.result(result_or_job_id)
        if document is not None:
            return document
        job = self.store.job(result_or_job_id)
        if job is not None:
            if job.stage is JobStage.FINISHED and job.result_id:
                found = self.store.result(job.result_id)
                if found is not None:
                    return found
            raise NotReady(f"job {result_or_job_id} is at stage {job.stage.value}")
        raise NotFound(f"no analysis result {result_or_job_id}")

    def wait_for_job(self, job_id: str, timeout: float = 120.0) -> AnalysisJob:
        """Poll until the job is terminal; test and CLI convenience."""
        deadline = time.monotonic() + timeout
        while time.monotonic() < deadline:
            job = self.store.job(job_id)
            if job is None:
                raise NotFound(f"no job {job_id}")
            if job.stage in TERMINAL_STAGES:
                return job
            time.sleep(0.05)
        raise TimeoutError(f"job {job_id} still running after {timeout}s")

    def close(self) -> None:
        for _ in self._workers:
            self._queue.put(None)
        for worker in self._workers:
            worker.join(timeout=10)

    # -- execution -----------------------------------------------------------------

    def _worker_loop(self) -> None:
        while True:
            job_id = self._queue.get()
            if job_id is None:
                return
            try:
                self._run_job(job_id)
            except Exception:
                log.exception("job runner crashed for %s", job_id)
            finally:
                self._queue.task_done()

    def _run_job(self, job_id: str) -> None:
        job = self.store.job(job_id)
        if job is None or job.stage in TERMINAL_STAGES:
            return
        workdir = Path(self.config.workdir_root) / job_id
        try:
            source = RepoSource(url=job.repo_url, branch=job.branch)
            version = run_analysis(
                source,
                workdir,
                config=self.config.analysis,
                on_stage=lambda phase: self.store.set_stage(job_id, JobStage(phase)),
            )
            document = build_report(version)
            version_id = uuid.uuid4().hex
            self.store.insert_result(version_id, job_id, document)
            # Workdir goes away before the terminal stage becomes visible.
            shutil.rmtree(workdir, ignore_errors=True)
            self.store.set_stage(
                job_id, JobStage.FINISHED,
                result_id=version_id, finished_at=time.time(),
            )
        except Exception as exc:
            log.info("job %s failed: %s", job_id, exc)
            shutil.rmtree(workdir, ignore_errors=True)
            self.store.set_stage(
                job_id, JobStage.FAILED,
                error=f"{type(exc).__name__}: {exc}", finished_at=time.time(),
            )
