"""HTTP session service: the surface the feedback UI drives.

Endpoints:
  POST /sessions                     create a session (201)
  POST /sessions/{id}/query          ask a question, get draft + summary
  POST /sessions/{id}/feedback       revise the workflow from feedback
  POST /sessions/{id}/approve        freeze and return the final answer
  GET  /sessions/{id}                current session envelope

State errors map to 409, unknown sessions to 404, generation failures to
422 with diagnostics in the envelope, and an unavailable gateway to 503.
Per-session requests are serialized: overlapping calls get 409. The
service keeps no state outside the session directory, so a restart
reloads every session from disk.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .config import AppConfig, build_orchestrator, lecture_config
from .errors import GroundflowError, SessionStateError
from .lecture import LectureConfig, Variant
from .orchestrator import Orchestrator, Session, SessionState

API_VERSION = 1


@dataclass
class SessionManager:
    orchestrator: Orchestrator
    default_lecture: LectureConfig
    _sessions: dict[str, Session] = field(default_factory=dict)
    _locks: dict[str, threading.Lock] = field(default_factory=dict)
    _registry_lock: threading.Lock = field(default_factory=threading.Lock)

    def create(self, variant: Variant | None) -> Session:
        cfg = (
            LectureConfig(variant=variant) if variant is not None else self.default_lecture
        )
        session = self.orchestrator.start_session(cfg)
        with self._registry_lock:
            self._sessions[session.id] = session
            self._locks[session.id] = threading.Lock()
        return session

    def get(self, session_id: str) -> Session:
        with self._registry_lock:
            session = self._sessions.get(session_id)
            if session is None:
                session = self.orchestrator.load_session(session_id)
                self._sessions[session_id] = session
                self._locks.setdefault(session_id, threading.Lock())
            return session

    def lock(self, session_id: str) -> threading.Lock:
        with self._registry_lock:
            return self._locks.setdefault(session_id, threading.Lock())


def envelope(session: Session) -> dict:
    draft = session.latest_draft
    draft_obj = None
    if draft is not None:
        draft_obj = {
            "code": draft.code,
            "summary": draft.summary,
            "answer": draft.answer_display if draft.ok else None,
            "ok": draft.ok,
            "error": draft.error,
            "diagnostics": draft.diagnostics,
            "repaired": draft.repaired,
            "feedback_applied": draft.feedback_applied,
        }
    return {
        "version": API_VERSION,
        "session_id": session.id,
        "state": session.state.value,
        "variant": session.lecture.variant.value,
        "draft": draft_obj,
        "drafts": [
            {
                "code": d.code,
                "summary": d.summary,
                "answer": d.answer_display if d.ok else None,
                "ok": d.ok,
            }
            for d in session.drafts
        ],
        "feedback_history": list(session.feedback_history),
        "failure_cause": session.failure_cause or None,
    }


def create_app(cfg: AppConfig) -> FastAPI:
    app = FastAPI(title="groundflow session service")
    manager = SessionManager(
        orchestrator=build_orchestrator(cfg), default_lecture=lecture_config(cfg)
    )
    app.state.manager = manager

    def error_response(status: int, message: str) -> JSONResponse:
        return JSONResponse(
            status_code=status, content={"version": API_VERSION, "error": message}
        )

    @app.exception_handler(GroundflowError)
    async def domain_error_handler(request: Request, exc: GroundflowError):
        status = 409 if isinstance(exc, SessionStateError) else 500
        return error_response(status, str(exc))

    async def read_json(request: Request) -> dict:
        try:
            body = await request.json()
        except Exception:
            return {}
        return body if isinstance(body, dict) else {}

    @app.post("/sessions", status_code=201)
    async def create_session(request: Request):
        body = await read_json(request)
        variant = None
        if "variant" in body:
            try:
                variant = Variant(str(body["variant"]).upper())
            except ValueError:
                return error_response(400, f"unknown variant {body['variant']!r}")
        session = manager.create(variant)
        if session.state is SessionState.FAILED:
            return error_response(503, session.failure_cause or "gateway unavailable")
        return JSONResponse(status_code=201, content=envelope(session))

    def with_session(session_id: str):
        try:
            return manager.get(session_id), None
        except SessionStateError:
            return None, error_response(404, f"unknown session {session_id!r}")

    @app.get("/sessions/{session_id}")
    async def get_session(session_id: str):
        session, err = with_session(session_id)
        if err:
            return err
        return envelope(session)

    def locked(session_id: str):
        lock = manager.lock(session_id)
        if not lock.acquire(blocking=False):
            return None
        return lock

    @app.post("/sessions/{session_id}/query")
    async def query(session_id: str, request: Request):
        session, err = with_session(session_id)
        if err:
            return err
        body = await read_json(request)
        question = str(body.get("question", "")).strip()
        if not question:
            return error_response(400, "body must carry a non-empty 'question'")
        lock = locked(session_id)
        if lock is None:
            return error_response(409, "another request for this session is in flight")
        try:
            try:
                draft = manager.orchestrator.ask(session, question)
            except SessionStateError as exc:
                return error_response(409, str(exc))
            if draft.ok:
                manager.orchestrator.summarize(session)
                return envelope(session)
            return JSONResponse(status_code=422, content=envelope(session))
        finally:
            lock.release()

    @app.post("/sessions/{session_id}/feedback")
    async def feedback(session_id: str, request: Request):
        session, err = with_session(session_id)
        if err:
            return err
        body = await read_json(request)
        text = str(body.get("text", "")).strip()
        if not text:
            return error_response(400, "body must carry non-empty 'text'")
        lock = locked(session_id)
        if lock is None:
            return error_response(409, "another request for this session is in flight")
        try:
            try:
                draft = manager.orchestrator.feedback(session, text)
            except SessionStateError as exc:
                return error_response(409, str(exc))
            if draft.ok:
                manager.orchestrator.summarize(session)
                return envelope(session)
            return JSONResponse(status_code=422, content=envelope(session))
        finally:
            lock.release()

    @app.post("/sessions/{session_id}/approve")
    async def approve(session_id: str):
        session, err = with_session(session_id)
        if err:
            return err
        lock = locked(session_id)
        if lock is None:
            return error_response(409, "another request for this session is in flight")
        try:
            try:
                final = manager.orchestrator.approve(session)
            except SessionStateError as exc:
                return error_response(409, str(exc))
            return final
        finally:
            lock.release()

    return app
