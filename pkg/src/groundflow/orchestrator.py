"""Two-stage workflow loop: lecture once, then ask / summarize / feedback / approve.

A session owns an append-only chat transcript and a growing list of
workflow drafts. Asking generates, statically checks, and executes code;
mechanical defects (unparseable or invalid code) get one automatic repair
round with the diagnostics played back to the model, while semantic
problems are left to the human feedback loop. Every session serializes to
a directory so any run can be audited or replayed.
"""

from __future__ import annotations

import enum
import json
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from .dataset import format_number
from .dsl import ExecLimits, extract_code, parse, to_source, validate
from .dsl.interp import TraceEntry, execute
from .errors import (
    DslError,
    DslSyntaxError,
    ExtractionError,
    GroundflowError,
    SessionStateError,
)
from .gateway.types import ChatGateway, ChatMessage, ChatParams
from .lecture import ApiDescriptor, LectureConfig, LecturePrompt, render_lecture

SUMMARY_PROMPT = (
    "Could you provide a concise high-level summary of the flow of code? "
    "Then take feedback to see if code needs to be updated"
)

REPAIR_PROMPT = (
    "The workflow code could not be run:\n{issues}\n"
    "Reply with corrected workflow code in a fenced code block."
)


class SessionState(enum.Enum):
    READY = "READY"
    AWAITING_FEEDBACK = "AWAITING_FEEDBACK"
    DONE = "DONE"
    FAILED = "FAILED"


def answer_text(value: object) -> str:
    """Plain-text rendering of a workflow answer for display and scoring."""
    if isinstance(value, str):
        return value
    if isinstance(value, float):
        return format_number(value)
    if isinstance(value, list):
        return "[" + ", ".join(
            f"'{v}'" if isinstance(v, str) else format_number(v) for v in value
        ) + "]"
    return str(value)


@dataclass
class WorkflowDraft:
    code: str
    summary: str = ""
    answer: object | None = None
    trace: list[TraceEntry] = field(default_factory=list)
    steps_used: int = 0
    error: str | None = None
    diagnostics: list[str] = field(default_factory=list)
    repaired: bool = False
    feedback_applied: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None

    @property
    def answer_display(self) -> str:
        return answer_text(self.answer) if self.ok else ""


@dataclass
class Session:
    id: str
    lecture: LecturePrompt
    transcript: list[ChatMessage] = field(default_factory=list)
    drafts: list[WorkflowDraft] = field(default_factory=list)
    state: SessionState = SessionState.READY
    feedback_history: list[str] = field(default_factory=list)
    failure_cause: str = ""
    final: dict | None = None

    @property
    def latest_draft(self) -> WorkflowDraft | None:
        return self.drafts[-1] if self.drafts else None


@dataclass
class _Attempt:
    code: str = ""
    program: object | None = None
    issues: list[str] = field(default_factory=list)


class Orchestrator:
    def __init__(
        self,
        registry: list[ApiDescriptor],
        gateway: ChatGateway,
        bindings: dict[str, object],
        params: ChatParams | None = None,
        limits: ExecLimits | None = None,
        sessions_dir: str | Path | None = None,
    ):
        self.registry = list(registry)
        self.gateway = gateway
        self.bindings = bindings
        self.params = params or ChatParams()
        self.limits = limits or ExecLimits()
        self.sessions_dir = Path(sessions_dir) if sessions_dir else None
        self.arities = {d.name: len(d.params) for d in self.registry}

    # -- lifecycle ------------------------------------------------------------

    def start_session(
        self,
        lecture_cfg: LectureConfig | None = None,
        session_id: str | None = None,
    ) -> Session:
        prompt = render_lecture(self.registry, lecture_cfg or LectureConfig())
        session = Session(
            id=session_id or uuid.uuid4().hex[:12],
            lecture=prompt,
            transcript=[ChatMessage(role="system", content=prompt.text)],
        )
        ready = getattr(self.gateway, "ready", None)
        if callable(ready):
            try:
                ready()
            except GroundflowError as exc:
                session.state = SessionState.FAILED
                session.failure_cause = str(exc)
        self._persist(session)
        return session

    def ask(self, session: Session, question: str) -> WorkflowDraft:
        if session.state is not SessionState.READY:
            raise SessionStateError(f"cannot ask in state {session.state.value}")
        draft = self._generate(session, question)
        session.state = SessionState.AWAITING_FEEDBACK
        self._persist(session)
        return draft

    def summarize(self, session: Session) -> str:
        draft = session.latest_draft
        if draft is None or not draft.ok:
            raise SessionStateError("no executable draft to summarize")
        if draft.summary:
            return draft.summary
        reply = self._chat(session, SUMMARY_PROMPT)
        draft.summary = reply
        self._persist(session)
        return reply

    def feedback(self, session: Session, user_text: str) -> WorkflowDraft:
        if session.state is not SessionState.AWAITING_FEEDBACK:
            raise SessionStateError(f"cannot take feedback in state {session.state.value}")
        if not user_text.strip():
            raise ValueError("feedback text must be non-empty")
        session.feedback_history.append(user_text)
        draft = self._generate(session, user_text, feedback_applied=user_text)
        self._persist(session)
        return draft

    def approve(self, session: Session) -> dict:
        if session.state is SessionState.DONE and session.final is not None:
            return session.final
        draft = session.latest_draft
        if session.state is not SessionState.AWAITING_FEEDBACK or draft is None or not draft.ok:
            raise SessionStateError("no executable draft to approve")
        session.state = SessionState.DONE
        session.final = {
            "version": 1,
            "session_id": session.id,
            "answer": _json_value(draft.answer),
            "answer_text": draft.answer_display,
            "code": draft.code,
            "summary": draft.summary,
            "trace": [t.to_json_obj() for t in draft.trace],
            "feedback_history": list(session.feedback_history),
        }
        self._persist(session)
        return session.final

    # -- generation pipeline ------------------------------------------------------

    def _chat(self, session: Session, user_content: str) -> str:
        session.transcript.append(ChatMessage(role="user", content=user_content))
        reply = self.gateway.chat(list(session.transcript), self.params)
        session.transcript.append(ChatMessage(role="assistant", content=reply))
        return reply

    def _attempt(self, reply: str) -> _Attempt:
        attempt = _Attempt()
        try:
            attempt.code = extract_code(reply)
        except ExtractionError as exc:
            attempt.issues.append(str(exc))
            return attempt
        try:
            program = parse(attempt.code)
        except DslSyntaxError as exc:
            attempt.issues.append(str(exc))
            return attempt
        diagnostics = validate(program, self.arities)
        if diagnostics:
            attempt.issues.extend(str(d) for d in diagnostics)
            return attempt
        attempt.program = program
        return attempt

    def _generate(
        self,
        session: Session,
        user_content: str,
        feedback_applied: str | None = None,
    ) -> WorkflowDraft:
        try:
            reply = self._chat(session, user_content)
        except GroundflowError as exc:
            session.state = SessionState.FAILED
            session.failure_cause = str(exc)
            self._persist(session)
            raise
        attempt = self._attempt(reply)
        repaired = False
        if attempt.issues:
            repair_msg = REPAIR_PROMPT.format(issues="\n".join(attempt.issues))
            try:
                reply = self._chat(session, repair_msg)
            except GroundflowError as exc:
                session.state = SessionState.FAILED
                session.failure_cause = str(exc)
                self._persist(session)
                raise
            repaired = True
            attempt = self._attempt(reply)

        draft = WorkflowDraft(
            code=attempt.code,
            repaired=repaired,
            feedback_applied=feedback_applied,
        )
        if attempt.issues:
            draft.error = "workflow generation failed"
            draft.diagnostics = attempt.issues
        else:
            draft.code = to_source(attempt.program)  # canonical formatting
            try:
                result = execute(attempt.program, self.bindings, self.limits)
            except DslError as exc:
                draft.error = str(exc)
                draft.trace = list(getattr(exc, "trace", []))
            else:
                draft.answer = result.answer
                draft.trace = result.api_call_trace
                draft.steps_used = result.steps_used
        session.drafts.append(draft)
        return draft

    # -- persistence -------------------------------------------------------------

    def _persist(self, session: Session) -> None:
        if self.sessions_dir is None:
            return
        save_session(self.sessions_dir, session)

    def load_session(self, session_id: str) -> Session:
        if self.sessions_dir is None:
            raise SessionStateError("no sessions directory configured")
        return load_session(self.sessions_dir, session_id, self.registry)


def _json_value(value: object) -> object:
    if isinstance(value, (str, float, int)) or value is None:
        return value
    if isinstance(value, list):
        return [_json_value(v) for v in value]
    return answer_text(value)


def save_session(root: Path, session: Session) -> None:
    directory = root / session.id
    directory.mkdir(parents=True, exist_ok=True)
    transcript_lines = [
        json.dumps({"role": m.role, "content": m.content}, ensure_ascii=False)
        for m in session.transcript
    ]
    (directory / "transcript.jsonl").write_text(
        "\n".join(transcript_lines) + ("\n" if transcript_lines else ""), encoding="utf-8"
    )
    for n, draft in enumerate(session.drafts, 1):
        (directory / f"draft-{n}.dsl").write_text(draft.code + "\n", encoding="utf-8")
        trace_lines = [json.dumps(t.to_json_obj()) for t in draft.trace]
        (directory / f"draft-{n}.trace.jsonl").write_text(
            "\n".join(trace_lines) + ("\n" if trace_lines else ""), encoding="utf-8"
        )
        (directory / f"draft-{n}.json").write_text(
            json.dumps(
                {
                    "summary": draft.summary,
                    "answer": _json_value(draft.answer),
                    "answer_text": draft.answer_display,
                    "steps_used": draft.steps_used,
                    "error": draft.error,
                    "diagnostics": draft.diagnostics,
                    "repaired": draft.repaired,
                    "feedback_applied": draft.feedback_applied,
                },
                indent=2,
                ensure_ascii=False,
            )
            + "\n",
            encoding="utf-8",
        )
    (directory / "session.json").write_text(
        json.dumps(
            {
                "version": 1,
                "id": session.id,
                "state": session.state.value,
                "variant": session.lecture.variant.value,
                "lecture": session.lecture.text,
                "feedback_history": session.feedback_history,
                "failure_cause": session.failure_cause,
                "draft_count": len(session.drafts),
            },
            indent=2,
            ensure_ascii=False,
        )
        + "\n",
        encoding="utf-8",
    )
    if session.final is not None:
        (directory / "final.json").write_text(
            json.dumps(session.final, indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
        )


def load_session(root: Path, session_id: str, registry: list[ApiDescriptor]) -> Session:
    directory = Path(root) / session_id
    meta_path = directory / "session.json"
    if not meta_path.exists():
        raise SessionStateError(f"unknown session {session_id!r}")
    meta = json.loads(meta_path.read_text(encoding="utf-8"))
    from .lecture import Variant

    lecture = LecturePrompt(
        text=meta["lecture"],
        registry_snapshot=tuple(registry),
        variant=Variant(meta["variant"]),
    )
    transcript = []
    transcript_path = directory / "transcript.jsonl"
    if transcript_path.exists():
        for line in transcript_path.read_text(encoding="utf-8").splitlines():
            if line.strip():
                obj = json.loads(line)
                transcript.append(ChatMessage(role=obj["role"], content=obj["content"]))
    drafts = []
    for n in range(1, meta.get("draft_count", 0) + 1):
        code = (directory / f"draft-{n}.dsl").read_text(encoding="utf-8").rstrip("\n")
        info = json.loads((directory / f"draft-{n}.json").read_text(encoding="utf-8"))
        trace = []
        trace_path = directory / f"draft-{n}.trace.jsonl"
        if trace_path.exists():
            for line in trace_path.read_text(encoding="utf-8").splitlines():
                if line.strip():
                    obj = json.loads(line)
                    trace.append(
                        TraceEntry(
                            step=obj["step"],
                            name=obj["name"],
                            args=tuple(obj["args"]),
                            digest=obj["digest"],
                        )
                    )
        answer = info.get("answer")
        if isinstance(answer, int) and not isinstance(answer, bool):
            answer = float(answer)
        if isinstance(answer, list):
            answer = [float(v) if isinstance(v, int) and not isinstance(v, bool) else v for v in answer]
        drafts.append(
            WorkflowDraft(
                code=code,
                summary=info.get("summary", ""),
                answer=answer,
                trace=trace,
                steps_used=info.get("steps_used", 0),
                error=info.get("error"),
                diagnostics=list(info.get("diagnostics", [])),
                repaired=bool(info.get("repaired", False)),
                feedback_applied=info.get("feedback_applied"),
            )
        )
    final = None
    final_path = directory / "final.json"
    if final_path.exists():
        final = json.loads(final_path.read_text(encoding="utf-8"))
    return Session(
        id=meta["id"],
        lecture=lecture,
        transcript=transcript,
        drafts=drafts,
        state=SessionState(meta["state"]),
        feedback_history=list(meta.get("feedback_history", [])),
        failure_cause=meta.get("failure_cause", ""),
        final=final,
    )
