"""HTTP face of the repair engine.

Each session owns a dynamic repair memory and walks the same
question/answer loop as a console run; the client sees a snapshot
(current question, interlingua paraphrase, chunk list, transcript)
after every step.  Exactly one question is outstanding while a session
is awaiting an answer, and answers are applied strictly in order.
"""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass, field
from typing import Optional

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from .bundled import load_demo_glosses, load_demo_spec
from .dialogue import apply_hypothesis, render_question, sentence_paraphrase
from .engine import accuracy, format_transcript, hypothesis_summary
from .fstruct import pretty_fs, print_fs
from .hypgen import META, RepairConfig, RepairNetworks, next_hypothesis
from .ilspec import InterlinguaSpec
from .repairmem import (
    CorpusRecord,
    DynamicRepairMemory,
    TranscriptEntry,
    format_record,
    initialize,
    read_records,
)
from .sexpr import ParseError

AWAITING = "awaiting-answer"
DONE = "done"


@dataclass
class LiveSession:
    sid: str
    record: CorpusRecord
    drm: DynamicRepairMemory
    question: Optional[str] = None  # rendered text of the outstanding question
    done: bool = False
    lock: threading.Lock = field(default_factory=threading.Lock)


def _advance(session: LiveSession, spec, nets, glosses, config) -> None:
    """Pick the next question, or mark the session finished."""
    drm = session.drm
    if drm.questions_asked >= config.max_questions:
        h = None
    else:
        h = next_hypothesis(drm, spec, nets, config, META)
    if h is None:
        session.question = None
        session.done = True
        drm.current_hypothesis = None
        return
    drm.current_hypothesis = h
    drm.status = "test"
    session.question = render_question(h, drm, spec, glosses)


def _snapshot(session: LiveSession, glosses) -> dict:
    drm = session.drm
    return {
        "session_id": session.sid,
        "status": DONE if session.done else AWAITING,
        "utterance": list(drm.parser_output.utterance),
        "text": session.question,
        "hypothesis_summary": (
            hypothesis_summary(drm.current_hypothesis)
            if session.question is not None
            else None
        ),
        "ilt": print_fs(drm.current_ilt),
        "ilt_pretty": pretty_fs(drm.current_ilt),
        "ilt_paraphrase": sentence_paraphrase(drm.current_ilt, glosses),
        "chunks": [
            {
                "id": chunk.id,
                "fs": print_fs(chunk.fs),
                "symbols": list(chunk.symbols),
                "leaf_type": chunk.leaf_type,
                "consumed": chunk.consumed,
            }
            for chunk in drm.chunks
        ],
        "transcript": [
            {"question": entry.question, "answer": entry.answer}
            for entry in drm.transcript
        ],
        "questions_used": drm.questions_asked,
    }


class CreateRequest(BaseModel):
    record: str


class AnswerRequest(BaseModel):
    answer: str


def create_app(
    spec: Optional[InterlinguaSpec] = None,
    nets: Optional[RepairNetworks] = None,
    glosses: Optional[dict] = None,
    config: RepairConfig = RepairConfig(),
) -> FastAPI:
    spec = spec if spec is not None else load_demo_spec()
    nets = nets if nets is not None else RepairNetworks.fresh(spec)
    glosses = glosses if glosses is not None else load_demo_glosses()

    app = FastAPI(title="parse repair sessions")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    sessions: dict = {}
    registry_lock = threading.Lock()
    nets_lock = threading.Lock()

    def get_session(sid: str) -> LiveSession:
        with registry_lock:
            session = sessions.get(sid)
        if session is None:
            raise HTTPException(status_code=404, detail=f"unknown session {sid}")
        return session

    @app.post("/sessions")
    def create(req: CreateRequest) -> dict:
        try:
            records = read_records(req.record)
        except (ParseError, ValueError) as err:
            raise HTTPException(status_code=400, detail=str(err))
        if len(records) != 1:
            raise HTTPException(
                status_code=400,
                detail=f"expected exactly one record, got {len(records)}",
            )
        record = records[0]
        session = LiveSession(
            sid=uuid.uuid4().hex,
            record=record,
            drm=initialize(record.output, spec),
        )
        _advance(session, spec, nets, glosses, config)
        with registry_lock:
            sessions[session.sid] = session
        return _snapshot(session, glosses)

    @app.get("/sessions/{sid}/question")
    def question(sid: str) -> dict:
        session = get_session(sid)
        with session.lock:
            return _snapshot(session, glosses)

    @app.post("/sessions/{sid}/answer")
    def answer(sid: str, req: AnswerRequest) -> dict:
        session = get_session(sid)
        reply = req.answer.strip().lower()
        if reply not in ("yes", "no"):
            raise HTTPException(
                status_code=400, detail=f"answer must be yes or no, got {req.answer!r}"
            )
        with session.lock:
            if session.done or session.question is None:
                raise HTTPException(
                    status_code=409, detail="no outstanding question to answer"
                )
            drm = session.drm
            h = drm.current_hypothesis
            drm.transcript.append(TranscriptEntry(h, session.question, reply))
            if reply == "yes":
                drm.status = "pass"
                with nets_lock:
                    apply_hypothesis(h, drm, spec, nets)
            else:
                drm.status = "fail"
            _advance(session, spec, nets, glosses, config)
            return _snapshot(session, glosses)

    @app.post("/sessions/{sid}/abort")
    def abort(sid: str) -> dict:
        session = get_session(sid)
        with session.lock:
            session.done = True
            session.question = None
            session.drm.current_hypothesis = None
            return _snapshot(session, glosses)

    @app.get("/sessions/{sid}/result")
    def result(sid: str) -> dict:
        session = get_session(sid)
        with session.lock:
            drm = session.drm
            out = {
                "session_id": session.sid,
                "status": DONE if session.done else AWAITING,
                "final_ilt": print_fs(drm.current_ilt),
                "final_ilt_pretty": pretty_fs(drm.current_ilt),
                "paraphrase": sentence_paraphrase(drm.current_ilt, glosses),
                "questions_used": drm.questions_asked,
                "transcript": [
                    {"question": entry.question, "answer": entry.answer}
                    for entry in drm.transcript
                ],
                "transcript_text": format_transcript(drm.transcript),
            }
            if session.record.gold is not None:
                out["accuracy_after"] = accuracy(drm.current_ilt, session.record.gold)
            return out

    @app.get("/demo/records")
    def demo_records() -> list:
        from .bundled import load_demo_records

        return [
            {
                "index": i,
                "utterance": list(record.output.utterance),
                "record": format_record(record),
            }
            for i, record in enumerate(load_demo_records())
        ]

    return app
