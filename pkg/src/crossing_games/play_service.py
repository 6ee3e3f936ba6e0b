"""HTTP play service: create a game against an engine, submit moves,
watch the engine answer.

Sessions live in memory.  Every response carries the full game record
(the same serialization the referee uses) plus a claim map, the last
engine move, the verdict, and the engine's overlay when it keeps one.
Engine moves pass through the referee like anyone else's, so the
service can never let an engine overclaim or play out of turn.  Move
submission is serialized per session; reads are lock-free.
"""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass, field
from typing import Optional

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field

from .game_core import (
    GameResult,
    GameState,
    IllegalMove,
    Move,
    Player,
    Variant,
    apply_move,
    new_game,
    to_record,
)
from .harness import Agent, AgentIncompatible, AgentKind, AgentSpec, make_agent
from .lattice import Board, BoardKind, EdgeId, LatticeError

_VARIANTS = {
    "crossing": Variant.CROSSING,
    "switching": Variant.SWITCHING,
    "doubleResponse": Variant.DOUBLE_RESPONSE,
    "secure": Variant.SECURE,
}
_SPARSE = (Variant.DOUBLE_RESPONSE, Variant.SECURE)


class CreateGameRequest(BaseModel):
    variant: str = "crossing"
    m: int = 6
    n: int = 5
    p: int = 1
    q: int = 1
    humanRole: str = "maker"
    engine: str = "random"
    seed: int = 0


class MoveRequest(BaseModel):
    edges: list[tuple[int, int]] = Field(min_length=1)


@dataclass
class _Session:
    id: str
    state: GameState
    engine: Agent
    human: Player
    engine_kind: str
    last_engine_move: Optional[tuple[EdgeId, ...]] = None
    lock: threading.Lock = field(default_factory=threading.Lock)


def _payload(session: _Session) -> dict:
    state = session.state
    claims = sorted(
        ([e.u, e.v], c.value) for e, c in state.claims.items()
    )
    return {
        "id": session.id,
        "humanRole": session.human.value,
        "engine": session.engine_kind,
        "state": to_record(state),
        "claims": [[edge, claim] for edge, claim in claims],
        "turn": state.turn.value,
        "verdict": state.result.value,
        "owed": state.owed,
        "lastEngineMove": (
            [[e.u, e.v] for e in session.last_engine_move]
            if session.last_engine_move is not None
            else None
        ),
        "overlay": session.engine.overlay(),
    }


def _engine_reply(session: _Session) -> None:
    """Let the engine take its turn when the game is still running."""
    state = session.state
    if state.result is not GameResult.ONGOING:
        return
    if state.turn is session.human:
        return
    edges = tuple(session.engine.move(state))
    session.state = apply_move(state, Move(session.engine.role, edges))
    session.last_engine_move = edges


def create_app() -> FastAPI:
    app = FastAPI(title="crossing games")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    sessions: dict[str, _Session] = {}

    def _get(session_id: str) -> _Session:
        session = sessions.get(session_id)
        if session is None:
            raise HTTPException(404, f"unknown session {session_id}")
        return session

    @app.post("/games")
    def create_game(req: CreateGameRequest) -> dict:
        try:
            variant = _VARIANTS[req.variant]
        except KeyError:
            raise HTTPException(400, f"unknown variant {req.variant!r}")
        try:
            human = Player(req.humanRole)
            kind = AgentKind(req.engine)
        except ValueError as exc:
            raise HTTPException(400, str(exc))
        try:
            if variant in _SPARSE:
                board = Board(BoardKind.INFINITE_STRIP, 0, req.n)
            else:
                board = Board(BoardKind.S, req.m, req.n)
                total = len(board.edge_set())
                if req.p > total or req.q > total:
                    raise HTTPException(
                        400, f"quota exceeds the {total} board edges"
                    )
            engine = make_agent(
                AgentSpec(human.other, kind), board, req.p, req.q, variant
            )
            state = new_game(board, req.p, req.q, variant)
            engine.begin(state, f"service:{req.seed}")
        except (LatticeError, AgentIncompatible, ValueError) as exc:
            raise HTTPException(400, str(exc))
        session = _Session(
            id=uuid.uuid4().hex,
            state=state,
            engine=engine,
            human=human,
            engine_kind=req.engine,
        )
        _engine_reply(session)  # engine opens when the human moves second
        sessions[session.id] = session
        return _payload(session)

    @app.get("/games/{session_id}")
    def get_game(session_id: str) -> dict:
        return _payload(_get(session_id))

    @app.post("/games/{session_id}/moves")
    def submit_move(session_id: str, req: MoveRequest) -> dict:
        session = _get(session_id)
        with session.lock:
            state = session.state
            if state.result is not GameResult.ONGOING:
                raise HTTPException(
                    410, f"game over: {state.result.value} won"
                )
            edges = tuple(EdgeId(u, v) for u, v in req.edges)
            try:
                session.state = apply_move(
                    state, Move(session.human, edges)
                )
            except IllegalMove as exc:
                raise HTTPException(
                    409,
                    {"reason": type(exc).__name__, "message": str(exc)},
                )
            _engine_reply(session)
            return _payload(session)

    @app.get("/games/{session_id}/overlay")
    def get_overlay(session_id: str) -> dict:
        return {"overlay": _get(session_id).engine.overlay()}

    return app


app = create_app()
