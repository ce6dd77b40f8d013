"""HTTP assist service: serve catalog puzzles, vet moves, produce hints.

Verdicts are flag-not-block: an inconsistent move is recorded as
``acceptedButUnsolvable`` (the client may undo) rather than refused.  Solver
calls carry a small time budget; when it is exceeded the response degrades to
an unverified accept instead of stalling play.  Sessions live in memory,
are serialized per-session, and are evicted lazily after an idle timeout.
"""

from __future__ import annotations

import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

from fastapi import FastAPI
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import __version__
from .catalog import (
    CatalogError,
    Family,
    FamilyDescriptor,
    InfeasibleParams,
    bundled_descriptor,
    bundled_sizes,
    load_bundled,
    make_instance,
)
from .csp import (
    CspInstance,
    DomainStore,
    Instantiation,
    ResourceLimitError,
    is_extensible,
    propagate,
)
from .ludeme import AllDifferent, ClueRun, GameSpec, LessThan, SumEquals, region_cells
from .translate import WIN, Move, MoveList, compile_game, replay

DEFAULT_IDLE_TTL = 30 * 60.0
DEFAULT_SOLVER_BUDGET = 2.0

OPEN, SOLVED, STUCK = "open", "solved", "stuck"
ACCEPTED, UNSOLVABLE, REJECTED = "accepted", "acceptedButUnsolvable", "rejected"


class ServiceError(Exception):
    status = 500
    error = "InternalError"

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class UnknownSession(ServiceError):
    status = 404
    error = "UnknownSession"


class RejectedMove(ServiceError):
    status = 409
    error = "RejectedMove"


class Unsolvable(ServiceError):
    status = 409
    error = "Unsolvable"


class NoHintNeeded(ServiceError):
    status = 409
    error = "NoHintNeeded"


class NothingToUndo(ServiceError):
    status = 409
    error = "NothingToUndo"


@dataclass
class _HistoryEntry:
    cell: int
    value: int
    verdict: str
    unverified: bool


@dataclass
class _Session:
    id: str
    family: Family
    size: int
    seed: Optional[int]
    spec: GameSpec
    instance: CspInstance
    hints: dict[int, int]
    filled: dict[int, int] = field(default_factory=dict)
    history: list[_HistoryEntry] = field(default_factory=list)
    status: str = OPEN
    lock: threading.Lock = field(default_factory=threading.Lock)
    last_access: float = field(default_factory=time.monotonic)


class _SessionTable:
    """Concurrent session registry with lazy idle eviction."""

    def __init__(self, idle_ttl: float):
        self.idle_ttl = idle_ttl
        self._sessions: dict[str, _Session] = {}
        self._lock = threading.Lock()

    def add(self, session: _Session) -> None:
        with self._lock:
            self._evict_locked()
            self._sessions[session.id] = session

    def get(self, session_id: str) -> _Session:
        with self._lock:
            self._evict_locked()
            session = self._sessions.get(session_id)
            if session is None:
                raise UnknownSession(f"no session {session_id}")
            session.last_access = time.monotonic()
            return session

    def _evict_locked(self) -> None:
        deadline = time.monotonic() - self.idle_ttl
        stale = [sid for sid, s in self._sessions.items() if s.last_access < deadline]
        for sid in stale:
            del self._sessions[sid]


# ---------------------------------------------------------------------------
# Serialization


def _condition_obj(spec: GameSpec, condition) -> dict:
    board = spec.board
    if isinstance(condition, AllDifferent):
        return {"kind": "allDifferent", "cells": list(region_cells(board, condition.region))}
    if isinstance(condition, SumEquals):
        return {
            "kind": "sum",
            "cells": list(region_cells(board, condition.region)),
            "op": condition.op,
            "target": condition.target,
        }
    if isinstance(condition, LessThan):
        return {"kind": "less", "a": condition.a, "b": condition.b}
    if isinstance(condition, ClueRun):
        return {
            "kind": "clue",
            "cells": list(region_cells(board, condition.region)),
            "runs": list(condition.runs),
        }
    raise ServiceError(f"unserializable condition {condition!r}")  # pragma: no cover


def _cell_values(mapping: dict[int, int]) -> list[dict[str, int]]:
    return [{"cell": c, "value": mapping[c]} for c in sorted(mapping)]


def _state(session: _Session) -> dict:
    spec = session.spec
    return {
        "sessionId": session.id,
        "family": session.family.value,
        "displayName": session.family.display,
        "size": session.size,
        "name": spec.name,
        "rows": spec.board.rows,
        "columns": spec.board.columns,
        "boxSide": spec.board.box_side,
        "domain": list(session.instance.variables[0].domain),
        "playValues": list(spec.play_values),
        "hints": _cell_values(session.hints),
        "conditions": [_condition_obj(spec, c) for c in spec.end_conditions],
        "filled": _cell_values(session.filled),
        "history": [
            {"cell": h.cell, "value": h.value, "verdict": h.verdict, "unverified": h.unverified}
            for h in session.history
        ],
        "status": session.status,
    }


# ---------------------------------------------------------------------------
# Session logic


def _build_spec(family: Family, size: int, seed: Optional[int]) -> GameSpec:
    if size not in bundled_sizes(family):
        raise InfeasibleParams(
            f"{family.value} size {size} is outside the catalog range {bundled_sizes(family)}"
        )
    if seed is None:
        try:
            return load_bundled(family, size)
        except CatalogError:
            return make_instance(bundled_descriptor(family, size))
    return make_instance(FamilyDescriptor(family=family, size=size, seed=seed))


def _replay_status(session: _Session) -> str:
    spec = session.spec
    full = all(
        c in session.hints or c in session.filled for c in range(spec.board.cell_count)
    )
    if full:
        # Zero entries mark deliberate blanks; replay defaults open cells to 0
        # for zero-admitting games, so they are not Add moves.
        moves = MoveList(
            tuple(Move(cell=c, value=v) for c, v in sorted(session.filled.items()) if v != 0)
        )
        if replay(spec, moves) == WIN:
            return SOLVED
    if session.history and session.history[-1].verdict == UNSOLVABLE:
        return STUCK
    return OPEN


def _mask_values(store: DomainStore, var: int) -> list[int]:
    values = []
    mask = store.masks[var]
    while mask:
        low = mask & -mask
        values.append(low.bit_length() - 1 + store.offset)
        mask ^= low
    return values


def _propagated_store(session: _Session) -> Optional[DomainStore]:
    instance = session.instance
    if session.filled:
        cells = tuple(sorted(session.filled))
        extra = Instantiation(
            vars=cells, values=tuple(session.filled[c] for c in cells), label="filled"
        )
        instance = CspInstance(
            variables=instance.variables,
            constraints=instance.constraints + (extra,),
            array_shape=instance.array_shape,
            name=instance.name,
        )
    store = DomainStore(instance.variables)
    if not propagate(instance, store):
        return None
    return store


def _apply_move(session: _Session, cell: int, value: int, budget: float) -> dict:
    spec = session.spec
    if session.status == SOLVED:
        raise RejectedMove("the puzzle is already solved")
    cell_count = spec.board.cell_count
    if not 0 <= cell < cell_count:
        raise RejectedMove(f"cell {cell} out of range 0..{cell_count - 1}")
    domain = session.instance.variables[cell].domain
    if value not in domain:
        raise RejectedMove(f"value {value} is out of domain (allowed: {list(domain)})")
    if cell in session.hints:
        raise RejectedMove(f"cell {cell} holds a hint")
    if cell in session.filled:
        raise RejectedMove(f"cell {cell} is already filled")

    candidate = dict(session.filled)
    candidate[cell] = value
    verdict, unverified = ACCEPTED, False
    try:
        if not is_extensible(session.instance, candidate, time_limit=budget):
            verdict = UNSOLVABLE
    except ResourceLimitError:
        unverified = True
    session.filled = candidate
    session.history.append(_HistoryEntry(cell, value, verdict, unverified))
    session.status = _replay_status(session)
    return {"verdict": verdict, "unverified": unverified, "state": _state(session)}


def _undo(session: _Session) -> dict:
    if not session.history:
        raise NothingToUndo("no moves to undo")
    entry = session.history.pop()
    session.filled.pop(entry.cell, None)
    session.status = _replay_status(session)
    return _state(session)


def _hint(session: _Session, budget: float) -> dict:
    if session.status == SOLVED:
        raise NoHintNeeded("the puzzle is already solved")
    playable = [
        c
        for c in range(session.spec.board.cell_count)
        if c not in session.hints and c not in session.filled
    ]
    if not playable:
        raise NoHintNeeded("the board is full")

    verified = True
    try:
        if not is_extensible(session.instance, session.filled, time_limit=budget):
            raise Unsolvable("the current position admits no completion; undo to continue")
    except ResourceLimitError:
        verified = False

    store = _propagated_store(session)
    if store is None:
        raise Unsolvable("the current position admits no completion; undo to continue")

    for cell in playable:  # forced first: propagation left a single candidate
        values = _mask_values(store, cell)
        if len(values) == 1:
            return {"cell": cell, "value": values[0], "forced": True, "verified": verified}

    cell = playable[0]
    extensible: list[int] = []
    for value in _mask_values(store, cell):
        try:
            ok = is_extensible(session.instance, {**session.filled, cell: value}, time_limit=budget)
        except ResourceLimitError:
            chosen = extensible[0] if extensible else value
            return {"cell": cell, "value": chosen, "forced": False, "verified": False}
        if ok:
            extensible.append(value)
            if len(extensible) == 2:  # enough to settle the forced flag
                break
    if not extensible:
        raise Unsolvable("no playable value at the next open cell; undo to continue")
    return {
        "cell": cell,
        "value": extensible[0],
        "forced": len(extensible) == 1,
        "verified": verified,
    }


# ---------------------------------------------------------------------------
# FastAPI wiring


class CreateSessionRequest(BaseModel):
    family: str
    size: int
    seed: Optional[int] = None


class MoveRequest(BaseModel):
    cell: int
    value: int


def create_app(
    *,
    idle_ttl: float = DEFAULT_IDLE_TTL,
    solver_budget: float = DEFAULT_SOLVER_BUDGET,
    static_dir: Optional[Union[str, Path]] = None,
) -> FastAPI:
    app = FastAPI(title="puzzlebridge assist service", version=__version__)
    table = _SessionTable(idle_ttl)
    app.state.sessions = table

    @app.exception_handler(ServiceError)
    async def _service_error(_, exc: ServiceError):
        return JSONResponse(status_code=exc.status, content={"error": exc.error, "detail": exc.detail})

    @app.exception_handler(InfeasibleParams)
    async def _infeasible(_, exc: InfeasibleParams):
        return JSONResponse(status_code=422, content={"error": "InfeasibleParams", "detail": str(exc)})

    @app.exception_handler(RequestValidationError)
    async def _validation(_, exc: RequestValidationError):
        return JSONResponse(status_code=422, content={"error": "ValidationError", "detail": str(exc)})

    @app.get("/families")
    def families():
        return {
            "families": [
                {
                    "family": family.value,
                    "displayName": family.display,
                    "sizes": list(bundled_sizes(family)),
                }
                for family in Family
            ]
        }

    @app.post("/sessions", status_code=201)
    def create_session(request: CreateSessionRequest):
        try:
            family = Family(request.family)
        except ValueError:
            raise InfeasibleParams(f"unknown family {request.family!r}") from None
        spec = _build_spec(family, request.size, request.seed)
        session = _Session(
            id=uuid.uuid4().hex,
            family=family,
            size=request.size,
            seed=request.seed,
            spec=spec,
            instance=compile_game(spec),
            hints=spec.placement_map(),
        )
        table.add(session)
        return _state(session)

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        session = table.get(session_id)
        with session.lock:
            return _state(session)

    @app.post("/sessions/{session_id}/moves")
    def post_move(session_id: str, request: MoveRequest):
        session = table.get(session_id)
        with session.lock:
            return _apply_move(session, request.cell, request.value, solver_budget)

    @app.post("/sessions/{session_id}/undo")
    def post_undo(session_id: str):
        session = table.get(session_id)
        with session.lock:
            return _undo(session)

    @app.get("/sessions/{session_id}/hint")
    def get_hint(session_id: str):
        session = table.get(session_id)
        with session.lock:
            return _hint(session, solver_budget)

    if static_dir is not None:
        path = Path(static_dir)
        if not path.is_dir():
            raise ValueError(f"static directory {path} does not exist")
        app.mount("/app", StaticFiles(directory=path, html=True), name="app")

    return app


__all__ = [
    "DEFAULT_IDLE_TTL",
    "DEFAULT_SOLVER_BUDGET",
    "CreateSessionRequest",
    "MoveRequest",
    "NoHintNeeded",
    "NothingToUndo",
    "RejectedMove",
    "ServiceError",
    "UnknownSession",
    "Unsolvable",
    "create_app",
]
