"""HTTP/JSON API hosting live measurement sessions.

In-memory session store with per-session locking; optional JSON snapshot
written on shutdown and replayed on startup. Sessions are addressed by
unguessable random tokens.
"""
from __future__ import annotations

import json
import secrets
import threading
from contextlib import asynccontextmanager
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .exceptions import DomainError, ScriptError
from .scenarios import get_scenario, scenario_descriptors
from .session import SessionCore


class ApiError(Exception):
    def __init__(self, status: int, message: str):
        self.status = status
        self.message = message


class CreateSessionRequest(BaseModel):
    scenario: str
    seed: int | None = None
    dim: int | None = None


class PerformRequest(BaseModel):
    measurement: str


class SessionStore:
    def __init__(self):
        self._lock = threading.Lock()
        self._sessions: dict[str, SessionCore] = {}
        self._actions: dict[str, list[str]] = {}
        self._locks: dict[str, threading.Lock] = {}

    def create(self, scenario_name: str, seed: int | None, dim: int | None,
               session_id: str | None = None) -> tuple[str, SessionCore]:
        scenario = get_scenario(scenario_name, dim)
        if seed is None:
            seed = secrets.randbits(32)
        core = SessionCore(scenario=scenario, seed=seed)
        sid = session_id or secrets.token_urlsafe(16)
        with self._lock:
            self._sessions[sid] = core
            self._actions[sid] = []
            self._locks[sid] = threading.Lock()
        return sid, core

    def get(self, sid: str) -> SessionCore:
        with self._lock:
            core = self._sessions.get(sid)
        if core is None:
            raise ApiError(404, f"unknown session {sid!r}")
        return core

    def lock_for(self, sid: str) -> threading.Lock:
        with self._lock:
            lock = self._locks.get(sid)
        if lock is None:
            raise ApiError(404, f"unknown session {sid!r}")
        return lock

    def record_action(self, sid: str, name: str) -> None:
        with self._lock:
            self._actions[sid].append(name)

    def delete(self, sid: str) -> None:
        with self._lock:
            if sid not in self._sessions:
                raise ApiError(404, f"unknown session {sid!r}")
            del self._sessions[sid]
            del self._actions[sid]
            del self._locks[sid]

    def snapshot(self) -> dict:
        with self._lock:
            return {
                sid: {
                    "scenario": core.scenario.name,
                    "dim": core.scenario.dim,
                    "seed": core.seed,
                    "actions": list(self._actions[sid]),
                }
                for sid, core in self._sessions.items()
            }

    def restore(self, snapshot: dict) -> None:
        for sid, rec in snapshot.items():
            name = rec["scenario"]
            if name.startswith("fourier-"):
                sid2, core = self.create("fourier-n", rec["seed"], rec["dim"],
                                         session_id=sid)
            else:
                sid2, core = self.create(name, rec["seed"], None, session_id=sid)
            for action in rec["actions"]:
                core.perform(action)
                self.record_action(sid2, action)


def create_app(reveal_state: bool = False,
               snapshot_path: str | None = None) -> FastAPI:
    store = SessionStore()

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        if snapshot_path and Path(snapshot_path).exists():
            store.restore(json.loads(Path(snapshot_path).read_text()))
        yield
        if snapshot_path:
            Path(snapshot_path).write_text(json.dumps(store.snapshot(), indent=2))

    app = FastAPI(title="discreteqm session service", lifespan=lifespan)
    app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
                       allow_headers=["*"])
    app.state.store = store
    app.state.reveal_state = reveal_state

    @app.exception_handler(ApiError)
    async def _api_error(request: Request, exc: ApiError):
        return JSONResponse(status_code=exc.status, content={"error": exc.message})

    @app.exception_handler(RequestValidationError)
    async def _bad_request(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"error": "malformed request body"})

    @app.get("/api/scenarios")
    def list_scenarios():
        return {"scenarios": scenario_descriptors()}

    @app.post("/api/sessions", status_code=201)
    def create_session(req: CreateSessionRequest):
        try:
            sid, core = store.create(req.scenario, req.seed, req.dim)
        except DomainError as exc:
            raise ApiError(404, str(exc))
        return core.view(sid, reveal_state)

    @app.get("/api/sessions/{sid}")
    def get_session(sid: str):
        return store.get(sid).view(sid, reveal_state)

    @app.post("/api/sessions/{sid}/measurements")
    def perform_measurement(sid: str, req: PerformRequest):
        lock = store.lock_for(sid)
        with lock:
            core = store.get(sid)
            try:
                event = core.perform(req.measurement)
            except ScriptError as exc:
                raise ApiError(422, str(exc))
            store.record_action(sid, req.measurement)
            return {"event": event.to_dict(), "session": core.view(sid, reveal_state)}

    @app.delete("/api/sessions/{sid}")
    def delete_session(sid: str):
        store.delete(sid)
        return {"deleted": sid}

    return app


def serve(port: int, reveal_state: bool = False, snapshot_path: str | None = None,
          ui_dir: str | None = None, host: str = "127.0.0.1") -> None:
    import uvicorn

    app = create_app(reveal_state=reveal_state, snapshot_path=snapshot_path)
    if ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")
    uvicorn.run(app, host=host, port=port, log_level="info")
