"""HTTP and websocket front: create sessions, stream play, archive logs.

The event loop owns sockets and timers; every game decision stays inside
SessionCore, which each runtime drives through one ordered inbox so a
session never processes two things at once.
"""

from __future__ import annotations

import asyncio
import json
import secrets
from contextlib import asynccontextmanager
from dataclasses import dataclass
from pathlib import Path
from typing import Any, TextIO

from fastapi import Body, FastAPI, HTTPException, WebSocket
from fastapi.responses import PlainTextResponse
from fastapi.staticfiles import StaticFiles

from ..bots import BOT_KINDS, is_bot_kind
from ..config import ConfigError, GameConfig
from ..events import dump_event
from .protocol import ProtocolError, encode_envelope, parse_envelope
from .session import (
    DEFAULT_GRACE,
    DEFAULT_TIMEOUTS,
    HUMAN_KIND,
    PhaseTimeouts,
    SessionCore,
)


@dataclass(frozen=True)
class ServerConfig:
    archive_dir: Path = Path("session-logs")
    timeouts: PhaseTimeouts = DEFAULT_TIMEOUTS
    grace: float = DEFAULT_GRACE
    frontend_dir: Path | None = None

    @classmethod
    def from_args(
        cls,
        defaults_file: str | None = None,
        archive_dir: str | None = None,
        frontend_dir: str | None = None,
    ) -> "ServerConfig":
        timeouts = DEFAULT_TIMEOUTS
        grace = DEFAULT_GRACE
        if defaults_file:
            try:
                data = json.loads(Path(defaults_file).read_text("utf-8"))
            except (OSError, ValueError) as exc:
                raise ConfigError(f"cannot read defaults file: {exc}") from None
            if not isinstance(data, dict):
                raise ConfigError("defaults file must hold a JSON object")
            extra = set(data) - {"timeouts", "grace"}
            if extra:
                raise ConfigError(f"unknown defaults keys: {sorted(extra)}")
            timeouts = PhaseTimeouts.from_dict(data.get("timeouts", {}))
            grace = data.get("grace", DEFAULT_GRACE)
            if not isinstance(grace, (int, float)) or isinstance(grace, bool) \
                    or grace <= 0:
                raise ConfigError("grace must be a positive number")
        return cls(
            archive_dir=Path(archive_dir) if archive_dir else Path("session-logs"),
            timeouts=timeouts,
            grace=float(grace),
            frontend_dir=Path(frontend_dir) if frontend_dir else None,
        )


class SessionRuntime:
    """Async shell around one SessionCore: inbox, timers, peers, log file."""

    def __init__(self, core: SessionCore, log_file: TextIO, log_path: Path):
        self.core = core
        self.log_file = log_file
        self.log_path = log_path
        self.inbox: asyncio.Queue = asyncio.Queue()
        self.peers: dict[str, WebSocket] = {}
        self.out_seq: dict[str, int] = {}
        self.worker: asyncio.Task | None = None
        self._timers: set[asyncio.Task] = set()

    def start(self) -> None:
        self.worker = asyncio.create_task(self._run())

    async def _run(self) -> None:
        await self._drain()   # effects queued during construction
        while True:
            item = await self.inbox.get()
            what = item[0]
            if what == "msg":
                _, conn, env = item
                self.core.handle_client(conn, env)
            elif what == "disc":
                _, conn = item
                self.peers.pop(conn, None)
                self.out_seq.pop(conn, None)
                self.core.handle_disconnect(conn)
            elif what == "timer":
                self.core.handle_timer(item[1])
            await self._drain()

    async def _drain(self) -> None:
        while True:
            timers = self.core.take_timers()
            sends = self.core.take_sends()
            if not timers and not sends:
                break
            for req in timers:
                self._arm(req.gen, req.delay)
            for s in sends:
                if s.conn is None:
                    continue
                ws = self.peers.get(s.conn)
                if ws is None:
                    continue
                seq = self.out_seq.get(s.conn, 0) + 1
                self.out_seq[s.conn] = seq
                text = encode_envelope(s.kind, self.core.id, seq, s.payload)
                try:
                    await ws.send_text(text)
                except Exception:
                    self.peers.pop(s.conn, None)
                    self.out_seq.pop(s.conn, None)
                    self.core.handle_disconnect(s.conn)
        if self.core.state in ("over", "aborted"):
            self.close_log()

    def _arm(self, gen: int, delay: float) -> None:
        async def fire() -> None:
            await asyncio.sleep(delay)
            await self.inbox.put(("timer", gen))

        task = asyncio.create_task(fire())
        self._timers.add(task)
        task.add_done_callback(self._timers.discard)

    def close_log(self) -> None:
        if not self.log_file.closed:
            self.log_file.flush()
            self.log_file.close()

    async def stop(self) -> None:
        for task in list(self._timers):
            task.cancel()
        if self.worker is not None:
            self.worker.cancel()
        self.close_log()


class Hub:
    """All live sessions behind one listener."""

    def __init__(self, cfg: ServerConfig):
        self.cfg = cfg
        self.sessions: dict[str, SessionRuntime] = {}
        cfg.archive_dir.mkdir(parents=True, exist_ok=True)

    def create(self, config: GameConfig, kinds: list[str],
               timeouts: PhaseTimeouts, grace: float) -> SessionRuntime:
        sid = secrets.token_hex(4)
        while sid in self.sessions:
            sid = secrets.token_hex(4)
        path = self.cfg.archive_dir / f"{sid}.jsonl"
        fh = path.open("w", encoding="utf-8")

        def sink(event: dict[str, Any]) -> None:
            fh.write(dump_event(event) + "\n")
            fh.flush()

        core = SessionCore(sid, config, kinds, timeouts=timeouts,
                           grace=grace, event_sink=sink)
        runtime = SessionRuntime(core, fh, path)
        self.sessions[sid] = runtime
        runtime.start()
        return runtime

    async def shutdown(self) -> None:
        for runtime in self.sessions.values():
            await runtime.stop()


def _session_request(cfg: ServerConfig, body: dict[str, Any]
                     ) -> tuple[GameConfig, list[str], PhaseTimeouts, float]:
    if not isinstance(body, dict):
        raise ConfigError("request body must be a JSON object")
    extra = set(body) - {"humans", "bots", "config", "timeouts", "grace"}
    if extra:
        raise ConfigError(f"unknown request keys: {sorted(extra)}")
    humans = body.get("humans", 0)
    if not isinstance(humans, int) or isinstance(humans, bool) or humans < 0:
        raise ConfigError("humans must be a non-negative integer")
    bots = body.get("bots", [])
    if not isinstance(bots, list):
        raise ConfigError("bots must be a list of kind names")
    for kind in bots:
        if not isinstance(kind, str) or not is_bot_kind(kind):
            raise ConfigError(
                f"unknown bot kind {kind!r}; known: {', '.join(BOT_KINDS)}")
    total = humans + len(bots)
    if total < 3:
        raise ConfigError("3 or more players are needed")

    overrides = body.get("config", {})
    if not isinstance(overrides, dict):
        raise ConfigError("config must be an object")
    merged = dict(overrides)
    merged["n_players"] = total
    if "seed" not in merged:
        merged["seed"] = secrets.randbits(32)
    config = GameConfig.from_dict(merged)

    t_body = body.get("timeouts", {})
    if not isinstance(t_body, dict):
        raise ConfigError("timeouts must be an object")
    timeouts = PhaseTimeouts.from_dict({**cfg.timeouts.to_dict(), **t_body})
    grace = body.get("grace", cfg.grace)
    if not isinstance(grace, (int, float)) or isinstance(grace, bool) or grace <= 0:
        raise ConfigError("grace must be a positive number")

    kinds = [HUMAN_KIND] * humans + list(bots)
    return config, kinds, timeouts, float(grace)


def create_app(cfg: ServerConfig | None = None) -> FastAPI:
    cfg = cfg or ServerConfig()
    hub = Hub(cfg)

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        yield
        await hub.shutdown()

    app = FastAPI(lifespan=lifespan)
    app.state.hub = hub

    @app.post("/sessions")
    async def create_session(body: dict[str, Any] = Body(...)) -> dict[str, Any]:
        try:
            config, kinds, timeouts, grace = _session_request(cfg, body)
        except ConfigError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from None
        runtime = hub.create(config, kinds, timeouts, grace)
        return runtime.core.snapshot()

    @app.get("/sessions")
    async def list_sessions() -> dict[str, Any]:
        return {"sessions": [r.core.snapshot() for r in hub.sessions.values()]}

    @app.get("/sessions/{sid}/log")
    async def session_log(sid: str) -> PlainTextResponse:
        path = cfg.archive_dir / f"{sid}.jsonl"
        if sid not in hub.sessions and not path.exists():
            raise HTTPException(status_code=404, detail="no such session")
        runtime = hub.sessions.get(sid)
        if runtime is not None and not runtime.log_file.closed:
            runtime.log_file.flush()
        return PlainTextResponse(path.read_text("utf-8"))

    @app.websocket("/ws")
    async def ws_endpoint(ws: WebSocket) -> None:
        await ws.accept()
        conn = secrets.token_hex(8)
        bound: SessionRuntime | None = None
        while True:
            msg = await ws.receive()
            if msg["type"] == "websocket.disconnect":
                break
            raw = msg.get("text")
            if raw is None:
                raw = (msg.get("bytes") or b"").decode("utf-8", "replace")
            try:
                env = parse_envelope(raw)
            except ProtocolError as exc:
                await ws.send_text(encode_envelope(
                    "Error", "", 0,
                    {"reason": exc.reason, "detail": exc.detail}))
                continue
            runtime = hub.sessions.get(env.session)
            if runtime is None:
                await ws.send_text(encode_envelope(
                    "Error", env.session, 0,
                    {"reason": "unknown_session", "detail": ""}))
                continue
            if bound is None:
                bound = runtime
                bound.peers[conn] = ws
            elif runtime is not bound:
                await ws.send_text(encode_envelope(
                    "Error", env.session, 0,
                    {"reason": "wrong_session",
                     "detail": "connection already bound"}))
                continue
            await bound.inbox.put(("msg", conn, env))
        if bound is not None:
            await bound.inbox.put(("disc", conn))

    if cfg.frontend_dir is not None:
        app.mount("/", StaticFiles(directory=cfg.frontend_dir, html=True),
                  name="frontend")

    return app
