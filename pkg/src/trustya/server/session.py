"""One table served live: lobby, phase clock, defaults, reconnection.

SessionCore is synchronous and transport-free.  Feed it parsed client
envelopes, disconnects and timer ticks; collect outbound messages with
take_sends() and timer wishes with take_timers().  The async layer in
app.py owns sockets and sleep; tests drive the core directly.

Every outbound payload is built from view_for, so nothing about foreign
savings, pools or protection cards can reach the wire.  All engine calls
for a phase happen in one deterministic burst (seat order for choices,
investments and purchases, pot order for distributions), which keeps a
live session's event log byte-compatible with an unattended run of the
same seats and seed.
"""

from __future__ import annotations

import secrets
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping, Sequence

from ..bots import BotSeat, is_bot_kind, make_seats
from ..config import ConfigError, GameConfig
from ..engine import (
    EventSink,
    Game,
    Purchase,
    even_split,
    give,
    take,
)
from .protocol import Envelope, ProtocolError, check_payload

HUMAN_KIND = "human"
DEFAULT_GRACE = 60.0
SEQ_CACHE_LIMIT = 64


@dataclass(frozen=True)
class PhaseTimeouts:
    """Seconds a phase stays open before missing actors are defaulted."""
    choice: float = 30.0
    invest: float = 20.0
    distribute: float = 30.0
    shop: float = 20.0

    def __post_init__(self) -> None:
        for stage in ("choice", "invest", "distribute", "shop"):
            if getattr(self, stage) <= 0:
                raise ConfigError(f"{stage} timeout must be positive")

    def for_stage(self, stage: str) -> float:
        return float(getattr(self, stage))

    def to_dict(self) -> dict[str, float]:
        return {"choice": self.choice, "invest": self.invest,
                "distribute": self.distribute, "shop": self.shop}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "PhaseTimeouts":
        known = {"choice", "invest", "distribute", "shop"}
        extra = set(data) - known
        if extra:
            raise ConfigError(f"unknown timeout keys: {sorted(extra)}")
        values = {}
        for key in known & set(data):
            v = data[key]
            if not isinstance(v, (int, float)) or isinstance(v, bool) or v <= 0:
                raise ConfigError(f"timeout {key} must be a positive number")
            values[key] = float(v)
        return cls(**values)


DEFAULT_TIMEOUTS = PhaseTimeouts()


@dataclass(frozen=True)
class Send:
    """One outbound message; seat is set for seat-addressed game traffic."""
    kind: str
    payload: dict[str, Any]
    seat: int | None = None
    conn: str | None = None


@dataclass(frozen=True)
class TimerRequest:
    gen: int
    delay: float


@dataclass
class HumanSlot:
    seat: int
    name: str
    token: str
    claimed: bool = False
    conn: str | None = None


@dataclass
class ConnState:
    last_seq: int = 0
    cache: dict[int, tuple[str, dict[str, Any]]] = field(default_factory=dict)
    order: list[int] = field(default_factory=list)

    def remember(self, seq: int, kind: str, payload: dict[str, Any]) -> None:
        self.cache[seq] = (kind, payload)
        self.order.append(seq)
        while len(self.order) > SEQ_CACHE_LIMIT:
            self.cache.pop(self.order.pop(0), None)


class SessionCore:
    """Serialized session state machine; one engine, one phase clock."""

    def __init__(
        self,
        session_id: str,
        config: GameConfig,
        kinds: Sequence[str],
        *,
        timeouts: PhaseTimeouts | None = None,
        grace: float = DEFAULT_GRACE,
        event_sink: EventSink | None = None,
        clock: Callable[[], float] = time.monotonic,
        token_factory: Callable[[int], str] | None = None,
    ):
        for kind in kinds:
            if kind != HUMAN_KIND and not is_bot_kind(kind):
                raise ConfigError(f"seat kind {kind!r} is neither human nor a bot")
        if grace <= 0:
            raise ConfigError("grace must be positive")
        self.id = session_id
        self.timeouts = timeouts or DEFAULT_TIMEOUTS
        self.grace = float(grace)
        self.clock = clock
        mint = token_factory or (lambda seat: secrets.token_hex(16))

        self.game = Game(config, kinds=list(kinds), event_sink=event_sink)
        names = self.game.player_names()
        self.bots: dict[str, BotSeat] = make_seats(list(kinds), names, config)
        self.humans: dict[int, HumanSlot] = {
            i: HumanSlot(seat=i, name=names[i], token=mint(i))
            for i, kind in enumerate(kinds) if kind == HUMAN_KIND
        }
        self._seat_of = {p.name: p.seat for p in self.game.players}
        self._slot_by_name = {s.name: s for s in self.humans.values()}
        self._slot_by_token = {s.token: s for s in self.humans.values()}

        self.state = "lobby"
        self.paused = False
        self.stage: str | None = None
        self.pending: dict[str, dict[str, Any]] = {}
        self.bot_actions: dict[str, Any] = {}
        self.waiting: set[str] = set()

        self.timer_gen = 0
        self.timer_kind: str | None = None   # "phase" | "grace"
        self.deadline_at: float | None = None

        self._sends: list[Send] = []
        self._timers: list[TimerRequest] = []
        self._conns: dict[str, ConnState] = {}

        self._maybe_start()

    # -- effect queues -------------------------------------------------------

    def take_sends(self) -> list[Send]:
        out, self._sends = self._sends, []
        return out

    def take_timers(self) -> list[TimerRequest]:
        out, self._timers = self._timers, []
        return out

    def _to_seat(self, seat: int, kind: str, payload: dict[str, Any]) -> None:
        slot = self.humans.get(seat)
        conn = slot.conn if slot else None
        self._sends.append(Send(kind=kind, payload=payload, seat=seat, conn=conn))

    def _to_conn(self, conn: str, kind: str, payload: dict[str, Any]) -> None:
        self._sends.append(Send(kind=kind, payload=payload, conn=conn))

    # -- introspection ---------------------------------------------------------

    @property
    def humans_total(self) -> int:
        return len(self.humans)

    def connected_humans(self) -> int:
        return sum(1 for s in self.humans.values() if s.conn is not None)

    def snapshot(self) -> dict[str, Any]:
        return {
            "session": self.id,
            "state": self.state,
            "paused": self.paused,
            "round": self.game.round,
            "phase": self.stage,
            "players": len(self.game.players),
            "humans": self.humans_total,
            "connected": self.connected_humans(),
        }

    def _remaining(self) -> float | None:
        if self.deadline_at is None:
            return None
        return round(max(0.0, self.deadline_at - self.clock()), 3)

    # -- inbound ---------------------------------------------------------------

    def handle_client(self, conn: str, env: Envelope) -> None:
        rec = self._conns.setdefault(conn, ConnState())
        if env.seq in rec.cache:
            kind, payload = rec.cache[env.seq]
            self._to_conn(conn, kind, payload)
            return
        if env.seq <= rec.last_seq:
            self._to_conn(conn, "Error", {
                "reason": "seq_regress",
                "detail": f"seq {env.seq} already consumed"})
            return
        rec.last_seq = env.seq

        try:
            payload = check_payload(env.kind, env.payload)
        except ProtocolError as exc:
            if env.kind in ("Hello", "Join"):
                self._to_conn(conn, "Error",
                              {"reason": exc.reason, "detail": exc.detail})
            else:
                self._reject(conn, rec, env.seq, "schema", exc.detail)
            return

        if env.kind == "Hello":
            self._handle_hello(conn, payload)
        elif env.kind == "Join":
            self._handle_join(conn)
        else:
            self._handle_submit(conn, rec, env.kind, env.seq, payload)

    def handle_disconnect(self, conn: str) -> None:
        self._conns.pop(conn, None)
        slot = self._slot_of_conn(conn)
        if slot is None:
            return
        slot.conn = None
        self.waiting.discard(slot.name)
        if self.state not in ("lobby", "play"):
            return
        if self.humans_total > 0 and self.connected_humans() == 0:
            self._pause()
        else:
            self._pump()

    def handle_timer(self, gen: int) -> None:
        if gen != self.timer_gen or self.timer_kind is None:
            return
        kind = self.timer_kind
        self.timer_kind = None
        self.deadline_at = None
        if kind == "grace":
            self._abort()
        elif self.state == "play" and not self.paused:
            self._resolve_stage()
            if self.state == "play":
                self._enter_stage()
                self._pump()

    # -- identity ----------------------------------------------------------------

    def _slot_of_conn(self, conn: str) -> HumanSlot | None:
        for slot in self.humans.values():
            if slot.conn == conn:
                return slot
        return None

    def _lobby_payload(self) -> dict[str, Any]:
        players = [{"seat": p.seat, "name": p.name,
                    "ready": p.seat not in self.humans
                    or self.humans[p.seat].conn is not None}
                   for p in self.game.players]
        return {"lobby": {
            "state": self.state,
            "players": players,
            "waiting": sum(1 for s in self.humans.values() if s.conn is None),
        }}

    def _handle_hello(self, conn: str, payload: dict[str, Any]) -> None:
        token = payload.get("token")
        if token is None:
            self._to_conn(conn, "StateView", self._lobby_payload())
            return
        slot = self._slot_by_token.get(token)
        if slot is None or self.state == "aborted":
            self._to_conn(conn, "Error",
                          {"reason": "bad_token", "detail": "no seat for token"})
            return
        slot.claimed = True
        self._bind(conn, slot)

    def _handle_join(self, conn: str) -> None:
        if self.state != "lobby":
            self._to_conn(conn, "Error", {
                "reason": "already_started",
                "detail": "session is not accepting new seats"})
            return
        if self._slot_of_conn(conn) is not None:
            self._to_conn(conn, "Error",
                          {"reason": "already_seated", "detail": ""})
            return
        free = next((s for s in self.humans.values() if not s.claimed), None)
        if free is None:
            self._to_conn(conn, "Error", {
                "reason": "session_full",
                "detail": "every seat is claimed"})
            return
        free.claimed = True
        self._bind(conn, free)

    def _bind(self, conn: str, slot: HumanSlot) -> None:
        if slot.conn is not None and slot.conn != conn:
            self._to_conn(slot.conn, "Error", {
                "reason": "superseded",
                "detail": "seat reconnected elsewhere"})
            self._conns.pop(slot.conn, None)
        slot.conn = conn
        self._to_conn(conn, "Joined", {
            "seat": slot.seat,
            "name": slot.name,
            "token": slot.token,
            **self._lobby_payload(),
        })
        resumed = False
        if self.paused:
            resumed = True
            self._resume()
        if self.state == "lobby":
            for other in self.humans.values():
                if other.conn and other.conn != conn:
                    self._to_conn(other.conn, "StateView", self._lobby_payload())
            self._maybe_start()
        elif self.state == "play":
            if slot.name in self._actors() and slot.name not in self.pending:
                self.waiting.add(slot.name)
            if not resumed:
                self._send_stage_snapshot(slot.seat)
        elif self.state == "over":
            self._to_seat(slot.seat, "GameOver", self._game_over_payload())

    # -- lifecycle -----------------------------------------------------------------

    def _maybe_start(self) -> None:
        if self.state != "lobby":
            return
        if any(s.conn is None for s in self.humans.values()):
            return
        self.state = "play"
        rules = {k: v for k, v in self.game.config.to_dict().items()
                 if k != "seed"}
        started = {
            "players": [{"seat": p.seat, "name": p.name}
                        for p in self.game.players],
            "rules": rules,
            "timeouts": self.timeouts.to_dict(),
        }
        for p in self.game.players:
            self._to_seat(p.seat, "GameStarted", started)
        self._enter_stage()
        self._pump()

    def _pause(self) -> None:
        self.paused = True
        self._arm("grace", self.grace)

    def _resume(self) -> None:
        self.paused = False
        self.timer_kind = None
        self.deadline_at = None
        if self.state != "play":
            self.timer_gen += 1   # kill the grace timer
            return
        self.waiting = {
            name for name in self._actors()
            if (slot := self._slot_by_name.get(name)) is not None
            and slot.conn is not None and name not in self.pending
        }
        self._arm("phase", self.timeouts.for_stage(self.stage or "choice"))
        for p in self.game.players:
            self._send_stage_snapshot(p.seat)

    def _abort(self) -> None:
        self.state = "aborted"
        self.paused = False
        self.timer_gen += 1
        self.timer_kind = None
        self.deadline_at = None

    def _arm(self, kind: str, delay: float) -> None:
        self.timer_gen += 1
        self.timer_kind = kind
        self.deadline_at = self.clock() + delay
        self._timers.append(TimerRequest(gen=self.timer_gen, delay=delay))

    # -- stage machinery ---------------------------------------------------------

    def _actors(self) -> list[str]:
        g = self.game
        if self.stage == "invest":
            return [p.name for p in g.players if p.received_pool > 0]
        if self.stage == "distribute":
            return list(g.pots)
        return g.player_names()

    def _pump(self) -> None:
        while self.state == "play" and not self.paused and not self.waiting:
            self._resolve_stage()
            if self.state != "play":
                return
            self._enter_stage()

    def _enter_stage(self) -> None:
        g = self.game
        self.stage = g.phase.value
        self.pending = {}
        self.bot_actions = {}

        if self.stage == "shop":
            # every pot is settled by now; policies may count their returns
            for name, bot in self.bots.items():
                bot.observe_returns(g.view_for(name))

        for name, bot in self.bots.items():
            view = g.view_for(name)
            if self.stage == "choice":
                self.bot_actions[name] = bot.decide_choice(view)
            elif self.stage == "invest":
                self.bot_actions[name] = bot.decide_invest(view)
            elif self.stage == "distribute":
                if name in g.pots:
                    self.bot_actions[name] = bot.decide_distribution(
                        view, g.pots[name])
            else:
                self.bot_actions[name] = bot.decide_purchases(view)

        actors = set(self._actors())
        self.waiting = {
            slot.name for slot in self.humans.values()
            if slot.conn is not None and slot.name in actors
        }
        if self.waiting:
            self._arm("phase", self.timeouts.for_stage(self.stage))
        else:
            self.timer_kind = None
            self.deadline_at = None
        for p in g.players:
            self._send_stage_snapshot(p.seat)

    def _send_stage_snapshot(self, seat: int) -> None:
        g = self.game
        name = g.players[seat].name
        view = g.view_for(name)
        deadline = self._remaining()
        self._to_seat(seat, "StateView", {
            "round": g.round,
            "phase": self.stage,
            "deadline": deadline,
            "view": view.to_payload(),
        })
        if self.stage == "shop":
            self._to_seat(seat, "ShopCatalog",
                          {"round": g.round, **g.shop_catalog()})
        self._to_seat(seat, "PhaseStart", {
            "round": g.round,
            "phase": self.stage,
            "deadline": deadline,
            "you_act": name in self._actors(),
        })

    def _resolve_stage(self) -> None:
        g = self.game
        self.timer_kind = None
        self.deadline_at = None
        stage = self.stage
        if stage == "choice":
            choices = {}
            for p in g.players:
                name = p.name
                if name in self.bot_actions:
                    choices[name] = self.bot_actions[name]
                elif name in self.pending:
                    act = self.pending[name]
                    choices[name] = (take() if act["action"] == "take"
                                     else give(act["target"]))
                else:
                    choices[name] = take()
            g.resolve_choice_phase(choices)
            for name, bot in self.bots.items():
                bot.observe_choices(g.view_for(name))
            for p in g.players:
                view = g.view_for(p.name)
                echo = view.own_choice or {}
                self._to_seat(p.seat, "RoundReveal", {
                    "round": g.round,
                    "pile": g.pile,
                    "exhausted": bool(g.ledger and g.ledger.exhausted),
                    "action": echo.get("action"),
                    "funded": echo.get("funded", False),
                    "givers": list(view.givers),
                })
        elif stage == "invest":
            for p in g.players:
                name = p.name
                if name in self.bot_actions:
                    amount = self.bot_actions[name]
                elif name in self.pending:
                    amount = self.pending[name]["amount"]
                else:
                    pool = p.received_pool
                    threshold = g.config.min_invest_threshold
                    amount = pool if pool >= threshold else 0
                g.resolve_investment(name, amount)
            for p in g.players:
                view = g.view_for(p.name)
                backed = [{"name": o.name, **o.outcome.to_payload()}
                          for o in view.others if o.outcome is not None]
                self._to_seat(p.seat, "InvestResult", {
                    "round": g.round,
                    "pile": g.pile,
                    "own": (view.own_outcome.to_payload()
                            if view.own_outcome else None),
                    "pot": view.own_pot,
                    "backed": backed,
                })
        elif stage == "distribute":
            for holder in list(g.pots):
                if holder in self.bot_actions:
                    plan = self.bot_actions[holder]
                elif holder in self.pending:
                    plan = self.pending[holder]["allocations"]
                else:
                    plan = even_split(g.pots[holder], g.backers_of(holder))
                g.apply_distribution(holder, plan)
        else:
            for p in g.players:
                name = p.name
                if name in self.bot_actions:
                    order = self.bot_actions[name]
                elif name in self.pending:
                    order = [Purchase(item["item"], item["ref"])
                             for item in self.pending[name]["items"]]
                else:
                    order = []
                g.apply_purchases(name, order)
            g.enforce_pcard_maintenance()
            result = g.check_termination()
            if result.over:
                self._finish()
                return
        self.pending = {}
        self.waiting = set()

    def _game_over_payload(self) -> dict[str, Any]:
        g = self.game
        ranked = sorted(g.players, key=lambda p: (-p.savings, p.seat))
        return {
            "reason": g.end_reason,
            "rounds": g.round,
            "pile": g.pile,
            "standings": [{"seat": p.seat, "name": p.name, "savings": p.savings}
                          for p in ranked],
        }

    def _finish(self) -> None:
        self.state = "over"
        self.stage = None
        self.timer_gen += 1
        self.timer_kind = None
        self.deadline_at = None
        payload = self._game_over_payload()
        for p in self.game.players:
            self._to_seat(p.seat, "GameOver", payload)

    # -- submits -----------------------------------------------------------------

    def _reject(self, conn: str, rec: ConnState, seq: int,
                reason: str, detail: str = "") -> None:
        payload = {"seq": seq, "reason": reason, "detail": detail,
                   "round": self.game.round, "phase": self.stage}
        rec.remember(seq, "ActionRejected", payload)
        self._to_conn(conn, "ActionRejected", payload)

    def _handle_submit(self, conn: str, rec: ConnState, kind: str,
                       seq: int, payload: dict[str, Any]) -> None:
        slot = self._slot_of_conn(conn)
        if slot is None:
            self._reject(conn, rec, seq, "no_seat", "join or hello first")
            return
        if self.state != "play":
            self._reject(conn, rec, seq, "not_playing",
                         f"session is {self.state}")
            return
        if payload["round"] != self.game.round or payload["phase"] != self.stage:
            self._reject(conn, rec, seq, "stale",
                         f"game is at round {self.game.round} {self.stage}")
            return
        name = slot.name
        if name not in self._actors():
            self._reject(conn, rec, seq, "not_actor",
                         "nothing to do this phase")
            return
        if name in self.pending:
            self._reject(conn, rec, seq, "already_submitted", "")
            return

        problem = self._validate(name, kind, payload)
        if problem is not None:
            self._reject(conn, rec, seq, "invalid", problem)
            return

        self.pending[name] = payload
        self.waiting.discard(name)
        ack = {"seq": seq, "round": payload["round"], "phase": payload["phase"]}
        rec.remember(seq, "ActionAck", ack)
        self._to_conn(conn, "ActionAck", ack)
        self._pump()

    def _validate(self, name: str, kind: str,
                  payload: dict[str, Any]) -> str | None:
        """Check a submit against the acting player's own view of the game."""
        g = self.game
        view = g.view_for(name)
        if kind == "SubmitChoice":
            if payload["action"] == "give":
                target = payload["target"]
                if target == name:
                    return "cannot give to yourself"
                if target not in self._seat_of:
                    return f"no player named {target!r}"
        elif kind == "SubmitInvest":
            amount = payload["amount"]
            if amount > view.received_pool:
                return (f"amount {amount} exceeds received pool "
                        f"{view.received_pool}")
            if amount > 0 and view.received_pool < g.config.min_invest_threshold:
                return "pool is below the minimum investable size"
        elif kind == "SubmitDistribution":
            pot = g.pots.get(name)
            if pot is None:
                return "no pot to distribute"
            backers = set(g.backers_of(name))
            total = 0
            for backer, cut in payload["allocations"].items():
                if backer not in backers:
                    return f"{backer} did not back you this round"
                total += cut
            if total > pot:
                return f"allocated {total} exceeds pot {pot}"
        elif kind == "SubmitPurchase":
            cfg = g.config
            total = 0
            for item in payload["items"]:
                if item["item"] == "pcard":
                    if item["ref"] not in cfg.pcard_costs:
                        return f"unknown protection card {item['ref']!r}"
                    total += cfg.pcard_costs[item["ref"]]
                else:
                    try:
                        total += cfg.emoji_price(item["ref"])
                    except ConfigError:
                        return f"unknown emoji {item['ref']!r}"
            if total > view.savings:
                return f"order costs {total}, savings are {view.savings}"
        return None
