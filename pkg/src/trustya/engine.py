"""Deterministic rules engine for the trust-ya table game.

A game is a sequence of rounds, each with four phases:

  choice      every player either takes coins from the central pile or
              gives pile coins to another player's received pool
  invest      every player stakes some or all of their received pool on a
              card draw; number cards pay out of the pile into a pending
              pot, unprotected face cards cost savings back to the pile
  distribute  each player holding a pot splits it among the round's givers
  shop        players spend savings on protection cards and status symbols,
              then cards above the supporter thresholds are kept and the
              rest decay

All randomness flows through one seeded stream so that (config, seed)
pins down the entire game.  Every state change is mirrored as an event
dict handed to an optional sink; the event list plus the config is enough
to replay the game move for move.

Coin conservation invariant, checked after every operation in tests:

  central_pile + sum(savings) + sum(received_pool) + sum(pending pots)
    + burned == c_ppp * n_players

`burned` counts coins permanently out of circulation: invested stakes
(the stake itself is consumed by the draw; only the payout, taken from
the pile, comes back).  Shop spending instead flows back into the
central pile, where it can be won again.
"""

from __future__ import annotations

import math
import random
import zlib
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Iterable, Mapping, Sequence

from .config import FACES, ConfigError, GameConfig

RANKS = ("A", "2", "3", "4", "5", "6", "7", "8", "9", "10", "J", "Q", "K")
SUITS = ("C", "D", "H", "S")

EXPONENT_CAP = 512.0  # keeps 2**(i/2) finite for absurd stakes


class GameError(Exception):
    pass


class PhaseError(GameError):
    """Operation attempted in the wrong phase."""


class ActionError(GameError):
    """Structurally valid phase, invalid action content."""


class Phase(str, Enum):
    CHOICE = "choice"
    INVEST = "invest"
    DISTRIBUTE = "distribute"
    SHOP = "shop"
    OVER = "over"


# ---------------------------------------------------------------------------
# formulas


def round_half_away(x: float) -> int:
    """Round to nearest integer, halves away from zero."""
    if x >= 0:
        return math.floor(x + 0.5)
    return -round_half_away(-x)


def payout(invested: int, card_value: int, cfg: GameConfig) -> int:
    """Coins won on a non-face draw: round((2^(i/2) - 1) * v * alpha)."""
    if invested < 0:
        raise ValueError("invested must be non-negative")
    if invested == 0:
        return 0
    exponent = min(invested / 2.0, EXPONENT_CAP)
    growth = max(2.0 ** exponent - 1.0, 0.0)
    return round_half_away(growth * card_value * cfg.alpha)


def penalty(savings: int, available: int, invested: int, card_value: int) -> int:
    """Coins lost on an unprotected face draw.

    round((s + r - i) * (i / r) * (v / 100)), never more than the coins the
    player would otherwise hold afterwards (s + r - i).
    """
    if available <= 0 or invested <= 0 or invested > available:
        raise ValueError("penalty requires 0 < invested <= available")
    if savings < 0:
        raise ValueError("savings must be non-negative")
    ceiling = savings + available - invested
    raw = ceiling * (invested / available) * (card_value / 100.0)
    return min(round_half_away(raw), ceiling)


# ---------------------------------------------------------------------------
# randomness


def derive_seed(seed: int, tag: str) -> int:
    """Stable sub-stream seed; crc32 so it never depends on PYTHONHASHSEED."""
    return (seed ^ zlib.crc32(tag.encode("utf-8"))) & 0xFFFFFFFF


class GameRng:
    """Single ordered stream of game-level draws with a draw counter.

    The counter is stamped onto events, so replays detect any change in
    how often or in what order the stream is consumed.
    """

    def __init__(self, seed: int):
        self._rng = random.Random(derive_seed(seed, "game"))
        self.draws = 0

    def shuffled(self, items: Iterable[Any]) -> list[Any]:
        out = list(items)
        self._rng.shuffle(out)
        self.draws += 1
        return out

    def card_index(self) -> int:
        self.draws += 1
        return self._rng.randrange(52)

    def chance(self, p: float) -> bool:
        self.draws += 1
        return self._rng.random() < p


def generate_names(seed: int, count: int) -> list[str]:
    """Unique throwaway display names, three letters then three digits."""
    rng = random.Random(derive_seed(seed, "names"))
    names: list[str] = []
    seen: set[str] = set()
    while len(names) < count:
        name = "".join(rng.choice("abcdefghijklmnopqrstuvwxyz") for _ in range(3))
        name += f"{rng.randrange(1000):03d}"
        if name not in seen:
            seen.add(name)
            names.append(name)
    return names


# ---------------------------------------------------------------------------
# small value types


@dataclass(frozen=True)
class Card:
    rank: str
    suit: str
    value: int

    @property
    def is_face(self) -> bool:
        return self.rank in FACES

    def to_payload(self) -> dict[str, Any]:
        return {"rank": self.rank, "suit": self.suit, "value": self.value}

    @classmethod
    def from_payload(cls, data: Mapping[str, Any]) -> "Card":
        return cls(rank=data["rank"], suit=data["suit"], value=data["value"])


@dataclass(frozen=True)
class ChoiceAction:
    action: str                 # "take" or "give"
    target: str | None = None   # receiver name for gives

    def __post_init__(self) -> None:
        if self.action not in ("take", "give"):
            raise ActionError(f"unknown choice action {self.action!r}")
        if self.action == "give" and not self.target:
            raise ActionError("give requires a target")
        if self.action == "take" and self.target is not None:
            raise ActionError("take has no target")

    def to_payload(self) -> dict[str, Any]:
        return {"action": self.action, "target": self.target}

    @classmethod
    def from_payload(cls, data: Mapping[str, Any]) -> "ChoiceAction":
        return cls(action=data["action"], target=data.get("target"))


def take() -> ChoiceAction:
    return ChoiceAction("take")


def give(target: str) -> ChoiceAction:
    return ChoiceAction("give", target)


@dataclass(frozen=True)
class Purchase:
    item: str   # "pcard" or "emoji"
    ref: str    # face letter or emoji id

    def __post_init__(self) -> None:
        if self.item not in ("pcard", "emoji"):
            raise ActionError(f"unknown purchase item {self.item!r}")

    def to_payload(self) -> dict[str, Any]:
        return {"item": self.item, "ref": self.ref}

    @classmethod
    def from_payload(cls, data: Mapping[str, Any]) -> "Purchase":
        return cls(item=data["item"], ref=data["ref"])


@dataclass
class PlayerState:
    seat: int
    name: str
    kind: str    # "human" or a bot kind label; the engine never reads it
    savings: int = 0
    received_pool: int = 0
    pcards: dict[str, int] = field(
        default_factory=lambda: {f: 0 for f in FACES})
    emojis: list[str] = field(default_factory=list)


@dataclass
class RoundLedger:
    """What the choice phase actually did this round."""
    round: int
    choices: dict[str, ChoiceAction]
    funded: dict[str, bool]
    givers_of: dict[str, list[str]]   # receiver -> funded giver names
    exhausted: bool                    # pile could not fund every action

    def supporters(self, name: str) -> int:
        return len(self.givers_of.get(name, []))


@dataclass(frozen=True)
class InvestmentOutcome:
    player: str
    available: int
    invested: int
    card: Card | None
    payout: int          # coins actually moved into the pot (post-cap)
    penalty: int
    protected: bool
    capped: bool

    def to_payload(self) -> dict[str, Any]:
        return {
            "player": self.player,
            "available": self.available,
            "invested": self.invested,
            "card": self.card.to_payload() if self.card else None,
            "payout": self.payout,
            "penalty": self.penalty,
            "protected": self.protected,
            "capped": self.capped,
        }

    @classmethod
    def from_payload(cls, data: Mapping[str, Any]) -> "InvestmentOutcome":
        card = data.get("card")
        return cls(
            player=data["player"],
            available=data["available"],
            invested=data["invested"],
            card=Card.from_payload(card) if card else None,
            payout=data["payout"],
            penalty=data["penalty"],
            protected=data["protected"],
            capped=data["capped"],
        )


@dataclass(frozen=True)
class TerminationResult:
    over: bool
    reason: str | None    # "pile_empty" | "hard_stop" | "overtime"


# ---------------------------------------------------------------------------
# per-player views


@dataclass(frozen=True)
class BackedOutcome:
    """The slice of an investment result a backer is allowed to see.

    Deliberately thinner than InvestmentOutcome: no penalty (its size is
    a function of the investor's hidden savings), no protection flag and
    no pool total.  Card possession stays inferable from card + payout,
    which is exactly as much as the table learns.
    """
    invested: int
    card: Card | None
    payout: int

    def to_payload(self) -> dict[str, Any]:
        return {
            "invested": self.invested,
            "card": self.card.to_payload() if self.card else None,
            "payout": self.payout,
        }

    @classmethod
    def from_payload(cls, data: Mapping[str, Any]) -> "BackedOutcome":
        card = data.get("card")
        return cls(
            invested=data["invested"],
            card=Card.from_payload(card) if card else None,
            payout=data["payout"],
        )


@dataclass(frozen=True)
class OtherView:
    """What one player may know about another."""
    name: str
    emojis: tuple[str, ...]
    outcome: BackedOutcome | None       # only if we backed them this round
    share: int | None                   # our cut of their pot, once split

    def to_payload(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "emojis": list(self.emojis),
            "outcome": self.outcome.to_payload() if self.outcome else None,
            "share": self.share,
        }

    @classmethod
    def from_payload(cls, data: Mapping[str, Any]) -> "OtherView":
        outcome = data.get("outcome")
        return cls(
            name=data["name"],
            emojis=tuple(data["emojis"]),
            outcome=BackedOutcome.from_payload(outcome) if outcome else None,
            share=data.get("share"),
        )


@dataclass(frozen=True)
class PlayerView:
    """Everything a single player is allowed to see.

    Wire payloads and bot policies both consume this; nothing about the
    other players' savings, pools, pots, or protection cards appears here.
    """
    round: int
    phase: str
    pile: int
    name: str
    savings: int
    received_pool: int
    givers: tuple[str, ...]
    pcards: dict[str, int]
    emojis: tuple[str, ...]
    own_choice: dict[str, Any] | None   # echo of our resolved action + funded
    own_outcome: InvestmentOutcome | None
    own_pot: int
    others: tuple[OtherView, ...]

    def to_payload(self) -> dict[str, Any]:
        return {
            "round": self.round,
            "phase": self.phase,
            "pile": self.pile,
            "name": self.name,
            "savings": self.savings,
            "received_pool": self.received_pool,
            "givers": list(self.givers),
            "pcards": dict(self.pcards),
            "emojis": list(self.emojis),
            "own_choice": self.own_choice,
            "own_outcome": (self.own_outcome.to_payload()
                            if self.own_outcome else None),
            "own_pot": self.own_pot,
            "others": [o.to_payload() for o in self.others],
        }

    @classmethod
    def from_payload(cls, data: Mapping[str, Any]) -> "PlayerView":
        own = data.get("own_outcome")
        return cls(
            round=data["round"],
            phase=data["phase"],
            pile=data["pile"],
            name=data["name"],
            savings=data["savings"],
            received_pool=data["received_pool"],
            givers=tuple(data["givers"]),
            pcards=dict(data["pcards"]),
            emojis=tuple(data["emojis"]),
            own_choice=data.get("own_choice"),
            own_outcome=InvestmentOutcome.from_payload(own) if own else None,
            own_pot=data.get("own_pot", 0),
            others=tuple(OtherView.from_payload(o) for o in data["others"]),
        )


# ---------------------------------------------------------------------------
# helpers for distribution plans


def even_split(pot: int, backers: Sequence[str]) -> dict[str, int]:
    """Floor-even split; the remainder stays with the investor."""
    if pot < 0:
        raise ValueError("pot must be non-negative")
    if not backers or pot == 0:
        return {}
    share = pot // len(backers)
    return {b: share for b in backers}


def keep_all() -> dict[str, int]:
    return {}


# ---------------------------------------------------------------------------
# the game


EventSink = Callable[[dict[str, Any]], None]


class Game:
    """One table.  Drive it phase by phase; it enforces ordering itself."""

    def __init__(
        self,
        config: GameConfig,
        kinds: Sequence[str] | None = None,
        event_sink: EventSink | None = None,
    ):
        if kinds is None:
            kinds = ["human"] * config.n_players
        if len(kinds) != config.n_players:
            raise ConfigError("kinds must list one entry per seat")
        self.config = config
        self.rng = GameRng(config.seed)
        names = generate_names(config.seed, config.n_players)
        self.players = [
            PlayerState(seat=i, name=names[i], kind=kinds[i])
            for i in range(config.n_players)
        ]
        self._by_name = {p.name: p for p in self.players}
        self.pile = config.total_coins()
        self.burned = 0
        self.round = 1
        self.phase = Phase.CHOICE
        self.end_flag = False
        self.end_reason: str | None = None
        self.events: list[dict[str, Any]] = []
        self._sink = event_sink

        self.ledger: RoundLedger | None = None
        self.outcomes: dict[str, InvestmentOutcome] = {}
        self.pots: dict[str, int] = {}
        self.shares: dict[str, dict[str, int]] = {}   # backer -> investor -> cut
        self._invest_done: set[str] = set()
        self._shopped: set[str] = set()
        self._maintained = False

        self._emit("game_started", {
            "config": config.to_dict(),
            "players": [{"seat": p.seat, "name": p.name, "kind": p.kind}
                        for p in self.players],
        })

    # -- plumbing ----------------------------------------------------------

    def _emit(self, kind: str, payload: dict[str, Any]) -> None:
        event = {
            "round": self.round,
            "phase": self.phase.value,
            "event_kind": kind,
            "payload": payload,
            "rng_draw_index": self.rng.draws,
        }
        self.events.append(event)
        if self._sink is not None:
            self._sink(event)

    def _require_phase(self, phase: Phase) -> None:
        if self.phase != phase:
            raise PhaseError(f"expected phase {phase.value}, in {self.phase.value}")

    def _player(self, name: str) -> PlayerState:
        try:
            return self._by_name[name]
        except KeyError:
            raise ActionError(f"no such player {name!r}") from None

    def player_names(self) -> list[str]:
        return [p.name for p in self.players]

    def total_coins(self) -> int:
        held = sum(p.savings + p.received_pool for p in self.players)
        return self.pile + held + sum(self.pots.values()) + self.burned

    def check_conservation(self) -> None:
        expected = self.config.total_coins()
        actual = self.total_coins()
        if actual != expected:
            raise GameError(f"coin conservation broken: {actual} != {expected}")

    # -- choice ------------------------------------------------------------

    def resolve_choice_phase(
        self, choices: Mapping[str, ChoiceAction]
    ) -> RoundLedger:
        """Apply every player's simultaneous take/give against the pile.

        If the pile cannot fund every action, the funding order is
        shuffled, each action is funded only if coins remain for it, and
        the round is flagged as the game's last.
        """
        self._require_phase(Phase.CHOICE)
        cfg = self.config
        unknown = set(choices) - set(self._by_name)
        if unknown:
            raise ActionError(f"choices for unknown players: {sorted(unknown)}")
        # anyone without a choice takes; this is also the timeout default
        choices = {n: choices.get(n, take()) for n in self._by_name}
        for name, choice in choices.items():
            if choice.action == "give":
                if choice.target == name:
                    raise ActionError(f"{name} cannot give to itself")
                self._player(choice.target)  # must exist

        order = self.player_names()
        cost = {n: (cfg.c_take if choices[n].action == "take" else cfg.c_give)
                for n in order}
        exhausted = sum(cost.values()) > self.pile
        if exhausted:
            order = self.rng.shuffled(order)

        funded: dict[str, bool] = {n: False for n in self._by_name}
        givers_of: dict[str, list[str]] = {n: [] for n in self._by_name}
        for name in order:
            choice = choices[name]
            if self.pile < cost[name]:
                continue
            self.pile -= cost[name]
            funded[name] = True
            if choice.action == "take":
                self._player(name).savings += cfg.c_take
            else:
                self._player(choice.target).received_pool += cfg.c_give
                givers_of[choice.target].append(name)

        if exhausted:
            self.end_flag = True
        # report givers in seat order so logs do not depend on funding order
        seat_pos = {n: i for i, n in enumerate(self.player_names())}
        for receiver in givers_of:
            givers_of[receiver].sort(key=seat_pos.__getitem__)

        self.ledger = RoundLedger(
            round=self.round,
            choices=dict(choices),
            funded=funded,
            givers_of={r: g for r, g in givers_of.items() if g},
            exhausted=exhausted,
        )
        self._emit("choices_resolved", {
            "choices": {n: choices[n].to_payload() for n in self.player_names()},
            "funded": {n: funded[n] for n in self.player_names()},
            "givers_of": self.ledger.givers_of,
            "exhausted": exhausted,
            "pile": self.pile,
        })
        self.phase = Phase.INVEST
        self.outcomes = {}
        self.pots = {}
        self.shares = {}
        self._invest_done = set()
        return self.ledger

    # -- invest ------------------------------------------------------------

    def resolve_investment(self, player: str, amount: int) -> InvestmentOutcome:
        """Stake `amount` of the player's received pool on a card draw.

        The unstaked remainder banks into savings.  Number cards and
        protected faces fill a pending pot from the pile (capped at what
        the pile holds; a capped pot ends the game after this round).
        Unprotected faces cost savings back to the pile.  The stake itself
        is consumed either way.
        """
        self._require_phase(Phase.INVEST)
        p = self._player(player)
        if player in self._invest_done:
            raise ActionError(f"{player} already invested this round")
        if not isinstance(amount, int) or isinstance(amount, bool):
            raise ActionError("invest amount must be an integer")
        if amount < 0:
            raise ActionError("invest amount must be non-negative")
        if amount > p.received_pool:
            raise ActionError("cannot invest more than the received pool")
        cfg = self.config
        if amount > 0 and p.received_pool < cfg.min_invest_threshold:
            raise ActionError(
                f"pool below minimum investable size {cfg.min_invest_threshold}")

        available = p.received_pool
        savings_before = p.savings
        p.savings += available - amount
        p.received_pool = 0

        card: Card | None = None
        pot = 0
        pen = 0
        protected = False
        capped = False
        if amount > 0:
            self.burned += amount
            idx = self.rng.card_index()
            rank = RANKS[idx % 13]
            suit = SUITS[idx // 13]
            value = cfg.face_value(rank) if rank in FACES else RANKS.index(rank) + 1
            card = Card(rank=rank, suit=suit, value=value)
            if card.is_face and p.pcards[card.rank] == 0:
                pen = penalty(savings_before, available, amount, value)
                p.savings -= pen
                self.pile += pen
            else:
                protected = card.is_face
                raw = payout(amount, value, cfg)
                pot = min(raw, self.pile)
                capped = pot < raw
                self.pile -= pot
                if capped:
                    self.end_flag = True
                if pot > 0:
                    self.pots[player] = pot

        outcome = InvestmentOutcome(
            player=player, available=available, invested=amount, card=card,
            payout=pot, penalty=pen, protected=protected, capped=capped)
        self.outcomes[player] = outcome
        self._invest_done.add(player)
        if available > 0 or amount > 0:
            self._emit("investment_resolved",
                       dict(outcome.to_payload(), pile=self.pile))
        if len(self._invest_done) == len(self.players):
            if self.pots:
                self.phase = Phase.DISTRIBUTE
            else:
                self._open_shop()
        return outcome

    def pending_investors(self) -> list[str]:
        return [p.name for p in self.players if p.name not in self._invest_done]

    # -- distribute ----------------------------------------------------------

    def backers_of(self, player: str) -> list[str]:
        if self.ledger is None or self.ledger.round != self.round:
            return []
        return list(self.ledger.givers_of.get(player, []))

    def apply_distribution(self, player: str, allocations: Mapping[str, int]) -> None:
        """Split `player`'s pending pot among this round's backers.

        Unallocated coins stay with the investor.  Only funded givers of
        this player may appear, and the total may not exceed the pot.
        """
        self._require_phase(Phase.DISTRIBUTE)
        if player not in self.pots:
            raise ActionError(f"{player} has no pending pot")
        pot = self.pots[player]
        backers = set(self.backers_of(player))
        total = 0
        for backer, cut in allocations.items():
            if backer not in backers:
                raise ActionError(f"{backer} did not back {player} this round")
            if not isinstance(cut, int) or isinstance(cut, bool) or cut < 0:
                raise ActionError("shares must be non-negative integers")
            total += cut
        if total > pot:
            raise ActionError(f"allocated {total} exceeds pot {pot}")

        p = self._player(player)
        for backer in self.backers_of(player):
            cut = allocations.get(backer, 0)
            self._player(backer).savings += cut
            self.shares.setdefault(backer, {})[player] = cut
        kept = pot - total
        p.savings += kept
        del self.pots[player]
        self._emit("distribution_applied", {
            "player": player,
            "pot": pot,
            "allocations": {b: allocations.get(b, 0)
                            for b in self.backers_of(player)},
            "kept": kept,
        })
        if not self.pots:
            self._open_shop()

    # -- shop ----------------------------------------------------------------

    def _open_shop(self) -> None:
        self.phase = Phase.SHOP
        self._shopped = set()
        self._maintained = False

    def shop_catalog(self) -> dict[str, Any]:
        cfg = self.config
        return {
            "pcards": [{"face": f, "price": cfg.pcard_costs[f],
                        "threshold": cfg.pcard_thresholds[f]} for f in FACES],
            "emojis": [{"id": eid, "price": price}
                       for eid, price in cfg.emoji_catalog()],
        }

    def apply_purchases(self, player: str, order: Sequence[Purchase]) -> None:
        """Buy the whole order or none of it; coins spent rejoin the pile."""
        self._require_phase(Phase.SHOP)
        p = self._player(player)
        if player in self._shopped:
            raise ActionError(f"{player} already shopped this round")
        cfg = self.config
        total = 0
        for item in order:
            if item.item == "pcard":
                if item.ref not in FACES:
                    raise ActionError(f"unknown protection card {item.ref!r}")
                total += cfg.pcard_costs[item.ref]
            else:
                total += cfg.emoji_price(item.ref)
        if total > p.savings:
            raise ActionError(
                f"order costs {total}, savings are {p.savings}")
        p.savings -= total
        self.pile += total
        for item in order:
            if item.item == "pcard":
                p.pcards[item.ref] += 1
            else:
                p.emojis.append(item.ref)
        self._shopped.add(player)
        if order:
            self._emit("purchases_applied", {
                "player": player,
                "order": [i.to_payload() for i in order],
                "spent": total,
                "savings": p.savings,
            })

    def enforce_pcard_maintenance(self) -> list[tuple[str, str]]:
        """Remove one card per under-supported face; closes the shop."""
        self._require_phase(Phase.SHOP)
        if self._maintained:
            raise PhaseError("maintenance already applied this round")
        thresholds = self.config.pcard_thresholds
        losses: list[tuple[str, str]] = []
        for p in self.players:
            support = self.ledger.supporters(p.name) if self.ledger else 0
            for face in FACES:
                if p.pcards[face] > 0 and support < thresholds[face]:
                    p.pcards[face] -= 1
                    losses.append((p.name, face))
        self._maintained = True
        if losses:
            self._emit("pcards_lost", {
                "losses": [{"player": n, "face": f} for n, f in losses],
            })
        return losses

    # -- round end -----------------------------------------------------------

    def check_termination(self) -> TerminationResult:
        """Close the round: decide stop/continue and advance or finish."""
        self._require_phase(Phase.SHOP)
        if not self._maintained:
            raise PhaseError("maintenance must run before the round can close")

        reason: str | None = None
        if self.pile == 0 or self.end_flag:
            reason = "pile_empty"
        elif self.config.hard_stop:
            if self.round >= self.config.round_limit:
                reason = "hard_stop"
        elif self.round > self.config.round_limit:
            # overtime rolls begin with the first round past the limit, so
            # the expected overtime length is 1/termination_prob rounds
            if self.rng.chance(self.config.termination_prob):
                reason = "overtime"

        supporters = {p.name: (self.ledger.supporters(p.name)
                               if self.ledger else 0)
                      for p in self.players}
        self._emit("round_ended", {
            "pile": self.pile,
            "savings": {p.name: p.savings for p in self.players},
            "supporters": supporters,
            "over": reason is not None,
            "reason": reason,
        })
        if reason is not None:
            self.end_reason = reason
            self.phase = Phase.OVER
            self._emit("game_over", {
                "reason": reason,
                "rounds": self.round,
                "pile": self.pile,
                "burned": self.burned,
                "standings": {p.name: p.savings for p in self.players},
            })
            return TerminationResult(over=True, reason=reason)

        self.round += 1
        self.phase = Phase.CHOICE
        self.ledger = None
        self.outcomes = {}
        self.shares = {}
        return TerminationResult(over=False, reason=None)

    # -- views ---------------------------------------------------------------

    def view_for(self, player: str) -> PlayerView:
        """The game as seen from one seat; leaks nothing about the rest."""
        p = self._player(player)
        ledger = self.ledger if self.ledger and self.ledger.round == self.round else None
        own_choice = None
        if ledger is not None:
            choice = ledger.choices.get(player)
            if choice is not None:
                own_choice = {
                    "action": choice.to_payload(),
                    "funded": ledger.funded.get(player, False),
                }
        givers = tuple(ledger.givers_of.get(player, [])) if ledger else ()
        my_shares = self.shares.get(player, {})
        others = []
        for q in self.players:
            if q.name == player:
                continue
            outcome = None
            if q.name in self.outcomes and player in set(self.backers_of(q.name)):
                full = self.outcomes[q.name]
                outcome = BackedOutcome(
                    invested=full.invested, card=full.card, payout=full.payout)
            others.append(OtherView(
                name=q.name,
                emojis=tuple(q.emojis),
                outcome=outcome,
                share=my_shares.get(q.name),
            ))
        return PlayerView(
            round=self.round,
            phase=self.phase.value,
            pile=self.pile,
            name=p.name,
            savings=p.savings,
            received_pool=p.received_pool,
            givers=givers,
            pcards=dict(p.pcards),
            emojis=tuple(p.emojis),
            own_choice=own_choice,
            own_outcome=self.outcomes.get(player),
            own_pot=self.pots.get(player, 0),
            others=tuple(others),
        )
