"""Baseline bot strategies.

Nine kinds, from degenerate to cooperative:

  Taking         always takes, never buys
  BadSharing     everyone gives to one leader who takes and banks it all
  LuckySharing   everyone gives to one leader who stakes it all every round
  Smart          gives where past returns were best, invests everything,
                 splits pots evenly, buys protection cards
  SmartRandom    Smart, but 5% of rounds give to a uniformly random player
  Smarter        Smart, but only buys cards it expects to keep
  SmarterRandom  Smarter with the 5% exploration
  Status         gives to whoever shows the most status symbols; climbs the
                 symbol ladder, buying the cheapest rank it lacks
  SmartStatus    Status, but only buys after a round in which it received

Policies are pure functions of (view, memory, policy rng); BotSeat wires
the observation points so the simulator and the live server drive bots
through exactly the same code.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .config import FACES, GameConfig
from .engine import (
    ChoiceAction,
    PlayerView,
    Purchase,
    derive_seed,
    even_split,
    give,
    take,
)

BOT_KINDS = (
    "Taking",
    "BadSharing",
    "LuckySharing",
    "Smart",
    "SmartRandom",
    "Smarter",
    "SmarterRandom",
    "Status",
    "SmartStatus",
)

SMART_FAMILY = {"Smart", "SmartRandom", "Smarter", "SmarterRandom"}
STATUS_FAMILY = {"Status", "SmartStatus"}
COORDINATED = {"BadSharing", "LuckySharing"}
EXPLORE_PROB = 0.05


def is_bot_kind(kind: str) -> bool:
    return kind in BOT_KINDS


@dataclass
class BotMemory:
    """Everything a bot remembers between phases and rounds."""
    coins_given: dict[str, int] = field(default_factory=dict)
    coins_returned: dict[str, int] = field(default_factory=dict)
    untried: set[str] = field(default_factory=set)
    # purchase gates look one round back, so both values are kept
    received_this_round: bool = False
    received_last_round: bool = False
    supporters_this_round: int = 0
    supporters_last_round: int = 0

    def estimate(self, target: str) -> float:
        given = self.coins_given.get(target, 0)
        if given == 0:
            return 0.0
        return self.coins_returned.get(target, 0) / given


def _pick(rng: random.Random, candidates: list[str]) -> str:
    return candidates[rng.randrange(len(candidates))]


def _argmax_uniform(rng: random.Random, scored: list[tuple[str, float]]) -> str:
    best = max(score for _, score in scored)
    ties = [name for name, score in scored if score == best]
    return _pick(rng, ties)


class BotSeat:
    """One bot at the table: policy + memory + its own rng stream."""

    def __init__(self, kind: str, name: str, cfg: GameConfig, seat: int,
                 leader: str | None = None):
        if kind not in BOT_KINDS:
            raise ValueError(f"unknown bot kind {kind!r}")
        if kind in COORDINATED and leader is None:
            raise ValueError(f"{kind} needs a leader")
        self.kind = kind
        self.name = name
        self.cfg = cfg
        self.leader = leader
        self.rng = random.Random(derive_seed(cfg.seed, f"policy-{seat}"))
        self.memory = BotMemory()

    @property
    def is_leader(self) -> bool:
        return self.kind in COORDINATED and self.leader == self.name

    def init_roster(self, names: list[str]) -> None:
        self.memory.untried = {n for n in names if n != self.name}

    # -- decisions ----------------------------------------------------------

    def decide_choice(self, view: PlayerView) -> ChoiceAction:
        kind = self.kind
        if kind == "Taking":
            return take()
        if kind in COORDINATED:
            return take() if self.is_leader else give(self.leader)
        others = [o.name for o in view.others]
        if kind in SMART_FAMILY:
            if kind in ("SmartRandom", "SmarterRandom") \
                    and self.rng.random() < EXPLORE_PROB:
                return give(_pick(self.rng, others))
            untried = sorted(self.memory.untried & set(others))
            if untried:
                return give(_pick(self.rng, untried))
            scored = [(n, self.memory.estimate(n)) for n in others]
            return give(_argmax_uniform(self.rng, scored))
        # status family: back whoever displays the most symbols
        scored = [(o.name, float(len(o.emojis))) for o in view.others]
        return give(_argmax_uniform(self.rng, scored))

    def decide_invest(self, view: PlayerView) -> int:
        pool = view.received_pool
        if pool == 0 or pool < self.cfg.min_invest_threshold:
            return 0
        if self.kind == "BadSharing" and self.is_leader:
            return 0
        return pool

    def decide_distribution(self, view: PlayerView, pot: int) -> dict[str, int]:
        backers = list(view.givers)
        if not backers or pot == 0:
            return {}
        if self.kind in COORDINATED or self.kind in STATUS_FAMILY:
            # these kinds count themselves into the even split, so the
            # figurehead prospers along with the people funding it
            share = pot // (len(backers) + 1)
            return {b: share for b in backers}
        return even_split(pot, backers)

    def decide_purchases(self, view: PlayerView) -> list[Purchase]:
        kind = self.kind
        cfg = self.cfg
        buys_pcards = kind in SMART_FAMILY or (
            kind == "LuckySharing" and self.is_leader)
        if buys_pcards:
            require_support = kind in ("Smarter", "SmarterRandom")
            for face in FACES:   # increasing price
                if view.pcards[face] > 0:
                    continue
                if cfg.pcard_costs[face] > view.savings:
                    continue
                if require_support and \
                        self.memory.supporters_last_round < cfg.pcard_thresholds[face]:
                    continue
                return [Purchase("pcard", face)]
            return []
        if kind in STATUS_FAMILY:
            if kind == "SmartStatus" and not self.memory.received_last_round:
                return []
            owned = set(view.emojis)
            for eid, price in cfg.emoji_catalog():
                if eid in owned:
                    continue
                if price <= view.savings:
                    return [Purchase("emoji", eid)]
                break   # ranks above are pricier still
        return []

    # -- observations ---------------------------------------------------------

    def observe_choices(self, view: PlayerView) -> None:
        """Call once per round after the choice phase resolves."""
        self.memory.received_last_round = self.memory.received_this_round
        self.memory.supporters_last_round = self.memory.supporters_this_round
        self.memory.received_this_round = view.received_pool > 0
        self.memory.supporters_this_round = len(view.givers)
        echo = view.own_choice
        if not echo or not echo.get("funded"):
            return
        action = echo["action"]
        if action["action"] != "give":
            return
        target = action["target"]
        self.memory.untried.discard(target)
        self.memory.coins_given[target] = \
            self.memory.coins_given.get(target, 0) + self.cfg.c_give

    def observe_returns(self, view: PlayerView) -> None:
        """Call once per round after every pot has been distributed."""
        for other in view.others:
            if other.share is not None:
                self.memory.coins_returned[other.name] = \
                    self.memory.coins_returned.get(other.name, 0) + other.share


def assign_leaders(kinds: list[str], names: list[str]) -> dict[str, str]:
    """First seat of each coordinated kind leads it."""
    leaders: dict[str, str] = {}
    for kind, name in zip(kinds, names):
        if kind in COORDINATED and kind not in leaders:
            leaders[kind] = name
    return leaders


def make_seats(kinds: list[str], names: list[str],
               cfg: GameConfig) -> dict[str, BotSeat]:
    """BotSeat per bot seat, keyed by name; non-bot kinds are skipped."""
    leaders = assign_leaders(kinds, names)
    seats: dict[str, BotSeat] = {}
    for seat, (kind, name) in enumerate(zip(kinds, names)):
        if not is_bot_kind(kind):
            continue
        seats[name] = BotSeat(kind, name, cfg, seat, leader=leaders.get(kind))
        seats[name].init_roster(names)
    return seats
