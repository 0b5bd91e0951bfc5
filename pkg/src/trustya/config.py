"""Game configuration.

All tunable parameters live in one dataclass so a game is fully described
by (config, seed).  Defaults match the ten-player table setup used for the
baseline experiments.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field
from typing import Any, Mapping

FACES = ("J", "Q", "K")

# Ten ranked status symbols; rank k costs 50*k coins unless equal_price_mode.
DEFAULT_EMOJI_RANKS = tuple(f"sym{k}" for k in range(1, 11))
EMOJI_BASE_PRICE = 50


class ConfigError(ValueError):
    """Raised for invalid or unknown configuration input."""


def default_thresholds(n_players: int) -> dict[str, int]:
    """Supporter counts required to keep each protection card face."""
    return {
        "J": 1,
        "Q": math.ceil(n_players / 4),
        "K": math.ceil(n_players / 2),
    }


@dataclass
class GameConfig:
    n_players: int = 10
    c_ppp: int = 10000          # coins per player poured into the central pile
    c_give: int = 2
    c_take: int = 2
    v_jack: int = 10
    v_queen: int = 25
    v_king: int = 50
    round_limit: int = 50
    termination_prob: float = 0.10
    hard_stop: bool = False
    min_invest_threshold: int = 0
    pcard_costs: dict[str, int] = field(
        default_factory=lambda: {"J": 200, "Q": 500, "K": 1000})
    pcard_thresholds: dict[str, int] | None = None
    equal_price_mode: bool = False
    alpha_override: float | None = None
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n_players < 3:
            raise ConfigError("n_players must be at least 3")
        for name in ("c_ppp", "c_give", "c_take"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")
        # payout needs v >= 1, and higher faces must not pay less
        if not 1 <= self.v_jack <= self.v_queen <= self.v_king:
            raise ConfigError(
                "face values must satisfy 1 <= v_jack <= v_queen <= v_king")
        if self.round_limit < 1:
            raise ConfigError("round_limit must be positive")
        if not 0.0 <= self.termination_prob <= 1.0:
            raise ConfigError("termination_prob must be in [0, 1]")
        if self.min_invest_threshold < 0:
            raise ConfigError("min_invest_threshold must be non-negative")
        if set(self.pcard_costs) != set(FACES):
            raise ConfigError("pcard_costs must cover exactly J, Q, K")
        if any(v < 0 for v in self.pcard_costs.values()):
            raise ConfigError("pcard_costs must be non-negative")
        if not (self.pcard_costs["J"] < self.pcard_costs["Q"]
                < self.pcard_costs["K"]):
            raise ConfigError(
                "pcard costs must be strictly increasing J < Q < K")
        if self.pcard_thresholds is None:
            self.pcard_thresholds = default_thresholds(self.n_players)
        elif set(self.pcard_thresholds) != set(FACES):
            raise ConfigError("pcard_thresholds must cover exactly J, Q, K")
        if self.alpha_override is not None and self.alpha_override <= 0:
            raise ConfigError("alpha_override must be positive")

    @property
    def alpha(self) -> float:
        if self.alpha_override is not None:
            return self.alpha_override
        return 50.0 / self.n_players

    def face_value(self, face: str) -> int:
        return {"J": self.v_jack, "Q": self.v_queen, "K": self.v_king}[face]

    def emoji_catalog(self) -> tuple[tuple[str, int], ...]:
        """Ordered (id, price) pairs, lowest rank first."""
        if self.equal_price_mode:
            return tuple((e, EMOJI_BASE_PRICE) for e in DEFAULT_EMOJI_RANKS)
        return tuple((e, EMOJI_BASE_PRICE * (k + 1))
                     for k, e in enumerate(DEFAULT_EMOJI_RANKS))

    def emoji_price(self, emoji_id: str) -> int:
        for eid, price in self.emoji_catalog():
            if eid == emoji_id:
                return price
        raise ConfigError(f"unknown emoji id {emoji_id!r}")

    def total_coins(self) -> int:
        return self.c_ppp * self.n_players

    def to_dict(self) -> dict[str, Any]:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "GameConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**dict(data))

    @classmethod
    def from_json(cls, text: str) -> "GameConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config document must be a JSON object")
        return cls.from_dict(data)
