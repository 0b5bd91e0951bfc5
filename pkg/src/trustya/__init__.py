"""trustya: a cooperative betting game engine, bots, and multiplayer service."""

from .config import ConfigError, GameConfig
from .engine import (
    ActionError,
    Card,
    ChoiceAction,
    Game,
    GameError,
    BackedOutcome,
    InvestmentOutcome,
    Phase,
    PhaseError,
    PlayerView,
    Purchase,
    even_split,
    give,
    payout,
    penalty,
    round_half_away,
    take,
)
from .metrics import GameSummary, gini, summarize
from .sim import SimSpec, replay_log, run_batch, run_game

__all__ = [
    "ActionError",
    "Card",
    "ChoiceAction",
    "ConfigError",
    "Game",
    "GameConfig",
    "GameError",
    "GameSummary",
    "BackedOutcome",
    "InvestmentOutcome",
    "Phase",
    "PhaseError",
    "PlayerView",
    "Purchase",
    "SimSpec",
    "even_split",
    "gini",
    "give",
    "payout",
    "penalty",
    "replay_log",
    "round_half_away",
    "run_batch",
    "run_game",
    "summarize",
    "take",
]
