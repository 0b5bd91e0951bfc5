"""Shared fixtures and scripted randomness for the test suite."""

from __future__ import annotations

from typing import Iterable

from trustya.config import GameConfig
from trustya.engine import Game, PlayerState

# card_index values: index % 13 is the rank (A,2..10,J,Q,K), index // 13
# the suit (C,D,H,S)
CLUB_A = 0
CLUB_6 = 5
CLUB_J = 10
CLUB_Q = 11
CLUB_K = 12
SPADE_K = 51


class ScriptedRng:
    """GameRng stand-in: cards come from a fixed script.

    `shuffled` is the identity (pile exhaustion funds in seat order) and
    `chance` pops scripted booleans, defaulting to False so games under
    test never end by surprise.
    """

    def __init__(self, cards: Iterable[int] = (), chances: Iterable[bool] = ()):
        self.cards = list(cards)
        self.chances = list(chances)
        self.draws = 0

    def shuffled(self, items):
        self.draws += 1
        return list(items)

    def card_index(self) -> int:
        self.draws += 1
        if not self.cards:
            raise AssertionError("card script exhausted")
        return self.cards.pop(0)

    def chance(self, p: float) -> bool:
        self.draws += 1
        return self.chances.pop(0) if self.chances else False


def player(game: Game, name: str) -> PlayerState:
    return next(p for p in game.players if p.name == name)


def make_game(n: int = 10, cards: Iterable[int] = (), **overrides) -> Game:
    """A human-seat game with a scripted deck, ready at the choice phase."""
    game = Game(GameConfig(n_players=n, **overrides))
    game.rng = ScriptedRng(cards=cards)
    return game


def play_round(game: Game, choices=None, invests=None, plans=None,
               orders=None):
    """Drive one full round with defaults for anything unspecified."""
    from trustya.engine import Phase

    game.resolve_choice_phase(choices or {})
    for n in game.player_names():
        game.resolve_investment(n, (invests or {}).get(n, 0))
    if game.phase == Phase.DISTRIBUTE:
        for holder in list(game.pots):
            game.apply_distribution(holder, (plans or {}).get(holder, {}))
    for n in game.player_names():
        game.apply_purchases(n, (orders or {}).get(n, []))
    game.enforce_pcard_maintenance()
    return game.check_termination()
