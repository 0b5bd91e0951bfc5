"""Outcome metrics over finished games.

The two headline numbers for a game are the Gini coefficient of final
savings (how unevenly the coins ended up) and the earnings fraction (how
much of the initial pile the players collectively extracted).
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

from .config import GameConfig
from .events import LogError


def gini(values: Sequence[float]) -> float:
    """Mean absolute difference over twice the mean, in [0, 1 - 1/n].

    Computed from the sorted sequence in one pass; for integer inputs the
    only float operation is the final division, so values like the
    one-hoarder case (n-1)/n come out exact.
    """
    n = len(values)
    if n == 0:
        raise ValueError("gini needs at least one value")
    if any(v < 0 for v in values):
        raise ValueError("gini is undefined for negative values")
    total = sum(values)
    if total == 0:
        return 0.0
    ordered = sorted(values)
    # sum_{i<j} (x_j - x_i) == sum_k x_k * (2k - n + 1) for ascending x
    diff_sum = sum(x * (2 * k - n + 1) for k, x in enumerate(ordered))
    return diff_sum / (n * total)


@dataclass
class RoundStats:
    round: int
    pile: int
    total_savings: int
    supporters: dict[str, int]


@dataclass
class GameSummary:
    players: list[str]
    kinds: dict[str, str]
    final_savings: dict[str, int]
    rounds: int
    end_reason: str
    gini: float
    earnings_fraction: float
    series: list[RoundStats] = field(default_factory=list)

    def to_row(self) -> dict[str, Any]:
        return {
            "rounds": self.rounds,
            "end_reason": self.end_reason,
            "gini": self.gini,
            "earnings_fraction": self.earnings_fraction,
        }


def summarize(events: Sequence[Mapping[str, Any]]) -> GameSummary:
    """Reduce a complete event log to a GameSummary.

    Raises LogError when the log does not start with game_started or does
    not reach game_over (reporting the last completed round).
    """
    if not events or events[0].get("event_kind") != "game_started":
        raise LogError("log does not begin with game_started")
    start = events[0]["payload"]
    config = GameConfig.from_dict(start["config"])
    players = [p["name"] for p in start["players"]]
    kinds = {p["name"]: p["kind"] for p in start["players"]}

    series: list[RoundStats] = []
    over: Mapping[str, Any] | None = None
    for event in events:
        kind = event.get("event_kind")
        if kind == "round_ended":
            payload = event["payload"]
            series.append(RoundStats(
                round=event["round"],
                pile=payload["pile"],
                total_savings=sum(payload["savings"].values()),
                supporters=dict(payload["supporters"]),
            ))
        elif kind == "game_over":
            over = event["payload"]
    if over is None:
        last = series[-1].round if series else 0
        raise LogError(f"log ends mid-game (last completed round {last})")

    savings = {name: int(coins) for name, coins in over["standings"].items()}
    total = config.total_coins()
    earned = total - over["pile"]
    return GameSummary(
        players=players,
        kinds=kinds,
        final_savings=savings,
        rounds=over["rounds"],
        end_reason=over["reason"],
        gini=gini([savings[n] for n in players]),
        earnings_fraction=earned / total,
        series=series,
    )


@dataclass
class Aggregate:
    count: int
    mean_gini: float
    std_gini: float
    mean_earnings: float
    std_earnings: float
    mean_rounds: float
    end_reasons: dict[str, int]


def aggregate(summaries: Sequence[GameSummary]) -> Aggregate:
    if not summaries:
        raise ValueError("nothing to aggregate")
    ginis = [s.gini for s in summaries]
    earnings = [s.earnings_fraction for s in summaries]
    reasons: dict[str, int] = {}
    for s in summaries:
        reasons[s.end_reason] = reasons.get(s.end_reason, 0) + 1
    return Aggregate(
        count=len(summaries),
        mean_gini=statistics.fmean(ginis),
        std_gini=statistics.pstdev(ginis) if len(ginis) > 1 else 0.0,
        mean_earnings=statistics.fmean(earnings),
        std_earnings=statistics.pstdev(earnings) if len(earnings) > 1 else 0.0,
        mean_rounds=statistics.fmean(s.rounds for s in summaries),
        end_reasons=reasons,
    )
