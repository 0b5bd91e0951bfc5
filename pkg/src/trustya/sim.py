"""Unattended games: batch runs, replay verification, baseline sweeps."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Mapping, Sequence

from .bots import BOT_KINDS, BotSeat, is_bot_kind, make_seats
from .config import ConfigError, GameConfig
from .engine import ChoiceAction, Game, GameError, Phase, Purchase
from .events import LogError, read_log, write_log
from .metrics import Aggregate, GameSummary, aggregate, summarize

BASELINE_BASE_SEED = 7001


# ---------------------------------------------------------------------------
# single game


def run_game(
    cfg: GameConfig,
    kinds: Sequence[str],
    event_sink: Callable[[dict[str, Any]], None] | None = None,
    after_op: Callable[[Game], None] | None = None,
) -> Game:
    """Play one all-bot game to completion and return the finished Game."""
    for kind in kinds:
        if not is_bot_kind(kind):
            raise ConfigError(f"unattended games need bot seats, got {kind!r}")
    game = Game(cfg, kinds=list(kinds), event_sink=event_sink)
    seats = make_seats(list(kinds), game.player_names(), cfg)
    check = after_op or (lambda g: None)
    names = game.player_names()

    while game.phase != Phase.OVER:
        choices = {n: seats[n].decide_choice(game.view_for(n)) for n in names}
        game.resolve_choice_phase(choices)
        check(game)
        for n in names:
            seats[n].observe_choices(game.view_for(n))
        for n in names:
            game.resolve_investment(n, seats[n].decide_invest(game.view_for(n)))
            check(game)
        if game.phase == Phase.DISTRIBUTE:
            for holder in list(game.pots):
                plan = seats[holder].decide_distribution(
                    game.view_for(holder), game.pots[holder])
                game.apply_distribution(holder, plan)
                check(game)
        for n in names:
            seats[n].observe_returns(game.view_for(n))
        for n in names:
            game.apply_purchases(n, seats[n].decide_purchases(game.view_for(n)))
            check(game)
        game.enforce_pcard_maintenance()
        check(game)
        game.check_termination()
        check(game)
    return game


# ---------------------------------------------------------------------------
# batch specs


@dataclass
class SimSpec:
    """A batch: one table layout played across consecutive seeds."""
    config: GameConfig
    roster: dict[str, int]
    seeds: int = 1
    base_seed: int = 0

    def __post_init__(self) -> None:
        if self.seeds < 1:
            raise ConfigError("seeds must be positive")
        if not self.roster:
            raise ConfigError("roster must not be empty")
        total = 0
        for kind, count in self.roster.items():
            if not is_bot_kind(kind):
                raise ConfigError(
                    f"unknown bot kind {kind!r}; known: {', '.join(BOT_KINDS)}")
            if not isinstance(count, int) or count < 1:
                raise ConfigError(f"roster count for {kind} must be positive")
            total += count
        if total != self.config.n_players:
            raise ConfigError(
                f"roster seats {total} do not match n_players {self.config.n_players}")

    def seat_kinds(self) -> list[str]:
        kinds: list[str] = []
        for kind, count in self.roster.items():
            kinds.extend([kind] * count)
        return kinds

    def label(self) -> str:
        return ",".join(f"{kind}x{count}" for kind, count in self.roster.items())

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "SimSpec":
        known = {"config", "roster", "seeds", "base_seed"}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown spec keys: {sorted(unknown)}")
        if "roster" not in data:
            raise ConfigError("spec needs a roster")
        return cls(
            config=GameConfig.from_dict(data.get("config", {})),
            roster=dict(data["roster"]),
            seeds=data.get("seeds", 1),
            base_seed=data.get("base_seed", 0),
        )

    @classmethod
    def from_file(cls, path: str | Path) -> "SimSpec":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"spec is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("spec document must be a JSON object")
        return cls.from_dict(data)


@dataclass
class BatchResult:
    spec: SimSpec
    summaries: list[tuple[int, GameSummary]]
    agg: Aggregate
    out_dir: Path | None = None
    log_paths: list[Path] = field(default_factory=list)


def run_batch(spec: SimSpec, out_dir: str | Path | None = None,
              label: str | None = None) -> BatchResult:
    """Run spec.seeds games on consecutive seeds; optionally write artifacts.

    Outputs are deterministic: rerunning the same spec reproduces every
    log and csv byte for byte.
    """
    import dataclasses as _dc

    label = label or spec.label()
    kinds = spec.seat_kinds()
    summaries: list[tuple[int, GameSummary]] = []
    log_paths: list[Path] = []
    out = Path(out_dir) if out_dir is not None else None

    for k in range(spec.seeds):
        seed = spec.base_seed + k
        cfg = _dc.replace(spec.config, seed=seed)
        game = run_game(cfg, kinds)
        summaries.append((seed, summarize(game.events)))
        if out is not None:
            path = out / "logs" / f"seed{seed}.jsonl"
            write_log(game.events, path)
            log_paths.append(path)

    agg = aggregate([s for _, s in summaries])
    result = BatchResult(spec=spec, summaries=summaries, agg=agg,
                         out_dir=out, log_paths=log_paths)
    if out is not None:
        _write_summary_csv(out / "summary.csv", label, summaries)
        _write_aggregate_csv(out / "aggregate.csv", {label: agg})
        _write_scatter_csv(out / "scatter.csv", [(label, summaries)])
    return result


def _write_summary_csv(path: Path, label: str,
                       summaries: list[tuple[int, GameSummary]]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["roster", "seed", "rounds", "end_reason",
                    "gini", "earnings_fraction"])
        for seed, s in summaries:
            w.writerow([label, seed, s.rounds, s.end_reason,
                        f"{s.gini:.6f}", f"{s.earnings_fraction:.6f}"])


def _write_aggregate_csv(path: Path, aggs: Mapping[str, Aggregate]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["roster", "games", "mean_gini", "std_gini",
                    "mean_earnings", "std_earnings", "mean_rounds"])
        for label, agg in aggs.items():
            w.writerow([label, agg.count,
                        f"{agg.mean_gini:.6f}", f"{agg.std_gini:.6f}",
                        f"{agg.mean_earnings:.6f}", f"{agg.std_earnings:.6f}",
                        f"{agg.mean_rounds:.2f}"])


def _write_scatter_csv(path: Path,
                       groups: list[tuple[str, list[tuple[int, GameSummary]]]]
                       ) -> None:
    """One (gini, earnings) point per game, for inequality/earnings plots."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["roster", "seed", "gini", "earnings_fraction"])
        for label, summaries in groups:
            for seed, s in summaries:
                w.writerow([label, seed,
                            f"{s.gini:.6f}", f"{s.earnings_fraction:.6f}"])


# ---------------------------------------------------------------------------
# replay


@dataclass
class Divergence:
    index: int
    note: str
    expected: dict[str, Any] | None = None
    produced: dict[str, Any] | None = None


@dataclass
class ReplayReport:
    ok: bool
    events: int
    divergences: list[Divergence] = field(default_factory=list)
    error: str | None = None

    def first_problem(self) -> str | None:
        if self.error:
            return self.error
        if self.divergences:
            d = self.divergences[0]
            return f"event {d.index}: {d.note}"
        return None


def replay_events(expected: Sequence[Mapping[str, Any]]) -> ReplayReport:
    """Re-run the actions in a log and diff every regenerated event.

    The log carries the config and the submitted actions; everything else
    (names, card draws, rng indices) is regenerated and must match the
    log exactly.
    """
    if not expected or expected[0].get("event_kind") != "game_started":
        return ReplayReport(ok=False, events=len(expected),
                            error="log does not begin with game_started")
    divergences: list[Divergence] = []
    produced: list[dict[str, Any]] = []
    try:
        start = expected[0]["payload"]
        config = GameConfig.from_dict(start["config"])
        kinds = [p["kind"] for p in start["players"]]
        game = Game(config, kinds=kinds, event_sink=produced.append)
    except (ConfigError, GameError, KeyError, TypeError) as exc:
        return ReplayReport(ok=False, events=len(expected),
                            error=f"cannot rebuild game from header: {exc}")

    def flush_invest() -> None:
        if game.phase == Phase.INVEST:
            for name in game.pending_investors():
                game.resolve_investment(name, 0)

    i = 1
    try:
        while i < len(expected) and game.phase != Phase.OVER:
            event = expected[i]
            kind = event.get("event_kind")
            payload = event.get("payload", {})
            if kind == "choices_resolved":
                choices = {n: ChoiceAction.from_payload(c)
                           for n, c in payload["choices"].items()}
                game.resolve_choice_phase(choices)
            elif kind == "investment_resolved":
                game.resolve_investment(payload["player"], payload["invested"])
            elif kind == "distribution_applied":
                flush_invest()
                game.apply_distribution(payload["player"],
                                        dict(payload["allocations"]))
            elif kind == "purchases_applied":
                flush_invest()
                order = [Purchase.from_payload(x) for x in payload["order"]]
                game.apply_purchases(payload["player"], order)
            elif kind in ("pcards_lost", "round_ended"):
                flush_invest()
                game.enforce_pcard_maintenance()
                game.check_termination()
                # both tail events (and game_over) are regenerated in one
                # step; the diff below lines everything up
                i += 1
                while i < len(expected) and expected[i].get("event_kind") in (
                        "round_ended", "game_over"):
                    i += 1
                continue
            elif kind == "game_over":
                pass
            else:
                divergences.append(Divergence(
                    index=i, note=f"unknown event kind {kind!r}",
                    expected=dict(event)))
                break
            i += 1
    except (GameError, ConfigError, KeyError, TypeError, ValueError) as exc:
        divergences.append(Divergence(
            index=i, note=f"logged action could not be applied: {exc}",
            expected=dict(expected[i]) if i < len(expected) else None))

    limit = max(len(produced), len(expected))
    for idx in range(limit):
        if idx >= len(produced):
            divergences.append(Divergence(
                index=idx, note="log has events the replay never produced",
                expected=dict(expected[idx])))
            break
        if idx >= len(expected):
            divergences.append(Divergence(
                index=idx, note="replay produced events missing from the log",
                produced=produced[idx]))
            break
        if produced[idx] != expected[idx]:
            divergences.append(Divergence(
                index=idx, note="event mismatch",
                expected=dict(expected[idx]), produced=produced[idx]))
            break

    return ReplayReport(ok=not divergences, events=len(expected),
                        divergences=divergences)


def replay_log(path: str | Path) -> ReplayReport:
    try:
        events = read_log(path)
    except (LogError, OSError) as exc:
        return ReplayReport(ok=False, events=0, error=str(exc))
    return replay_events(events)


# ---------------------------------------------------------------------------
# baselines


def baseline_spec(kind: str, n_players: int = 10, seeds: int = 30,
                  base_seed: int = BASELINE_BASE_SEED) -> SimSpec:
    """Homogeneous table of one bot kind with the reference settings."""
    cfg = GameConfig(n_players=n_players, hard_stop=True)
    return SimSpec(config=cfg, roster={kind: n_players},
                   seeds=seeds, base_seed=base_seed)


def run_baselines(out_dir: str | Path | None = None, seeds: int = 30,
                  base_seed: int = BASELINE_BASE_SEED,
                  kinds: Sequence[str] = BOT_KINDS,
                  n_players: int = 10) -> dict[str, BatchResult]:
    """Sweep every bot kind on its own table; write per-kind and combined csv."""
    out = Path(out_dir) if out_dir is not None else None
    results: dict[str, BatchResult] = {}
    for kind in kinds:
        spec = baseline_spec(kind, n_players=n_players, seeds=seeds,
                             base_seed=base_seed)
        sub = out / kind if out is not None else None
        results[kind] = run_batch(spec, out_dir=sub, label=kind)
    if out is not None:
        _write_aggregate_csv(out / "baselines.csv",
                             {k: r.agg for k, r in results.items()})
        _write_scatter_csv(out / "scatter.csv",
                           [(k, r.summaries) for k, r in results.items()])
    return results
