"""Event log serialization.

One JSON object per line, keys sorted, so identical games produce
byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Iterable


class LogError(ValueError):
    """Raised when a log file cannot be parsed."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


def dump_event(event: dict[str, Any]) -> str:
    return json.dumps(event, sort_keys=True, separators=(",", ":"))


def write_log(events: Iterable[dict[str, Any]], path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        for event in events:
            fh.write(dump_event(event))
            fh.write("\n")


def read_log(path: str | Path) -> list[dict[str, Any]]:
    events = []
    with Path(path).open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                event = json.loads(line)
            except json.JSONDecodeError as exc:
                raise LogError(f"invalid JSON ({exc.msg})", line=lineno) from exc
            if not isinstance(event, dict) or "event_kind" not in event:
                raise LogError("not an event object", line=lineno)
            events.append(event)
    if not events:
        raise LogError("log is empty")
    return events
