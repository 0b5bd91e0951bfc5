"""The wire format: JSON text frames, one envelope per message.

Every frame, in either direction, is {kind, session, seq, payload}.
Sequence numbers count per connection and per direction, starting at 1;
a client that resends a submit keeps its seq, which is what makes
resubmission idempotent on the server side.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Mapping

CLIENT_KINDS = (
    "Hello",
    "Join",
    "SubmitChoice",
    "SubmitInvest",
    "SubmitDistribution",
    "SubmitPurchase",
)

SERVER_KINDS = (
    "Joined",
    "GameStarted",
    "PhaseStart",
    "ActionAck",
    "ActionRejected",
    "RoundReveal",
    "InvestResult",
    "ShopCatalog",
    "StateView",
    "GameOver",
    "Error",
)

# which engine phase each submit kind is allowed to land in
SUBMIT_PHASES = {
    "SubmitChoice": "choice",
    "SubmitInvest": "invest",
    "SubmitDistribution": "distribute",
    "SubmitPurchase": "shop",
}

MAX_FRAME_BYTES = 64 * 1024


class ProtocolError(ValueError):
    def __init__(self, reason: str, detail: str = ""):
        super().__init__(detail or reason)
        self.reason = reason
        self.detail = detail


@dataclass(frozen=True)
class Envelope:
    kind: str
    session: str
    seq: int
    payload: dict[str, Any]


def parse_envelope(raw: str | bytes) -> Envelope:
    """Decode one client frame; rejects anything that is not an envelope."""
    if len(raw) > MAX_FRAME_BYTES:
        raise ProtocolError("oversized", f"frame exceeds {MAX_FRAME_BYTES} bytes")
    try:
        data = json.loads(raw)
    except (ValueError, UnicodeDecodeError) as exc:
        raise ProtocolError("bad_json", str(exc)) from None
    if not isinstance(data, dict):
        raise ProtocolError("bad_envelope", "frame must be a JSON object")
    kind = data.get("kind")
    if not isinstance(kind, str):
        raise ProtocolError("bad_envelope", "missing kind")
    if kind not in CLIENT_KINDS:
        raise ProtocolError("unknown_kind", f"unknown kind {kind!r}")
    session = data.get("session")
    if not isinstance(session, str) or not session:
        raise ProtocolError("bad_envelope", "missing session id")
    seq = data.get("seq")
    if not isinstance(seq, int) or isinstance(seq, bool) or seq < 1:
        raise ProtocolError("bad_envelope", "seq must be a positive integer")
    payload = data.get("payload", {})
    if not isinstance(payload, dict):
        raise ProtocolError("bad_envelope", "payload must be an object")
    return Envelope(kind=kind, session=session, seq=seq, payload=payload)


def encode_envelope(kind: str, session: str, seq: int,
                    payload: Mapping[str, Any]) -> str:
    return json.dumps(
        {"kind": kind, "session": session, "seq": seq, "payload": dict(payload)},
        sort_keys=True, separators=(",", ":"))


def _need_int(payload: Mapping[str, Any], key: str, minimum: int = 0) -> int:
    value = payload.get(key)
    if not isinstance(value, int) or isinstance(value, bool) or value < minimum:
        raise ProtocolError("schema", f"{key} must be an integer >= {minimum}")
    return value


def _need_str(payload: Mapping[str, Any], key: str) -> str:
    value = payload.get(key)
    if not isinstance(value, str) or not value:
        raise ProtocolError("schema", f"{key} must be a non-empty string")
    return value


def check_payload(kind: str, payload: Mapping[str, Any]) -> dict[str, Any]:
    """Shape-check a client payload and return it normalized.

    Submits must name the round and phase they target so the server can
    refuse anything stale; the phase has to match the submit kind.
    """
    if kind == "Hello":
        token = payload.get("token")
        if token is not None and not isinstance(token, str):
            raise ProtocolError("schema", "token must be a string")
        return {"token": token}
    if kind == "Join":
        return {}

    phase = SUBMIT_PHASES.get(kind)
    if phase is None:
        raise ProtocolError("schema", f"{kind} is not a submit")
    rnd = _need_int(payload, "round", minimum=1)
    if payload.get("phase") != phase:
        raise ProtocolError("schema", f"{kind} must target phase {phase!r}")
    out: dict[str, Any] = {"round": rnd, "phase": phase}

    if kind == "SubmitChoice":
        action = payload.get("action")
        if action == "take":
            out["action"] = "take"
            out["target"] = None
        elif action == "give":
            out["action"] = "give"
            out["target"] = _need_str(payload, "target")
        else:
            raise ProtocolError("schema", "action must be 'take' or 'give'")
    elif kind == "SubmitInvest":
        out["amount"] = _need_int(payload, "amount")
    elif kind == "SubmitDistribution":
        allocations = payload.get("allocations")
        if not isinstance(allocations, dict):
            raise ProtocolError("schema", "allocations must be an object")
        clean: dict[str, int] = {}
        for name, cut in allocations.items():
            if not isinstance(name, str) or not name:
                raise ProtocolError("schema", "allocation keys must be names")
            if not isinstance(cut, int) or isinstance(cut, bool) or cut < 0:
                raise ProtocolError(
                    "schema", "allocation values must be non-negative integers")
            clean[name] = cut
        out["allocations"] = clean
    elif kind == "SubmitPurchase":
        items = payload.get("items")
        if not isinstance(items, list):
            raise ProtocolError("schema", "items must be a list")
        clean_items: list[dict[str, str]] = []
        for entry in items:
            if not isinstance(entry, dict):
                raise ProtocolError("schema", "each item must be an object")
            what = entry.get("item")
            if what not in ("pcard", "emoji"):
                raise ProtocolError("schema", "item must be 'pcard' or 'emoji'")
            ref = entry.get("ref")
            if not isinstance(ref, str) or not ref:
                raise ProtocolError("schema", "item ref must be a string")
            clean_items.append({"item": what, "ref": ref})
        out["items"] = clean_items
    return out
