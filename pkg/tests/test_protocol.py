"""Wire envelopes and per-kind payload schemas."""

from __future__ import annotations

import json

import pytest

from trustya.server.protocol import (
    CLIENT_KINDS,
    MAX_FRAME_BYTES,
    ProtocolError,
    check_payload,
    encode_envelope,
    parse_envelope,
)


def frame(**overrides):
    data = {"kind": "Hello", "session": "s1", "seq": 1, "payload": {}}
    data.update(overrides)
    return json.dumps(data)


def test_parse_round_trip():
    env = parse_envelope(encode_envelope("Join", "s1", 3, {}))
    assert (env.kind, env.session, env.seq, env.payload) == ("Join", "s1", 3, {})


def test_parse_accepts_bytes():
    assert parse_envelope(frame().encode()).kind == "Hello"


def test_missing_payload_defaults_to_empty():
    env = parse_envelope('{"kind":"Join","session":"s","seq":1}')
    assert env.payload == {}


@pytest.mark.parametrize("raw,reason", [
    ("{nope", "bad_json"),
    ('"a string"', "bad_envelope"),
    ("[1]", "bad_envelope"),
    (frame(kind="Booster"), "unknown_kind"),
    (frame(kind="StateView"), "unknown_kind"),   # server kinds not accepted
    (frame(kind=None), "bad_envelope"),
    (frame(session=""), "bad_envelope"),
    (frame(session=7), "bad_envelope"),
    (frame(seq=0), "bad_envelope"),
    (frame(seq=-2), "bad_envelope"),
    (frame(seq=1.5), "bad_envelope"),
    (frame(seq=True), "bad_envelope"),
    (frame(payload=[1]), "bad_envelope"),
])
def test_parse_rejections(raw, reason):
    with pytest.raises(ProtocolError) as err:
        parse_envelope(raw)
    assert err.value.reason == reason


def test_oversized_frame_rejected():
    big = frame(payload={"junk": "x" * MAX_FRAME_BYTES})
    with pytest.raises(ProtocolError) as err:
        parse_envelope(big)
    assert err.value.reason == "oversized"


def test_hello_and_join_payloads():
    assert check_payload("Hello", {}) == {"token": None}
    assert check_payload("Hello", {"token": "abc"}) == {"token": "abc"}
    with pytest.raises(ProtocolError):
        check_payload("Hello", {"token": 5})
    assert check_payload("Join", {"extra": "ignored"}) == {}


def test_submits_must_name_round_and_matching_phase():
    good = {"round": 2, "phase": "choice", "action": "take"}
    out = check_payload("SubmitChoice", good)
    assert out == {"round": 2, "phase": "choice", "action": "take",
                   "target": None}
    with pytest.raises(ProtocolError):
        check_payload("SubmitChoice", {**good, "phase": "invest"})
    with pytest.raises(ProtocolError):
        check_payload("SubmitChoice", {"phase": "choice", "action": "take"})
    with pytest.raises(ProtocolError):
        check_payload("SubmitChoice", {**good, "round": 0})


def test_choice_payloads():
    out = check_payload("SubmitChoice", {
        "round": 1, "phase": "choice", "action": "give", "target": "bb2"})
    assert out["action"] == "give" and out["target"] == "bb2"
    with pytest.raises(ProtocolError):
        check_payload("SubmitChoice", {
            "round": 1, "phase": "choice", "action": "give"})
    with pytest.raises(ProtocolError):
        check_payload("SubmitChoice", {
            "round": 1, "phase": "choice", "action": "steal"})


def test_invest_payloads():
    out = check_payload("SubmitInvest", {
        "round": 1, "phase": "invest", "amount": 0})
    assert out["amount"] == 0
    for bad in (-1, "3", None, True):
        with pytest.raises(ProtocolError):
            check_payload("SubmitInvest", {
                "round": 1, "phase": "invest", "amount": bad})


def test_distribution_payloads():
    out = check_payload("SubmitDistribution", {
        "round": 1, "phase": "distribute",
        "allocations": {"aa1": 3, "bb2": 0}})
    assert out["allocations"] == {"aa1": 3, "bb2": 0}
    for bad in ([1], {"aa1": -1}, {"aa1": True}, {"": 1}, {"aa1": "3"}, None):
        with pytest.raises(ProtocolError):
            check_payload("SubmitDistribution", {
                "round": 1, "phase": "distribute", "allocations": bad})


def test_purchase_payloads():
    out = check_payload("SubmitPurchase", {
        "round": 1, "phase": "shop",
        "items": [{"item": "pcard", "ref": "J"},
                  {"item": "emoji", "ref": "sym1"}]})
    assert len(out["items"]) == 2
    assert check_payload("SubmitPurchase", {
        "round": 1, "phase": "shop", "items": []})["items"] == []
    for bad in (None, {}, ["J"], [{"item": "crown", "ref": "K"}],
                [{"item": "pcard"}], [{"item": "pcard", "ref": 3}]):
        with pytest.raises(ProtocolError):
            check_payload("SubmitPurchase", {
                "round": 1, "phase": "shop", "items": bad})


def test_every_client_kind_has_a_schema():
    for kind in CLIENT_KINDS:
        if kind in ("Hello", "Join"):
            continue
        phase = {"SubmitChoice": "choice", "SubmitInvest": "invest",
                 "SubmitDistribution": "distribute",
                 "SubmitPurchase": "shop"}[kind]
        base = {"round": 1, "phase": phase, "action": "take", "amount": 0,
                "allocations": {}, "items": []}
        out = check_payload(kind, base)
        assert out["round"] == 1 and out["phase"] == phase
