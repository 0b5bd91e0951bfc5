import { describe, expect, test } from "vitest";

import { encodeClientFrame, parseServerFrame } from "../src/protocol.js";

describe("client frames", () => {
    test("submits carry kind, session, seq and payload", () => {
        const text = encodeClientFrame(
            { kind: "SubmitInvest", payload: { round: 3, phase: "invest", amount: 40 } },
            "abc", 7);
        expect(JSON.parse(text)).toEqual({
            kind: "SubmitInvest",
            session: "abc",
            seq: 7,
            payload: { round: 3, phase: "invest", amount: 40 },
        });
    });

    test("hello and join encode their payloads verbatim", () => {
        expect(JSON.parse(encodeClientFrame(
            { kind: "Hello", payload: { token: null } }, "s", 1)).payload)
            .toEqual({ token: null });
        expect(JSON.parse(encodeClientFrame(
            { kind: "Join", payload: {} }, "s", 2)).payload).toEqual({});
    });
});

describe("server frames", () => {
    test("a known kind parses into a typed envelope", () => {
        const env = parseServerFrame(JSON.stringify({
            kind: "PhaseStart",
            session: "abc",
            seq: 4,
            payload: { round: 1, phase: "choice", deadline: 30, you_act: true },
        }));
        expect(env.kind).toBe("PhaseStart");
        if (env.kind === "PhaseStart") {
            expect(env.payload.you_act).toBe(true);
            expect(env.payload.deadline).toBe(30);
        }
    });

    test("garbage and unknown kinds are refused", () => {
        expect(() => parseServerFrame("{broken")).toThrow();
        expect(() => parseServerFrame("[1,2]")).toThrow();
        expect(() => parseServerFrame(JSON.stringify({
            kind: "Surprise", session: "s", seq: 1, payload: {},
        }))).toThrow(/unknown server kind/);
        expect(() => parseServerFrame(JSON.stringify({
            kind: "Error", session: "s", payload: {},
        }))).toThrow(/seq/);
        expect(() => parseServerFrame(JSON.stringify({
            kind: "Error", session: "s", seq: 0,
        }))).toThrow(/payload/);
    });
});
