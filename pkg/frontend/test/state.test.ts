import { describe, expect, test } from "vitest";

import {
    allocTotal,
    applyEnvelope,
    evenPrefill,
    initialState,
    secondsLeft,
} from "../src/state.js";
import { env, other, view } from "./helpers.js";

const NOW = 1_000_000;

describe("joining and starting", () => {
    test("the lobby flow fills in seat, name, token and roster", () => {
        const s = initialState("t1");
        applyEnvelope(s, env("Joined", {
            seat: 0, name: "ada", token: "tok0",
            lobby: {
                state: "lobby",
                players: [
                    { seat: 0, name: "ada", ready: true },
                    { seat: 1, name: "bob", ready: true },
                    { seat: 2, name: "cyd", ready: true },
                ],
                waiting: 0,
            },
        }), NOW);
        expect(s.seat).toBe(0);
        expect(s.token).toBe("tok0");
        expect(s.lobby?.players).toHaveLength(3);

        applyEnvelope(s, env("GameStarted", {
            players: [{ seat: 0, name: "ada" }, { seat: 1, name: "bob" },
                { seat: 2, name: "cyd" }],
            rules: { n_players: 3, c_ppp: 10000 },
            timeouts: { choice: 30, invest: 20, distribute: 30, shop: 20 },
        }), NOW);
        expect(s.lobby).toBeNull();
        expect(s.rules?.["c_ppp"]).toBe(10000);
        expect(s.history.at(-1)?.text).toContain("table of 3");
    });
});

describe("phase snapshots", () => {
    test("state view then phase start set the clock and the draft once", () => {
        const s = initialState("t1");
        applyEnvelope(s, env("StateView", {
            round: 1, phase: "choice", deadline: 30, view: view(),
        }), NOW);
        applyEnvelope(s, env("PhaseStart", {
            round: 1, phase: "choice", deadline: 30, you_act: true,
        }), NOW);
        expect(s.round).toBe(1);
        expect(s.phase).toBe("choice");
        expect(s.youAct).toBe(true);
        expect(secondsLeft(s, NOW)).toBe(30);
        expect(secondsLeft(s, NOW + 12_000)).toBe(18);
        expect(s.draft.choice).toEqual({ action: "take", target: null });

        // the user picks a target; a replayed snapshot must not wipe it
        s.draft.choice = { action: "give", target: "bob" };
        applyEnvelope(s, env("PhaseStart", {
            round: 1, phase: "choice", deadline: 21, you_act: true,
        }), NOW);
        expect(s.draft.choice).toEqual({ action: "give", target: "bob" });

        // a new phase does reset it
        applyEnvelope(s, env("StateView", {
            round: 1, phase: "invest", deadline: 20,
            view: view({ phase: "invest", received_pool: 4 }),
        }), NOW);
        applyEnvelope(s, env("PhaseStart", {
            round: 1, phase: "invest", deadline: 20, you_act: true,
        }), NOW);
        expect(s.draft.choice).toEqual({ action: "take", target: null });
        expect(s.draft.invest).toBe(4);
    });

    test("the distribute draft prefills the floor split", () => {
        const s = initialState("t1");
        const backers = ["b1", "b2", "b3", "b4", "b5", "b6", "b7", "b8", "b9"];
        applyEnvelope(s, env("StateView", {
            round: 2, phase: "distribute", deadline: 30,
            view: view({
                phase: "distribute", own_pot: 15330, givers: backers,
                others: backers.map((n) => other(n)),
            }),
        }), NOW);
        applyEnvelope(s, env("PhaseStart", {
            round: 2, phase: "distribute", deadline: 30, you_act: true,
        }), NOW);
        expect(Object.values(s.draft.alloc)).toEqual(Array(9).fill(1703));
        expect(allocTotal(s.draft.alloc)).toBe(15327);
    });
});

describe("acks and rejections", () => {
    function midPhase() {
        const s = initialState("t1");
        applyEnvelope(s, env("StateView", {
            round: 1, phase: "choice", deadline: 30, view: view(),
        }), NOW);
        applyEnvelope(s, env("PhaseStart", {
            round: 1, phase: "choice", deadline: 30, you_act: true,
        }), NOW);
        return s;
    }

    test("an ack for the current phase marks the action in", () => {
        const s = midPhase();
        applyEnvelope(s, env("ActionAck", { seq: 2, round: 1, phase: "choice" }), NOW);
        expect(s.submitted).toBe(true);
    });

    test("an ack for some other phase changes nothing", () => {
        const s = midPhase();
        applyEnvelope(s, env("ActionAck", { seq: 2, round: 1, phase: "invest" }), NOW);
        expect(s.submitted).toBe(false);
    });

    test("a stale rejection is a notice, not an error", () => {
        const s = midPhase();
        applyEnvelope(s, env("ActionRejected", {
            seq: 2, reason: "stale", detail: "game is at round 2 choice",
            round: 2, phase: "choice",
        }), NOW);
        expect(s.fatal).toBeNull();
        expect(s.submitted).toBe(false);
        expect(s.notice).toContain("moved on");
    });

    test("other rejections surface their reason inline", () => {
        const s = midPhase();
        applyEnvelope(s, env("ActionRejected", {
            seq: 2, reason: "invalid", detail: "cannot give to yourself",
            round: 1, phase: "choice",
        }), NOW);
        expect(s.notice).toContain("cannot give to yourself");
        applyEnvelope(s, env("ActionRejected", {
            seq: 3, reason: "already_submitted", detail: "",
            round: 1, phase: "choice",
        }), NOW);
        expect(s.submitted).toBe(true);
    });
});

describe("reveals and results", () => {
    test("reveals land in the history feed", () => {
        const s = initialState("t1");
        applyEnvelope(s, env("RoundReveal", {
            round: 1, pile: 29990, exhausted: false,
            action: { action: "give", target: "bob" }, funded: true,
            givers: ["cyd"],
        }), NOW);
        const text = s.history.map((h) => h.text).join("\n");
        expect(text).toContain("you staked bob");
        expect(text).toContain("backed by cyd");
    });

    test("investment results record draws for self and backed players", () => {
        const s = initialState("t1");
        applyEnvelope(s, env("InvestResult", {
            round: 1, pile: 29000,
            own: {
                player: "ada", available: 4, invested: 4,
                card: { rank: "6", suit: "C", value: 6 },
                payout: 50, penalty: 0, protected: false, capped: false,
            },
            pot: 50,
            backed: [{
                name: "bob", invested: 2,
                card: { rank: "Q", suit: "H", value: 25 }, payout: 0,
            }],
        }), NOW);
        const text = s.history.map((h) => h.text).join("\n");
        expect(text).toContain("6♣");
        expect(text).toContain("bob drew Q♥");
        expect(s.invest?.pot).toBe(50);
    });

    test("game over freezes the phase and keeps the standings", () => {
        const s = initialState("t1");
        applyEnvelope(s, env("GameOver", {
            reason: "hard_stop", rounds: 50, pile: 12,
            standings: [{ seat: 1, name: "bob", savings: 900 },
                { seat: 0, name: "ada", savings: 40 }],
        }), NOW);
        expect(s.over?.reason).toBe("hard_stop");
        expect(s.phase).toBeNull();
        expect(s.deadlineAt).toBeNull();
    });
});

describe("what the client holds about other players", () => {
    test("foreign entries are cut down to name, emojis, outcome, share", () => {
        const s = initialState("t1");
        const spiked = view();
        (spiked.others[0] as unknown as Record<string, unknown>)["savings"] = 4242;
        (spiked.others[0] as unknown as Record<string, unknown>)["pcards"] = { J: 3 };
        applyEnvelope(s, env("StateView", {
            round: 1, phase: "choice", deadline: 30, view: spiked,
        }), NOW);
        const kept = s.view?.others[0] as unknown as Record<string, unknown>;
        expect(Object.keys(kept).sort()).toEqual(["emojis", "name", "outcome", "share"]);
        expect(kept["savings"]).toBeUndefined();
    });

    test("a token refusal is fatal, a mid-game hiccup is not", () => {
        const s = initialState("t1");
        applyEnvelope(s, env("Error", { reason: "bad_token", detail: "no seat" }), NOW);
        expect(s.fatal).toContain("bad_token");
        const s2 = initialState("t1");
        applyEnvelope(s2, env("Error", { reason: "seq_regress", detail: "" }), NOW);
        expect(s2.fatal).toBeNull();
        expect(s2.notice).toContain("seq_regress");
    });
});

describe("split arithmetic", () => {
    test("even prefill floors and leaves the remainder unassigned", () => {
        expect(evenPrefill(15330, ["a", "b", "c"])).toEqual({ a: 5110, b: 5110, c: 5110 });
        expect(evenPrefill(7, ["a", "b"])).toEqual({ a: 3, b: 3 });
        expect(evenPrefill(7, [])).toEqual({});
        expect(allocTotal({ a: 3, b: 3 })).toBe(6);
    });
});
