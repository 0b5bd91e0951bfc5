// Shared builders for the unit tests: canned payloads in the exact
// shapes the server emits, plus a seeded client state to render from.

import type {
    OtherPlayer,
    PlayerViewPayload,
    ServerEnvelope,
    ShopCatalogPayload,
} from "../src/protocol.js";
import { initialState } from "../src/state.js";
import type { ClientState } from "../src/state.js";
import { DEFAULT_CONFIG } from "../src/config.js";
import type { ClientConfig } from "../src/config.js";

export const CFG: ClientConfig = DEFAULT_CONFIG;

export function other(name: string, over: Partial<OtherPlayer> = {}): OtherPlayer {
    return { name, emojis: [], outcome: null, share: null, ...over };
}

export function view(over: Partial<PlayerViewPayload> = {}): PlayerViewPayload {
    return {
        round: 1,
        phase: "choice",
        pile: 29994,
        name: "ada",
        savings: 0,
        received_pool: 0,
        givers: [],
        pcards: { J: 0, Q: 0, K: 0 },
        emojis: [],
        own_choice: null,
        own_outcome: null,
        own_pot: 0,
        others: [other("bob"), other("cyd")],
        ...over,
    };
}

export function catalog(over: Partial<ShopCatalogPayload> = {}): ShopCatalogPayload {
    return {
        round: 1,
        pcards: [
            { face: "J", price: 200, threshold: 1 },
            { face: "Q", price: 500, threshold: 1 },
            { face: "K", price: 1000, threshold: 2 },
        ],
        emojis: Array.from({ length: 10 }, (_, k) => ({
            id: `sym${k + 1}`, price: 50 * (k + 1),
        })),
        ...over,
    };
}

let seq = 0;

export function env(kind: string, payload: unknown): ServerEnvelope {
    seq += 1;
    return { kind, session: "t1", seq, payload } as ServerEnvelope;
}

// a state mid-game, as if the server snapshots had just landed
export function playingState(
    phase: "choice" | "invest" | "distribute" | "shop",
    viewOver: Partial<PlayerViewPayload> = {},
): ClientState {
    const state = initialState("t1");
    state.name = "ada";
    state.seat = 0;
    state.rules = { n_players: 3, c_ppp: 10000, min_invest_threshold: 0 };
    state.round = 1;
    state.phase = phase;
    state.youAct = true;
    state.view = view({ phase, ...viewOver });
    if (phase === "shop") {
        state.catalog = catalog();
    }
    return state;
}
