// A scripted seat: the same decisions a patient human could click, fed
// straight from the client state. The e2e test drives a whole game with
// it, so it only ever proposes submissions the server must accept.

import type { PurchaseItem } from "./protocol.js";
import { evenPrefill } from "./state.js";
import type { ClientState } from "./state.js";

export type Move =
    | { kind: "choice"; action: "take" | "give"; target: string | null }
    | { kind: "invest"; amount: number }
    | { kind: "distribute"; alloc: Record<string, number> }
    | { kind: "shop"; items: PurchaseItem[] };

export function decide(state: ClientState): Move | null {
    const view = state.view;
    if (!state.youAct || view === null || state.phase === null) {
        return null;
    }
    if (state.phase === "choice") {
        // back whoever flaunts the most symbols; take now and then so
        // both paths get exercised
        if (state.round % 4 === 0 || view.others.length === 0) {
            return { kind: "choice", action: "take", target: null };
        }
        let pick = view.others[0]!;
        for (const other of view.others) {
            if (other.emojis.length > pick.emojis.length) {
                pick = other;
            }
        }
        return { kind: "choice", action: "give", target: pick.name };
    }
    if (state.phase === "invest") {
        const threshold = Number(state.rules?.["min_invest_threshold"] ?? 0);
        const pool = view.received_pool;
        return { kind: "invest", amount: pool >= threshold ? pool : 0 };
    }
    if (state.phase === "distribute") {
        return { kind: "distribute", alloc: evenPrefill(view.own_pot, view.givers) };
    }
    // shop: cheapest status symbol we can afford, one per round
    const catalog = state.catalog;
    if (catalog !== null) {
        for (const em of catalog.emojis) {
            if (em.price <= view.savings) {
                return { kind: "shop", items: [{ item: "emoji", ref: em.id }] };
            }
        }
    }
    return { kind: "shop", items: [] };
}
