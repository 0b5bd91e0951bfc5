// Browser entry point: one connection, one state object, one render
// loop. Server frames mutate the state and trigger a full render; a
// quarter second ticker keeps the countdowns honest between frames and
// locks a panel the moment its deadline passes.

import { loadConfig, wsUrl } from "./config.js";
import { browserSocketFactory, Connection } from "./net.js";
import type { PurchaseItem } from "./protocol.js";
import { applyEnvelope, initialState } from "./state.js";
import { render, tickCountdown } from "./ui.js";
import type { Actions } from "./ui.js";

function tokenKey(session: string): string {
    return `trustya:${session}:token`;
}

async function boot(): Promise<void> {
    const root = document.getElementById("app");
    if (root === null) {
        return;
    }
    const params = new URLSearchParams(window.location.search);
    const session = params.get("session");
    if (session === null || session === "") {
        renderConnectForm(root);
        return;
    }

    const cfg = await loadConfig();
    const state = initialState(session);
    const conn = new Connection(wsUrl(cfg, window.location), session, browserSocketFactory);

    const actions: Actions = {
        joinSeat: () => conn.join(),
        submitChoice: (action, target) => {
            if (action === "give" && target !== null) {
                conn.submitChoice(state.round, "give", target);
            } else {
                conn.submitChoice(state.round, "take");
            }
        },
        submitInvest: (amount: number) => conn.submitInvest(state.round, amount),
        submitDistribution: (alloc) => conn.submitDistribution(state.round, alloc),
        submitPurchase: (items: PurchaseItem[]) => conn.submitPurchase(state.round, items),
    };

    const repaint = () => render(root, state, cfg, actions, Date.now());

    conn.onOpen = () => {
        state.status = "open";
        const stored = window.localStorage.getItem(tokenKey(session));
        conn.hello(stored);
        repaint();
    };
    conn.onClose = () => {
        state.status = "closed";
        repaint();
        if (state.over === null && state.fatal === null) {
            window.setTimeout(() => {
                if (state.over === null && state.fatal === null) {
                    state.status = "connecting";
                    conn.open();
                    repaint();
                }
            }, 2000);
        }
    };
    conn.onEnvelope = (env) => {
        applyEnvelope(state, env, Date.now());
        if (env.kind === "Joined") {
            window.localStorage.setItem(tokenKey(session), env.payload.token);
        }
        if (env.kind === "Error" && env.payload.reason === "bad_token") {
            // stored token from a dead table; drop it and show the lobby
            window.localStorage.removeItem(tokenKey(session));
            state.fatal = null;
            conn.hello(null);
        }
        repaint();
    };

    window.setInterval(() => {
        if (tickCountdown(root, state, Date.now())) {
            repaint();
        }
    }, 250);

    state.status = "connecting";
    conn.open();
    repaint();
}

function renderConnectForm(root: HTMLElement): void {
    root.replaceChildren();
    const input = document.createElement("input");
    input.placeholder = "session id";
    const go = document.createElement("button");
    go.textContent = "Connect";
    go.addEventListener("click", () => {
        const sid = input.value.trim();
        if (sid !== "") {
            window.location.search = `?session=${encodeURIComponent(sid)}`;
        }
    });
    const panel = document.createElement("section");
    panel.className = "panel connect";
    const title = document.createElement("h2");
    title.textContent = "Join a table";
    panel.append(title, input, go);
    root.append(panel);
}

void boot();
