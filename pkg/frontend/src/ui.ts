// DOM panels. One full render per server message; in between, each
// panel wires its own input handlers so typing into a draft never
// rebuilds the tree under the cursor. Every number and name shown here
// is read off the client state, which in turn holds only server payload
// fields; the drafts are the single local invention.

import type { ClientConfig } from "./config.js";
import { emojiRow, fmtCard, fmtCoins, pcardSummary } from "./format.js";
import type { PurchaseItem } from "./protocol.js";
import { allocTotal, evenPrefill, secondsLeft } from "./state.js";
import type { ClientState } from "./state.js";

export interface Actions {
    joinSeat(): void;
    submitChoice(action: "take" | "give", target: string | null): void;
    submitInvest(amount: number): void;
    submitDistribution(alloc: Record<string, number>): void;
    submitPurchase(items: PurchaseItem[]): void;
}

type Child = Node | string;

function el(tag: string, attrs: Record<string, string> = {}, children: Child[] = []): HTMLElement {
    const node = document.createElement(tag);
    for (const [key, value] of Object.entries(attrs)) {
        node.setAttribute(key, value);
    }
    for (const child of children) {
        node.append(child);
    }
    return node;
}

function countdownEl(state: ClientState, now: number): HTMLElement {
    const left = secondsLeft(state, now);
    const text = left === null ? "" : `${Math.ceil(left)}s`;
    return el("span", { class: "countdown", "data-countdown": "" }, [text]);
}

// update countdown text in place; returns true when a deadline just
// ran out so the caller knows to lock the panel with a full render
export function tickCountdown(root: ParentNode, state: ClientState, now: number): boolean {
    const left = secondsLeft(state, now);
    for (const node of root.querySelectorAll("[data-countdown]")) {
        node.textContent = left === null ? "" : `${Math.ceil(left)}s`;
    }
    if (left !== null && left <= 0 && !state.expired && !state.submitted && state.youAct) {
        state.expired = true;
        return true;
    }
    return false;
}

function noticeLine(state: ClientState): HTMLElement | null {
    if (state.notice === null) {
        return null;
    }
    return el("p", { class: "notice" }, [state.notice]);
}

function defaultedText(phase: string): string {
    if (phase === "choice") {
        return "time ran out; defaulted to Take";
    }
    if (phase === "invest") {
        return "time ran out; your pool was staked for you";
    }
    if (phase === "distribute") {
        return "time ran out; the pot was split evenly";
    }
    return "time ran out; nothing was bought";
}

function panelShell(title: string, state: ClientState, now: number, body: Child[]): HTMLElement {
    const head = el("div", { class: "panel-head" }, [
        el("h2", {}, [title]),
        countdownEl(state, now),
    ]);
    const shell = el("section", { class: "panel" }, [head]);
    if (state.expired && state.phase !== null) {
        shell.append(el("p", { class: "notice" }, [defaultedText(state.phase)]));
    }
    const notice = noticeLine(state);
    if (notice !== null) {
        shell.append(notice);
    }
    for (const child of body) {
        shell.append(child);
    }
    if (state.expired || state.submitted) {
        for (const input of shell.querySelectorAll("button, input")) {
            (input as HTMLButtonElement | HTMLInputElement).disabled = true;
        }
        shell.classList.add("locked");
    }
    if (state.submitted) {
        shell.append(el("p", { class: "ok" }, ["action is in"]));
    }
    return shell;
}

// -- choice ------------------------------------------------------------------

export function renderChoicePanel(
    state: ClientState, cfg: ClientConfig, actions: Actions, now: number,
): HTMLElement {
    const view = state.view;
    if (view === null) {
        return el("section", { class: "panel" }, ["waiting for the table"]);
    }
    const options = el("div", { class: "choice-options" });
    const marks = new Map<string, HTMLButtonElement>();

    const select = (action: "take" | "give", target: string | null) => {
        state.draft.choice = { action, target };
        for (const [key, button] of marks) {
            button.classList.toggle("selected", key === (target ?? "@take"));
        }
    };

    const takeBtn = el("button", { class: "choice-option", "data-take": "" },
        ["Take 2 from the pile"]) as HTMLButtonElement;
    takeBtn.addEventListener("click", () => select("take", null));
    marks.set("@take", takeBtn);
    options.append(takeBtn);

    for (const other of view.others) {
        const row = el("button", { class: "choice-option", "data-give": other.name }, [
            `Give to ${other.name} `,
            el("span", { class: "emoji-row" }, [emojiRow(other.emojis, cfg)]),
        ]) as HTMLButtonElement;
        row.addEventListener("click", () => select("give", other.name));
        marks.set(other.name, row);
        options.append(row);
    }

    const chosen = state.draft.choice;
    select(chosen.action, chosen.target);

    const submit = el("button", { class: "submit" }, ["Lock it in"]) as HTMLButtonElement;
    submit.addEventListener("click", () => {
        const pick = state.draft.choice;
        actions.submitChoice(pick.action, pick.target);
    });

    return panelShell("Take or give", state, now, [options, submit]);
}

// -- invest --------------------------------------------------------------------

export function renderInvestPanel(
    state: ClientState, actions: Actions, now: number,
): HTMLElement {
    const view = state.view;
    if (view === null) {
        return el("section", { class: "panel" }, ["waiting for the table"]);
    }
    const pool = view.received_pool;
    const threshold = Number(state.rules?.["min_invest_threshold"] ?? 0);
    const frozen = pool < threshold;

    const input = el("input", {
        type: "number", min: "0", max: String(pool),
        value: String(Math.min(state.draft.invest, pool)),
        class: "invest-amount",
    }) as HTMLInputElement;

    const clamp = () => {
        let amount = Math.floor(Number(input.value));
        if (!Number.isFinite(amount) || amount < 0) {
            amount = 0;
        }
        if (amount > pool) {
            amount = pool;
        }
        input.value = String(amount);
        state.draft.invest = amount;
        return amount;
    };
    input.addEventListener("input", clamp);

    const none = el("button", {}, ["Bank it all"]) as HTMLButtonElement;
    none.addEventListener("click", () => { input.value = "0"; clamp(); });
    const all = el("button", {}, ["Stake it all"]) as HTMLButtonElement;
    all.addEventListener("click", () => { input.value = String(pool); clamp(); });

    const submit = el("button", { class: "submit" }, ["Place the stake"]) as HTMLButtonElement;
    submit.addEventListener("click", () => actions.submitInvest(frozen ? 0 : clamp()));

    const body: Child[] = [
        el("p", {}, [`your pool holds ${fmtCoins(pool)}; what goes on the card?`]),
    ];
    if (frozen) {
        body.push(el("p", { class: "notice" },
            [`the pool is under the table minimum of ${fmtCoins(threshold)}; it banks on its own`]));
        input.disabled = true;
        input.value = "0";
        none.disabled = true;
        all.disabled = true;
    }
    body.push(el("div", { class: "invest-controls" }, [input, none, all]), submit);
    return panelShell("Invest", state, now, body);
}

// -- distribute ------------------------------------------------------------------

export function renderDistributionPanel(
    state: ClientState, actions: Actions, now: number,
): HTMLElement {
    const view = state.view;
    if (view === null) {
        return el("section", { class: "panel" }, ["waiting for the table"]);
    }
    const pot = view.own_pot;
    const backers = view.givers;
    const inputs = new Map<string, HTMLInputElement>();

    const remainder = el("span", { class: "remainder", "data-remainder": "" });
    const submit = el("button", { class: "submit" }, ["Hand it out"]) as HTMLButtonElement;

    const readAlloc = (): Record<string, number> => {
        const alloc: Record<string, number> = {};
        for (const [name, input] of inputs) {
            let cut = Math.floor(Number(input.value));
            if (!Number.isFinite(cut) || cut < 0) {
                cut = 0;
            }
            alloc[name] = cut;
        }
        return alloc;
    };

    // live remainder; an over-allocated draft blocks the send client side
    const refresh = () => {
        const alloc = readAlloc();
        state.draft.alloc = alloc;
        const left = pot - allocTotal(alloc);
        remainder.textContent = left >= 0
            ? `${fmtCoins(left)} left for you`
            : `${fmtCoins(-left)} over the pot`;
        remainder.classList.toggle("over", left < 0);
        submit.disabled = left < 0 || state.submitted || state.expired;
    };

    const rows = el("div", { class: "alloc-rows" });
    for (const name of backers) {
        const input = el("input", {
            type: "number", min: "0", value: String(state.draft.alloc[name] ?? 0),
        }) as HTMLInputElement;
        input.addEventListener("input", refresh);
        inputs.set(name, input);
        rows.append(el("label", { class: "alloc-row" }, [name, input]));
    }

    const even = el("button", {}, ["Share evenly"]) as HTMLButtonElement;
    even.addEventListener("click", () => {
        const prefill = evenPrefill(pot, [...backers]);
        for (const [name, input] of inputs) {
            input.value = String(prefill[name] ?? 0);
        }
        refresh();
    });
    const keep = el("button", {}, ["Keep it all"]) as HTMLButtonElement;
    keep.addEventListener("click", () => {
        for (const input of inputs.values()) {
            input.value = "0";
        }
        refresh();
    });

    submit.addEventListener("click", () => {
        const alloc = readAlloc();
        if (allocTotal(alloc) > pot) {
            return;   // blocked; the remainder line already says why
        }
        actions.submitDistribution(alloc);
    });

    const shell = panelShell("Split your pot", state, now, [
        el("p", {}, [`your draw paid ${fmtCoins(pot)}; your backers are waiting`]),
        el("div", { class: "alloc-buttons" }, [even, keep]),
        rows,
        el("p", {}, [remainder]),
        submit,
    ]);
    refresh();
    return shell;
}

// -- shop and results --------------------------------------------------------------

function resultsBlock(state: ClientState): HTMLElement | null {
    const invest = state.invest;
    const view = state.view;
    if (invest === null || view === null || invest.round !== state.round) {
        return null;
    }
    const lines: HTMLElement[] = [];
    const own = invest.own;
    if (own !== null && own.invested > 0) {
        const story = own.penalty > 0
            ? `you drew ${fmtCard(own.card)} and paid a penalty of ${fmtCoins(own.penalty)}`
            : `you drew ${fmtCard(own.card)} for a pot of ${fmtCoins(own.payout)}`;
        lines.push(el("li", {}, [story]));
    }
    const shares = new Map(view.others.map((o) => [o.name, o.share]));
    for (const b of invest.backed) {
        const share = shares.get(b.name);
        const cut = share == null ? "" : `; your share ${fmtCoins(share)}`;
        lines.push(el("li", {}, [
            `${b.name} drew ${fmtCard(b.card)}, pot ${fmtCoins(b.payout)}${cut}`,
        ]));
    }
    if (lines.length === 0) {
        return null;   // backed nobody, staked nothing: nothing to show
    }
    return el("div", { class: "results" }, [
        el("h3", {}, ["This round's draws"]),
        el("ul", {}, lines),
    ]);
}

export function renderShopAndResults(
    state: ClientState, cfg: ClientConfig, actions: Actions, now: number,
): HTMLElement {
    const view = state.view;
    const catalog = state.catalog;
    if (view === null || catalog === null) {
        return el("section", { class: "panel" }, ["waiting for the table"]);
    }

    const cartList = el("ul", { class: "cart" });
    const cartNote = el("p", {}, []);
    const buttons: { btn: HTMLButtonElement; price: number; label: string }[] = [];

    const cartCost = () => {
        let total = 0;
        for (const item of state.draft.cart) {
            const pc = catalog.pcards.find((c) => c.face === item.ref);
            const em = catalog.emojis.find((e) => e.id === item.ref);
            total += item.item === "pcard" ? (pc?.price ?? 0) : (em?.price ?? 0);
        }
        return total;
    };

    const redraw = () => {
        cartList.replaceChildren();
        for (const [idx, item] of state.draft.cart.entries()) {
            const name = item.item === "pcard" ? `${item.ref} card` : (cfg.glyphs[item.ref] ?? item.ref);
            const drop = el("button", { class: "drop" }, ["drop"]) as HTMLButtonElement;
            drop.addEventListener("click", () => {
                state.draft.cart.splice(idx, 1);
                redraw();
            });
            cartList.append(el("li", {}, [name, " ", drop]));
        }
        const total = cartCost();
        cartNote.textContent = state.draft.cart.length > 0
            ? `order total ${fmtCoins(total)} of ${fmtCoins(view.savings)} saved`
            : `savings ${fmtCoins(view.savings)}; buy nothing and they stay put`;
        // anything that would tip the order past savings is off the table
        for (const { btn, price, label } of buttons) {
            const blocked = total + price > view.savings;
            btn.disabled = blocked || state.submitted || state.expired;
            btn.title = blocked
                ? `${label} costs ${fmtCoins(price)}; the order would outrun your savings`
                : "";
        }
    };

    const shopRows = el("div", { class: "shop-rows" });
    for (const pc of catalog.pcards) {
        const btn = el("button", { class: "buy", "data-pcard": pc.face }, [
            `${pc.face} protection, ${fmtCoins(pc.price)} (keep ${pc.threshold}+ backers)`,
        ]) as HTMLButtonElement;
        btn.addEventListener("click", () => {
            state.draft.cart.push({ item: "pcard", ref: pc.face });
            redraw();
        });
        buttons.push({ btn, price: pc.price, label: `the ${pc.face} card` });
        shopRows.append(btn);
    }
    for (const em of catalog.emojis) {
        const glyph = cfg.glyphs[em.id] ?? em.id;
        const btn = el("button", { class: "buy", "data-emoji": em.id }, [
            `${glyph} ${fmtCoins(em.price)}`,
        ]) as HTMLButtonElement;
        btn.addEventListener("click", () => {
            state.draft.cart.push({ item: "emoji", ref: em.id });
            redraw();
        });
        buttons.push({ btn, price: em.price, label: glyph });
        shopRows.append(btn);
    }

    const submit = el("button", { class: "submit" }, ["Finish shopping"]) as HTMLButtonElement;
    submit.addEventListener("click", () => actions.submitPurchase([...state.draft.cart]));

    const body: Child[] = [];
    const results = resultsBlock(state);
    if (results !== null) {
        body.push(results);
    }
    body.push(
        el("p", { class: "holdings" }, [
            `your cards: ${pcardSummary(view.pcards)}`,
            el("span", { class: "emoji-row" }, [" " + emojiRow(view.emojis, cfg)]),
        ]),
        shopRows,
        cartList,
        cartNote,
        submit,
    );
    const shell = panelShell("Shop", state, now, body);
    redraw();
    return shell;
}

// -- frame: list, gauge, history ----------------------------------------------------

export function renderPlayerList(state: ClientState, cfg: ClientConfig): HTMLElement {
    const list = el("ul", { class: "players" });
    const view = state.view;
    if (view !== null) {
        list.append(el("li", { class: "me" }, [
            `${view.name} (you) `,
            el("span", { class: "emoji-row" }, [emojiRow(view.emojis, cfg)]),
            ` savings ${fmtCoins(view.savings)}`,
        ]));
        for (const other of view.others) {
            list.append(el("li", {}, [
                `${other.name} `,
                el("span", { class: "emoji-row" }, [emojiRow(other.emojis, cfg)]),
            ]));
        }
    }
    return el("section", { class: "side" }, [el("h2", {}, ["Table"]), list]);
}

export function renderPileGauge(state: ClientState): HTMLElement {
    const view = state.view;
    const pile = view?.pile ?? 0;
    const rules = state.rules;
    const perHead = Number(rules?.["c_ppp"] ?? 0);
    const heads = Number(rules?.["n_players"] ?? 0);
    const total = perHead * heads;
    const frac = total > 0 ? Math.max(0, Math.min(1, pile / total)) : 0;
    const bar = el("div", { class: "gauge-fill" });
    bar.style.width = `${(frac * 100).toFixed(1)}%`;
    return el("div", { class: "gauge" }, [
        el("div", { class: "gauge-track" }, [bar]),
        el("span", { class: "gauge-label" }, [`pile ${fmtCoins(pile)}`]),
    ]);
}

export function renderHistory(state: ClientState): HTMLElement {
    const feed = el("ul", { class: "history" });
    for (const entry of [...state.history].reverse()) {
        feed.append(el("li", {}, [`r${entry.round} ${entry.text}`]));
    }
    return el("section", { class: "side" }, [el("h2", {}, ["So far"]), feed]);
}

function renderLobby(state: ClientState, actions: Actions): HTMLElement {
    const lobby = state.lobby;
    const body: Child[] = [];
    if (lobby !== null) {
        const list = el("ul", { class: "players" });
        for (const p of lobby.players) {
            list.append(el("li", {}, [`${p.name}${p.ready ? "" : " (empty seat)"}`]));
        }
        body.push(list, el("p", {}, [
            lobby.waiting > 0 ? `waiting on ${lobby.waiting} more` : "all seats warm",
        ]));
    }
    if (state.seat === null) {
        const join = el("button", { class: "submit" }, ["Take a seat"]) as HTMLButtonElement;
        join.addEventListener("click", () => actions.joinSeat());
        body.push(join);
    } else {
        body.push(el("p", { class: "ok" }, [`seated as ${state.name}`]));
    }
    return el("section", { class: "panel" }, [el("h2", {}, ["Lobby"]), ...body]);
}

function renderStandings(state: ClientState): HTMLElement {
    const over = state.over;
    if (over === null) {
        return el("section", { class: "panel" }, []);
    }
    const rows = el("ol", { class: "standings" });
    for (const s of over.standings) {
        const me = s.name === state.name ? " (you)" : "";
        rows.append(el("li", {}, [`${s.name}${me}: ${fmtCoins(s.savings)}`]));
    }
    return el("section", { class: "panel" }, [
        el("h2", {}, [`Game over after ${over.rounds} rounds (${over.reason})`]),
        rows,
    ]);
}

function renderPhase(
    state: ClientState, cfg: ClientConfig, actions: Actions, now: number,
): HTMLElement {
    if (state.phase === "shop") {
        return renderShopAndResults(state, cfg, actions, now);
    }
    if (!state.youAct) {
        const what = state.phase === null ? "the table" : `the ${state.phase} phase`;
        return el("section", { class: "panel" }, [
            el("h2", {}, ["Waiting"]),
            el("p", {}, [`sitting out ${what} `, countdownEl(state, now)]),
        ]);
    }
    if (state.phase === "choice") {
        return renderChoicePanel(state, cfg, actions, now);
    }
    if (state.phase === "invest") {
        return renderInvestPanel(state, actions, now);
    }
    if (state.phase === "distribute") {
        return renderDistributionPanel(state, actions, now);
    }
    return el("section", { class: "panel" }, ["between phases"]);
}

export function render(
    root: HTMLElement, state: ClientState, cfg: ClientConfig, actions: Actions, now: number,
): void {
    root.replaceChildren();
    const status = el("header", { class: "topbar" }, [
        el("span", {}, [`table ${state.session}`]),
        el("span", { class: `status ${state.status}` }, [state.status]),
    ]);
    root.append(status);

    if (state.fatal !== null) {
        root.append(el("section", { class: "panel dead" }, [state.fatal]));
        return;
    }

    const middle = state.over !== null
        ? renderStandings(state)
        : (state.view === null ? renderLobby(state, actions)
            : renderPhase(state, cfg, actions, now));

    root.append(el("main", { class: "layout" }, [
        el("div", { class: "col left" }, [renderPlayerList(state, cfg), renderPileGauge(state)]),
        el("div", { class: "col center" }, [middle]),
        el("div", { class: "col right" }, [renderHistory(state)]),
    ]));
}
