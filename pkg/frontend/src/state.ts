// Client-side session state: one plain object rebuilt message by
// message. Everything in it traces back to a server payload field; the
// only locally invented data are the action drafts, which exist so the
// panels can be optimistic about the user's own typing and nothing else.
//
// Foreign players are re-projected onto the four fields the server is
// supposed to expose (name, emojis, outcome, share). Anything extra a
// frame might carry is dropped here, so no panel can ever render a
// foreign savings balance even by accident.

import { fmtCard } from "./format.js";
import type {
    GameOverPayload,
    InvestResultPayload,
    LobbyInfo,
    Phase,
    PlayerViewPayload,
    PurchaseItem,
    RoundRevealPayload,
    ServerEnvelope,
    ShopCatalogPayload,
} from "./protocol.js";

export type ConnStatus = "idle" | "connecting" | "open" | "closed";

export interface HistoryEntry {
    round: number;
    text: string;
}

// the user's uncommitted inputs for the current phase
export interface Draft {
    choice: { action: "take" | "give"; target: string | null };
    invest: number;
    alloc: Record<string, number>;
    cart: PurchaseItem[];
}

export interface ClientState {
    status: ConnStatus;
    session: string;
    seat: number | null;
    name: string | null;
    token: string | null;
    lobby: LobbyInfo | null;
    rules: Record<string, unknown> | null;
    round: number;
    phase: Phase | null;
    deadlineAt: number | null;   // local clock ms when the phase expires
    youAct: boolean;
    submitted: boolean;          // this phase's action was acked
    expired: boolean;            // the local countdown ran out first
    view: PlayerViewPayload | null;
    catalog: ShopCatalogPayload | null;
    reveal: RoundRevealPayload | null;
    invest: InvestResultPayload | null;
    over: GameOverPayload | null;
    notice: string | null;       // non fatal, shown inline on the panel
    fatal: string | null;        // dead session or refused token
    history: HistoryEntry[];
    draft: Draft;
    draftKey: string;            // "round:phase" the draft was built for
}

const HISTORY_LIMIT = 200;

export function initialState(session: string): ClientState {
    return {
        status: "idle",
        session,
        seat: null,
        name: null,
        token: null,
        lobby: null,
        rules: null,
        round: 0,
        phase: null,
        deadlineAt: null,
        youAct: false,
        submitted: false,
        expired: false,
        view: null,
        catalog: null,
        reveal: null,
        invest: null,
        over: null,
        notice: null,
        fatal: null,
        history: [],
        draft: emptyDraft(),
        draftKey: "",
    };
}

function emptyDraft(): Draft {
    return { choice: { action: "take", target: null }, invest: 0, alloc: {}, cart: [] };
}

// floor split of a pot over its backers; the remainder stays unassigned
export function evenPrefill(pot: number, backers: string[]): Record<string, number> {
    const alloc: Record<string, number> = {};
    const share = backers.length > 0 ? Math.floor(pot / backers.length) : 0;
    for (const name of backers) {
        alloc[name] = share;
    }
    return alloc;
}

export function allocTotal(alloc: Record<string, number>): number {
    let total = 0;
    for (const cut of Object.values(alloc)) {
        total += cut;
    }
    return total;
}

// keep only the fields a player is meant to see about the table
function sanitizeView(view: PlayerViewPayload): PlayerViewPayload {
    return {
        round: view.round,
        phase: view.phase,
        pile: view.pile,
        name: view.name,
        savings: view.savings,
        received_pool: view.received_pool,
        givers: [...view.givers],
        pcards: { ...view.pcards },
        emojis: [...view.emojis],
        own_choice: view.own_choice,
        own_outcome: view.own_outcome,
        own_pot: view.own_pot,
        others: view.others.map((o) => ({
            name: o.name,
            emojis: [...o.emojis],
            outcome: o.outcome === null ? null : {
                invested: o.outcome.invested,
                card: o.outcome.card,
                payout: o.outcome.payout,
            },
            share: o.share ?? null,
        })),
    };
}

function note(state: ClientState, round: number, text: string): void {
    state.history.push({ round, text });
    if (state.history.length > HISTORY_LIMIT) {
        state.history.splice(0, state.history.length - HISTORY_LIMIT);
    }
}

function enterPhase(state: ClientState, phase: Phase): void {
    state.submitted = false;
    state.expired = false;
    state.notice = null;
    const view = state.view;
    const draft = emptyDraft();
    if (view !== null) {
        draft.invest = view.received_pool;
        if (phase === "distribute") {
            draft.alloc = evenPrefill(view.own_pot, view.givers);
        }
    }
    state.draft = draft;
}

// fold one server frame into the state; `now` is the local clock in ms
export function applyEnvelope(state: ClientState, env: ServerEnvelope, now: number): void {
    switch (env.kind) {
        case "Joined": {
            state.seat = env.payload.seat;
            state.name = env.payload.name;
            state.token = env.payload.token;
            state.lobby = env.payload.lobby;
            break;
        }
        case "StateView": {
            const p = env.payload;
            if (p.lobby !== undefined) {
                state.lobby = p.lobby;
                break;
            }
            if (p.view !== undefined) {
                state.view = sanitizeView(p.view);
                state.round = p.round ?? state.round;
                state.phase = (p.phase ?? null) as Phase | null;
                state.deadlineAt = p.deadline == null ? null : now + p.deadline * 1000;
            }
            break;
        }
        case "GameStarted": {
            state.rules = env.payload.rules;
            state.lobby = null;
            note(state, 0, `table of ${env.payload.players.length} starts`);
            break;
        }
        case "PhaseStart": {
            const p = env.payload;
            state.round = p.round;
            state.phase = p.phase;
            state.youAct = p.you_act;
            state.deadlineAt = p.deadline == null ? null : now + p.deadline * 1000;
            // a resumed socket replays the current phase; only a genuinely
            // new (round, phase) wipes the draft and the submitted flag
            const key = `${p.round}:${p.phase}`;
            if (key !== state.draftKey) {
                state.draftKey = key;
                enterPhase(state, p.phase);
            }
            break;
        }
        case "ActionAck": {
            if (env.payload.round === state.round && env.payload.phase === state.phase) {
                state.submitted = true;
                state.notice = null;
            }
            break;
        }
        case "ActionRejected": {
            const p = env.payload;
            if (p.reason === "stale") {
                // the phase clock beat the submission; the default stood
                state.notice = "too late, the table had moved on";
            } else if (p.reason === "already_submitted") {
                state.submitted = true;
            } else {
                state.notice = `rejected (${p.reason}): ${p.detail}`;
            }
            break;
        }
        case "RoundReveal": {
            const p = env.payload;
            state.reveal = p;
            const act = p.action;
            if (act !== null) {
                if (act.action === "take") {
                    note(state, p.round, "you took from the pile");
                } else if (p.funded) {
                    note(state, p.round, `you staked ${act.target}`);
                } else {
                    note(state, p.round, `the pile could not fund your give to ${act.target}`);
                }
            }
            if (p.givers.length > 0) {
                note(state, p.round, `backed by ${p.givers.join(", ")}`);
            }
            if (p.exhausted) {
                note(state, p.round, "the pile ran dry this round");
            }
            break;
        }
        case "InvestResult": {
            const p = env.payload;
            state.invest = p;
            const own = p.own;
            if (own !== null && own.invested > 0) {
                if (own.penalty > 0) {
                    note(state, p.round,
                        `your draw ${fmtCard(own.card)} cost a penalty of ${own.penalty}`);
                } else {
                    note(state, p.round,
                        `your draw ${fmtCard(own.card)} paid ${own.payout} into your pot`);
                }
            }
            for (const b of p.backed) {
                note(state, p.round,
                    `${b.name} drew ${fmtCard(b.card)} for a pot of ${b.payout}`);
            }
            break;
        }
        case "ShopCatalog": {
            state.catalog = env.payload;
            break;
        }
        case "GameOver": {
            state.over = env.payload;
            state.phase = null;
            state.deadlineAt = null;
            state.youAct = false;
            note(state, env.payload.rounds, `game over (${env.payload.reason})`);
            break;
        }
        case "Error": {
            const p = env.payload;
            if (p.reason === "bad_token" || p.reason === "unknown_session"
                || p.reason === "superseded" || p.reason === "already_started"
                || p.reason === "session_full") {
                state.fatal = `${p.reason}: ${p.detail}`;
            } else {
                state.notice = `${p.reason}: ${p.detail}`;
            }
            break;
        }
    }
}

export function secondsLeft(state: ClientState, now: number): number | null {
    if (state.deadlineAt === null) {
        return null;
    }
    return Math.max(0, (state.deadlineAt - now) / 1000);
}
