// Wire types for the game service. Every frame in either direction is
// {kind, session, seq, payload}; seq counts per connection and per
// direction, starting at 1. Server frames with seq 0 are transport
// errors emitted before a connection is bound to a session.
//
// The shapes below mirror the server's payloads field for field. The
// client must never invent values that belong in them: everything shown
// on screen comes out of one of these messages.

export type Phase = "choice" | "invest" | "distribute" | "shop";

export interface CardInfo {
    rank: string;   // "A", "2".."10", "J", "Q", "K"
    suit: string;   // "C", "D", "H", "S"
    value: number;
}

// what a backer learns about a player it funded: stake, draw, pot size
export interface BackedOutcome {
    invested: number;
    card: CardInfo | null;
    payout: number;
}

// own draw carries the full story including penalty and protection
export interface OwnOutcome extends BackedOutcome {
    player: string;
    available: number;
    penalty: number;
    protected: boolean;
    capped: boolean;
}

export interface OtherPlayer {
    name: string;
    emojis: string[];
    outcome: BackedOutcome | null;   // only present if we backed them
    share: number | null;            // our cut of their pot, once split
}

export interface ChoiceEcho {
    action: { action: "take" | "give"; target: string | null };
    funded: boolean;
}

export interface PlayerViewPayload {
    round: number;
    phase: string;
    pile: number;
    name: string;
    savings: number;
    received_pool: number;
    givers: string[];
    pcards: Record<string, number>;
    emojis: string[];
    own_choice: ChoiceEcho | null;
    own_outcome: OwnOutcome | null;
    own_pot: number;
    others: OtherPlayer[];
}

export interface LobbyInfo {
    state: string;
    players: { seat: number; name: string; ready: boolean }[];
    waiting: number;
}

export interface JoinedPayload {
    seat: number;
    name: string;
    token: string;
    lobby: LobbyInfo;
}

export interface GameStartedPayload {
    players: { seat: number; name: string }[];
    rules: Record<string, unknown>;   // config dict minus the seed
    timeouts: Record<string, number>;
}

export interface PhaseStartPayload {
    round: number;
    phase: Phase;
    deadline: number | null;   // seconds left, null when nobody is on the clock
    you_act: boolean;
}

export interface StateViewPayload {
    lobby?: LobbyInfo;
    round?: number;
    phase?: Phase | null;
    deadline?: number | null;
    view?: PlayerViewPayload;
}

export interface RoundRevealPayload {
    round: number;
    pile: number;
    exhausted: boolean;
    action: { action: "take" | "give"; target: string | null } | null;
    funded: boolean;
    givers: string[];
}

export interface InvestResultPayload {
    round: number;
    pile: number;
    own: OwnOutcome | null;
    pot: number;
    backed: ({ name: string } & BackedOutcome)[];
}

export interface ShopCatalogPayload {
    round: number;
    pcards: { face: string; price: number; threshold: number }[];
    emojis: { id: string; price: number }[];
}

export interface ActionAckPayload {
    seq: number;
    round: number;
    phase: Phase;
}

export interface ActionRejectedPayload {
    seq: number;
    reason: string;
    detail: string;
    round: number;
    phase: Phase | null;
}

export interface GameOverPayload {
    reason: string;
    rounds: number;
    pile: number;
    standings: { seat: number; name: string; savings: number }[];
}

export interface ErrorPayload {
    reason: string;
    detail: string;
}

export type ServerEnvelope =
    | { kind: "Joined"; session: string; seq: number; payload: JoinedPayload }
    | { kind: "GameStarted"; session: string; seq: number; payload: GameStartedPayload }
    | { kind: "PhaseStart"; session: string; seq: number; payload: PhaseStartPayload }
    | { kind: "ActionAck"; session: string; seq: number; payload: ActionAckPayload }
    | { kind: "ActionRejected"; session: string; seq: number; payload: ActionRejectedPayload }
    | { kind: "RoundReveal"; session: string; seq: number; payload: RoundRevealPayload }
    | { kind: "InvestResult"; session: string; seq: number; payload: InvestResultPayload }
    | { kind: "ShopCatalog"; session: string; seq: number; payload: ShopCatalogPayload }
    | { kind: "StateView"; session: string; seq: number; payload: StateViewPayload }
    | { kind: "GameOver"; session: string; seq: number; payload: GameOverPayload }
    | { kind: "Error"; session: string; seq: number; payload: ErrorPayload };

export type ServerKind = ServerEnvelope["kind"];

const SERVER_KINDS: ReadonlySet<string> = new Set([
    "Joined", "GameStarted", "PhaseStart", "ActionAck", "ActionRejected",
    "RoundReveal", "InvestResult", "ShopCatalog", "StateView", "GameOver",
    "Error",
]);

export interface PurchaseItem {
    item: "pcard" | "emoji";
    ref: string;
}

export type ClientMessage =
    | { kind: "Hello"; payload: { token: string | null } }
    | { kind: "Join"; payload: Record<string, never> }
    | { kind: "SubmitChoice"; payload: { round: number; phase: "choice"; action: "take" | "give"; target?: string } }
    | { kind: "SubmitInvest"; payload: { round: number; phase: "invest"; amount: number } }
    | { kind: "SubmitDistribution"; payload: { round: number; phase: "distribute"; allocations: Record<string, number> } }
    | { kind: "SubmitPurchase"; payload: { round: number; phase: "shop"; items: PurchaseItem[] } };

export function encodeClientFrame(msg: ClientMessage, session: string, seq: number): string {
    return JSON.stringify({ kind: msg.kind, session, seq, payload: msg.payload });
}

// parse one server frame; throws on anything that is not a known envelope
export function parseServerFrame(raw: string): ServerEnvelope {
    let data: unknown;
    try {
        data = JSON.parse(raw);
    } catch {
        throw new Error("server frame is not JSON");
    }
    if (typeof data !== "object" || data === null || Array.isArray(data)) {
        throw new Error("server frame is not an object");
    }
    const frame = data as Record<string, unknown>;
    const kind = frame["kind"];
    if (typeof kind !== "string" || !SERVER_KINDS.has(kind)) {
        throw new Error(`unknown server kind ${JSON.stringify(kind)}`);
    }
    if (typeof frame["seq"] !== "number" || typeof frame["session"] !== "string") {
        throw new Error("server frame missing seq or session");
    }
    const payload = frame["payload"];
    if (typeof payload !== "object" || payload === null) {
        throw new Error("server frame missing payload");
    }
    return frame as unknown as ServerEnvelope;
}
