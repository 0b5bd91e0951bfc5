// One websocket, typed both ways. Outbound frames get their per
// connection sequence numbers here; inbound frames are parsed, checked
// for sequence regressions and handed to a single callback. Keeping a
// submit's seq stable on resend is what makes it idempotent server
// side, so send() hands the seq back to the caller.
//
// Reconnection policy lives with the caller: this class just reports
// the close and is cheap to replace. Node tests inject a socket
// factory backed by the ws package; the browser uses the real thing.

import type { ClientMessage, PurchaseItem, ServerEnvelope } from "./protocol.js";
import { encodeClientFrame, parseServerFrame } from "./protocol.js";

export interface SocketLike {
    send(data: string): void;
    close(): void;
    onopen: (() => void) | null;
    onmessage: ((ev: { data: unknown }) => void) | null;
    onclose: (() => void) | null;
    onerror: (() => void) | null;
}

export type SocketFactory = (url: string) => SocketLike;

// the DOM lib types handlers with their specific event classes, which
// do not line up structurally with the minimal shape above; the cast
// is contained to this one factory
export function browserSocketFactory(url: string): SocketLike {
    return new WebSocket(url) as unknown as SocketLike;
}

export class Connection {
    private sock: SocketLike | null = null;
    private seq = 0;
    private lastIn = 0;

    onEnvelope: (env: ServerEnvelope) => void = () => undefined;
    onOpen: () => void = () => undefined;
    onClose: () => void = () => undefined;

    constructor(
        private readonly url: string,
        readonly session: string,
        private readonly factory: SocketFactory,
    ) {}

    open(): void {
        this.closeQuietly();
        this.seq = 0;
        this.lastIn = 0;
        const sock = this.factory(this.url);
        this.sock = sock;
        sock.onopen = () => this.onOpen();
        sock.onclose = () => {
            if (this.sock === sock) {
                this.sock = null;
                this.onClose();
            }
        };
        sock.onerror = () => undefined;   // the close event follows anyway
        sock.onmessage = (ev) => {
            const text = typeof ev.data === "string" ? ev.data : String(ev.data);
            let env: ServerEnvelope;
            try {
                env = parseServerFrame(text);
            } catch {
                return;   // not ours to understand; drop it
            }
            // seq 0 marks transport errors sent before any binding
            if (env.seq > 0) {
                if (env.seq <= this.lastIn) {
                    return;
                }
                this.lastIn = env.seq;
            }
            this.onEnvelope(env);
        };
    }

    get isOpen(): boolean {
        return this.sock !== null;
    }

    close(): void {
        this.closeQuietly();
    }

    private closeQuietly(): void {
        const sock = this.sock;
        if (sock !== null) {
            this.sock = null;
            sock.onclose = null;
            sock.close();
        }
    }

    send(msg: ClientMessage): number {
        if (this.sock === null) {
            throw new Error("connection is closed");
        }
        this.seq += 1;
        this.sock.send(encodeClientFrame(msg, this.session, this.seq));
        return this.seq;
    }

    hello(token: string | null): number {
        return this.send({ kind: "Hello", payload: { token } });
    }

    join(): number {
        return this.send({ kind: "Join", payload: {} });
    }

    submitChoice(round: number, action: "take" | "give", target?: string): number {
        const payload = action === "give"
            ? { round, phase: "choice" as const, action, target }
            : { round, phase: "choice" as const, action };
        return this.send({ kind: "SubmitChoice", payload });
    }

    submitInvest(round: number, amount: number): number {
        return this.send({ kind: "SubmitInvest", payload: { round, phase: "invest", amount } });
    }

    submitDistribution(round: number, allocations: Record<string, number>): number {
        return this.send({
            kind: "SubmitDistribution",
            payload: { round, phase: "distribute", allocations },
        });
    }

    submitPurchase(round: number, items: PurchaseItem[]): number {
        return this.send({ kind: "SubmitPurchase", payload: { round, phase: "shop", items } });
    }
}
