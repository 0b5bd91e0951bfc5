// Small display formatters shared by the panels and the history feed.
// Pure string functions, no DOM.

import type { ClientConfig } from "./config.js";
import type { CardInfo } from "./protocol.js";

const SUIT_GLYPHS: Record<string, string> = {
    C: "♣", D: "♦", H: "♥", S: "♠",
};

export function fmtCard(card: CardInfo | null): string {
    if (card === null) {
        return "no draw";
    }
    return `${card.rank}${SUIT_GLYPHS[card.suit] ?? card.suit}`;
}

// own protection cards as a compact run, e.g. "2xJ,3xQ,K"
export function pcardSummary(pcards: Record<string, number>): string {
    const parts: string[] = [];
    for (const face of ["J", "Q", "K"]) {
        const n = pcards[face] ?? 0;
        if (n === 1) {
            parts.push(face);
        } else if (n > 1) {
            parts.push(`${n}x${face}`);
        }
    }
    return parts.length > 0 ? parts.join(",") : "none";
}

// a player's status symbols as one inline glyph run; duplicates stay
// visible because showing off twice is the whole point
export function emojiRow(emojis: string[], cfg: ClientConfig): string {
    return emojis.map((id) => cfg.glyphs[id] ?? id).join("");
}

export function fmtCoins(n: number): string {
    return n.toLocaleString("en-US");
}
