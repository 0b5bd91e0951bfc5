// Client configuration: where the server lives and which glyph stands
// for each status-symbol rank. The symbols travel the wire as abstract
// ranked ids ("sym1".."sym10"); the pictures are purely presentation,
// so they live here and not in the game rules.

export interface ClientConfig {
    server: string;                    // ws(s) origin; "" means same origin
    glyphs: Record<string, string>;
}

// rank 1 is the hamburger; the ladder climbs toward outright royalty
export const DEFAULT_GLYPHS: Record<string, string> = {
    sym1: "\u{1F354}",   // hamburger
    sym2: "\u{1F35F}",   // fries
    sym3: "\u{1F355}",   // pizza
    sym4: "\u{1F3A7}",   // headphones
    sym5: "\u{1F6F9}",   // skateboard
    sym6: "\u{1F3B8}",   // guitar
    sym7: "\u{1F48D}",   // ring
    sym8: "\u{1F697}",   // car
    sym9: "\u{1F6E5}",   // motor boat
    sym10: "\u{1F451}",  // crown
};

export const DEFAULT_CONFIG: ClientConfig = {
    server: "",
    glyphs: DEFAULT_GLYPHS,
};

export function mergeConfig(raw: unknown): ClientConfig {
    const cfg: ClientConfig = { server: "", glyphs: { ...DEFAULT_GLYPHS } };
    if (typeof raw !== "object" || raw === null) {
        return cfg;
    }
    const doc = raw as Record<string, unknown>;
    if (typeof doc["server"] === "string") {
        cfg.server = doc["server"];
    }
    const glyphs = doc["glyphs"];
    if (typeof glyphs === "object" && glyphs !== null) {
        for (const [id, glyph] of Object.entries(glyphs)) {
            if (typeof glyph === "string" && glyph.length > 0) {
                cfg.glyphs[id] = glyph;
            }
        }
    }
    return cfg;
}

// fetch the static config document served next to the page; missing or
// broken documents fall back to the defaults so the client still boots
export async function loadConfig(url = "./client-config.json"): Promise<ClientConfig> {
    try {
        const res = await fetch(url);
        if (!res.ok) {
            return { ...DEFAULT_CONFIG, glyphs: { ...DEFAULT_GLYPHS } };
        }
        return mergeConfig(await res.json());
    } catch {
        return { ...DEFAULT_CONFIG, glyphs: { ...DEFAULT_GLYPHS } };
    }
}

export function glyphFor(cfg: ClientConfig, id: string): string {
    return cfg.glyphs[id] ?? id;
}

// the websocket endpoint for a given page location
export function wsUrl(cfg: ClientConfig, location: { protocol: string; host: string }): string {
    if (cfg.server !== "") {
        return cfg.server.replace(/\/$/, "") + "/ws";
    }
    const scheme = location.protocol === "https:" ? "wss:" : "ws:";
    return `${scheme}//${location.host}/ws`;
}
