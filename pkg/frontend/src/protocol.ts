// Wire contract with the engine: newline-delimited JSON, verbatim through
// the bridge. Field names and types here mirror the server exactly.

export type ModeName = "Idle" | "Solo" | "Multi";
export type OverlayName = "Interrupt" | "Reward";
export type SyncStatusName = "InSync" | "OutOfSync" | "Indeterminate";
export type KindName =
  | "Recruitment"
  | "Motivational"
  | "SocialInterrupt"
  | "SocialReward";

export interface StateMessage {
  type: "state";
  t: number;
  mode: ModeName;
  overlay: OverlayName | null;
  leaves: number[];
  kinds: KindName[];
  sync: { status: SyncStatusName; spread: number };
  power: { supply: number; demand: number; scale: number; reservoir: number };
  bikers: { id: number; rpm: number }[];
}

export interface ErrorMessage {
  type: "error";
  message: string;
}

export type ServerMessage = StateMessage | ErrorMessage;

export type ClientMessage = {
  type: "join" | "leave" | "pedal";
  biker: number;
};

// Every snapshot field and where the console shows it. Nothing is silently
// ignored; "t" doubles as the staleness reference.
export const FIELD_USAGE: Record<string, string> = {
  type: "message dispatch",
  t: "staleness check + debug footer",
  mode: "banner",
  overlay: "banner highlight",
  leaves: "leaf arcs (interpolated)",
  kinds: "per-leaf caption",
  "sync.status": "sync meter colour",
  "sync.spread": "sync meter needle",
  "power.supply": "power gauge (supply bar)",
  "power.demand": "power gauge (demand bar)",
  "power.scale": "brownout indicator",
  "power.reservoir": "reservoir bar",
  bikers: "per-biker rpm dials",
};

const MODES = new Set(["Idle", "Solo", "Multi"]);
const OVERLAYS = new Set(["Interrupt", "Reward"]);
const STATUSES = new Set(["InSync", "OutOfSync", "Indeterminate"]);
const KINDS = new Set([
  "Recruitment",
  "Motivational",
  "SocialInterrupt",
  "SocialReward",
]);

function numbers(xs: unknown): xs is number[] {
  return Array.isArray(xs) && xs.every((x) => typeof x === "number" && isFinite(x));
}

export function parseServerLine(line: string): ServerMessage | null {
  let raw: unknown;
  try {
    raw = JSON.parse(line);
  } catch {
    return null;
  }
  if (typeof raw !== "object" || raw === null) return null;
  const msg = raw as Record<string, unknown>;

  if (msg.type === "error") {
    return typeof msg.message === "string"
      ? { type: "error", message: msg.message }
      : null;
  }
  if (msg.type !== "state") return null;

  const sync = msg.sync as Record<string, unknown> | undefined;
  const power = msg.power as Record<string, unknown> | undefined;
  const ok =
    typeof msg.t === "number" &&
    MODES.has(msg.mode as string) &&
    (msg.overlay === null || OVERLAYS.has(msg.overlay as string)) &&
    numbers(msg.leaves) &&
    (msg.leaves as number[]).length === 3 &&
    Array.isArray(msg.kinds) &&
    (msg.kinds as unknown[]).every((k) => KINDS.has(k as string)) &&
    sync !== undefined &&
    STATUSES.has(sync.status as string) &&
    typeof sync.spread === "number" &&
    power !== undefined &&
    numbers([power.supply, power.demand, power.scale, power.reservoir]) &&
    Array.isArray(msg.bikers) &&
    (msg.bikers as unknown[]).every(
      (b) =>
        typeof (b as Record<string, unknown>).id === "number" &&
        typeof (b as Record<string, unknown>).rpm === "number",
    );
  return ok ? (msg as unknown as StateMessage) : null;
}

export function encodeClientMessage(msg: ClientMessage): string {
  return JSON.stringify(msg) + "\n";
}
