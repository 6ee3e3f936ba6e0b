/** Payload types for the play service REST API, plus a strict validator. */

export type Claim = "blue" | "red" | "blue_double";
export type Role = "maker" | "breaker";
export type Verdict = "ongoing" | "maker" | "breaker";

/** Doubled-coordinate edge midpoint [u, v]; u+v is odd. */
export type Edge = [number, number];

export interface MoveRecord {
  player: Role;
  edges: Edge[];
}

export interface GameRecord {
  variant: string;
  m: number;
  n: number;
  kind: string;
  p: number;
  q: number;
  moves: MoveRecord[];
  result: Verdict;
}

export interface GamePayload {
  id: string;
  humanRole: Role;
  engine: string;
  state: GameRecord;
  claims: [Edge, Claim][];
  turn: Role;
  verdict: Verdict;
  /** Forced reply size in sparse variants; null derives from p/q. */
  owed: number | null;
  lastEngineMove: Edge[] | null;
  overlay: unknown;
}

export class SchemaError extends Error {}

function isEdge(x: unknown): x is Edge {
  return (
    Array.isArray(x) &&
    x.length === 2 &&
    x.every((c) => Number.isInteger(c)) &&
    (x[0] + x[1]) % 2 !== 0
  );
}

const CLAIMS: readonly string[] = ["blue", "red", "blue_double"];
const ROLES: readonly string[] = ["maker", "breaker"];
const VERDICTS: readonly string[] = ["ongoing", "maker", "breaker"];

/** Throws SchemaError with a readable reason on any shape mismatch. */
export function validatePayload(raw: unknown): GamePayload {
  if (typeof raw !== "object" || raw === null) {
    throw new SchemaError("payload is not an object");
  }
  const p = raw as Record<string, unknown>;
  if (typeof p.id !== "string") throw new SchemaError("missing game id");
  if (!ROLES.includes(p.humanRole as string)) {
    throw new SchemaError("bad humanRole");
  }
  if (typeof p.engine !== "string") throw new SchemaError("bad engine");
  const st = p.state as Record<string, unknown> | null;
  if (typeof st !== "object" || st === null) {
    throw new SchemaError("missing state record");
  }
  for (const field of ["m", "n", "p", "q"]) {
    if (!Number.isInteger(st[field])) {
      throw new SchemaError(`state.${field} is not an integer`);
    }
  }
  if (!Array.isArray(st.moves)) throw new SchemaError("state.moves missing");
  if (!Array.isArray(p.claims)) throw new SchemaError("claims missing");
  for (const entry of p.claims as unknown[]) {
    if (
      !Array.isArray(entry) ||
      entry.length !== 2 ||
      !isEdge(entry[0]) ||
      !CLAIMS.includes(entry[1] as string)
    ) {
      throw new SchemaError("malformed claim entry");
    }
  }
  if (!ROLES.includes(p.turn as string)) throw new SchemaError("bad turn");
  if (!VERDICTS.includes(p.verdict as string)) {
    throw new SchemaError("bad verdict");
  }
  if (p.owed !== null && !Number.isInteger(p.owed)) {
    throw new SchemaError("bad owed");
  }
  if (p.lastEngineMove !== null) {
    if (
      !Array.isArray(p.lastEngineMove) ||
      !(p.lastEngineMove as unknown[]).every(isEdge)
    ) {
      throw new SchemaError("bad lastEngineMove");
    }
  }
  return raw as GamePayload;
}
