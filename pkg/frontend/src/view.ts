/** Board view model and SVG rendering.
 *
 * Rendering produces a markup string so the same code runs in tests
 * without a DOM. The browser shell assigns it to innerHTML and wires
 * one delegated click listener.
 */

import {
  boardEdges,
  boardHeight,
  boardWidth,
  dualEndpoints,
  edgeKey,
  endpoints,
  horizontalEdge,
  px,
  py,
  verticalEdge,
} from "./geometry.js";
import type { Claim, Edge, GamePayload, Role, Verdict } from "./types.js";

export interface BoardViewModel {
  m: number;
  n: number;
  p: number;
  q: number;
  variant: string;
  claims: Map<string, Claim>;
  lastMove: Edge[];
  staged: Edge[];
  verdict: Verdict;
  turn: Role;
  humanRole: Role;
  owed: number | null;
  overlay: unknown;
  showDual: boolean;
  error: string | null;
}

export interface ViewOptions {
  staged?: Edge[];
  showDual?: boolean;
  error?: string | null;
}

export function viewModelFrom(
  payload: GamePayload,
  opts: ViewOptions = {},
): BoardViewModel {
  const claims = new Map<string, Claim>();
  for (const [edge, claim] of payload.claims) {
    claims.set(edgeKey(edge), claim);
  }
  return {
    m: payload.state.m,
    n: payload.state.n,
    p: payload.state.p,
    q: payload.state.q,
    variant: payload.state.variant,
    claims,
    lastMove: payload.lastEngineMove ?? [],
    staged: opts.staged ?? [],
    verdict: payload.verdict,
    turn: payload.turn,
    humanRole: payload.humanRole,
    owed: payload.owed,
    overlay: payload.overlay,
    showDual: opts.showDual ?? false,
    error: opts.error ?? null,
  };
}

/** Edges the human must submit in one move right now. */
export function requiredEdges(vm: BoardViewModel): number {
  if (vm.owed !== null && vm.owed > 0) return vm.owed;
  const quota = vm.humanRole === "maker" ? vm.p : vm.q;
  const free = boardEdges(vm.m, vm.n).length - vm.claims.size;
  return Math.min(quota, Math.max(free, 0));
}

// -- overlays ---------------------------------------------------------------

/** The four reserved edges of a bracket, by kind and lower-left anchor. */
export function bracketEdges(kind: string, x: number, y: number): Edge[] {
  switch (kind) {
    case "T1":
      return [
        horizontalEdge(x, y),
        horizontalEdge(x + 1, y),
        verticalEdge(x + 2, y),
        verticalEdge(x + 2, y + 1),
      ];
    case "T2":
      return [
        horizontalEdge(x, y),
        verticalEdge(x + 1, y),
        horizontalEdge(x + 1, y + 1),
        verticalEdge(x + 2, y + 1),
      ];
    case "T3plus":
      return [
        verticalEdge(x, y - 1),
        horizontalEdge(x, y - 1),
        verticalEdge(x + 1, y - 1),
        verticalEdge(x + 1, y),
      ];
    case "T3minus":
      return [
        horizontalEdge(x, y),
        horizontalEdge(x + 1, y),
        verticalEdge(x + 2, y),
        horizontalEdge(x + 1, y + 1),
      ];
    default:
      return [];
  }
}

interface CertificateDump {
  class: string;
  path: Edge[];
  closure:
    | { bracket: { kind: string; anchor: [number, number] } }
    | { gate: Edge; extra: boolean };
}

interface StripDump {
  columns: [number, number];
  status: string;
  k: number;
  pendingHits: number;
}

function certificates(overlay: unknown): CertificateDump[] {
  if (typeof overlay !== "object" || overlay === null) return [];
  const certs = (overlay as { certificates?: unknown }).certificates;
  return Array.isArray(certs) ? (certs as CertificateDump[]) : [];
}

function strips(overlay: unknown): StripDump[] {
  if (typeof overlay !== "object" || overlay === null) return [];
  const st = (overlay as { strips?: unknown }).strips;
  return Array.isArray(st) ? (st as StripDump[]) : [];
}

// -- SVG --------------------------------------------------------------------

function lineFor(e: Edge, n: number, cls: string, attrs = ""): string {
  const [a, b] = endpoints(e);
  return (
    `<line class="${cls}" x1="${px(a[0])}" y1="${py(a[1], n)}"` +
    ` x2="${px(b[0])}" y2="${py(b[1], n)}"${attrs}/>`
  );
}

function dualLineFor(e: Edge, n: number, cls: string): string {
  const [a, b] = dualEndpoints(e);
  return (
    `<line class="${cls}" x1="${px(a[0])}" y1="${py(a[1], n)}"` +
    ` x2="${px(b[0])}" y2="${py(b[1], n)}"/>`
  );
}

function goalBars(m: number, n: number): string {
  const top = py(2 * n, n) - HALF_BAR;
  const bottom = py(2, n) + HALF_BAR;
  const left = px(2);
  const right = px(2 * m);
  return (
    `<line class="goal goal-maker" x1="${px(1)}" y1="${top}" x2="${px(1)}" y2="${bottom}"/>` +
    `<line class="goal goal-maker" x1="${px(2 * m + 1)}" y1="${top}" x2="${px(2 * m + 1)}" y2="${bottom}"/>` +
    `<line class="goal goal-breaker" x1="${left}" y1="${py(2 * n + 1, n)}" x2="${right}" y2="${py(2 * n + 1, n)}"/>` +
    `<line class="goal goal-breaker" x1="${left}" y1="${py(1, n)}" x2="${right}" y2="${py(1, n)}"/>`
  );
}

const HALF_BAR = 12;

/** Renders the whole board as an SVG markup string. */
export function renderSvg(vm: BoardViewModel): string {
  const { m, n } = vm;
  const parts: string[] = [];
  const stagedKeys = new Set(vm.staged.map(edgeKey));
  const lastKeys = new Set(vm.lastMove.map(edgeKey));
  const edges = boardEdges(m, n);

  parts.push(goalBars(m, n));
  for (const e of edges) {
    const key = edgeKey(e);
    const claim = vm.claims.get(key);
    let cls = "edge";
    let attrs = ` data-edge="${key}"`;
    if (claim) {
      cls += ` claim-${claim}`;
      attrs += ` data-claim="${claim}"`;
    } else {
      cls += " free";
    }
    if (stagedKeys.has(key)) cls += " staged";
    if (lastKeys.has(key)) cls += " last";
    parts.push(lineFor(e, n, cls, attrs));
  }
  if (vm.showDual) {
    for (const e of edges) {
      const claim = vm.claims.get(edgeKey(e));
      const cls = claim === "red" ? "dual dual-red" : "dual";
      parts.push(dualLineFor(e, n, cls));
    }
  }
  for (const cert of certificates(vm.overlay)) {
    for (const e of cert.path) {
      parts.push(lineFor(e, n, "cert-path"));
    }
    const closure = cert.closure;
    if ("bracket" in closure) {
      const { kind, anchor } = closure.bracket;
      for (const e of bracketEdges(kind, anchor[0], anchor[1])) {
        parts.push(lineFor(e, n, `bracket bracket-${kind}`));
      }
    } else {
      const cls = closure.extra ? "gate gate-extra" : "gate";
      parts.push(lineFor(closure.gate, n, cls));
    }
  }
  for (const strip of strips(vm.overlay)) {
    const [x0, x1] = strip.columns;
    const x = px(2 * x0);
    const w = px(2 * x1) - x;
    const y = py(2 * n, n) - HALF_BAR;
    const h = py(2, n) + HALF_BAR - y;
    parts.push(
      `<rect class="strip strip-${strip.status}" x="${x}" y="${y}"` +
        ` width="${w}" height="${h}">` +
        `<title>strip ${x0}..${x1}: ${strip.status}, k=${strip.k},` +
        ` pending=${strip.pendingHits}</title></rect>`,
    );
  }
  if (vm.verdict === "ongoing") {
    for (const e of edges) {
      if (vm.claims.has(edgeKey(e))) continue;
      parts.push(lineFor(e, n, "hit", ` data-hit="${edgeKey(e)}"`));
    }
  }
  const cls = vm.verdict === "ongoing" ? "board" : "board locked";
  return (
    `<svg class="${cls}" viewBox="0 0 ${boardWidth(m)} ${boardHeight(n)}"` +
    ` width="${boardWidth(m)}" height="${boardHeight(n)}"` +
    ` xmlns="http://www.w3.org/2000/svg">${parts.join("")}</svg>`
  );
}

/** One-line status/verdict text shown above the board. */
export function renderBanner(vm: BoardViewModel): string {
  if (vm.error) return `error: ${vm.error}`;
  if (vm.verdict !== "ongoing") {
    return vm.verdict === "maker" ? "maker wins" : "breaker wins";
  }
  if (vm.turn !== vm.humanRole) return "engine to move";
  const need = requiredEdges(vm);
  const have = vm.staged.length;
  return need > 1
    ? `your turn: stage ${need} edges (${have}/${need})`
    : "your turn";
}

/** Extracts the claim map back out of rendered markup. */
export function renderedClaimMap(svg: string): Map<string, string> {
  const map = new Map<string, string>();
  const pattern = /data-edge="([0-9]+,[0-9]+)"(?: data-claim="([a-z_]+)")?/g;
  for (const match of svg.matchAll(pattern)) {
    if (match[2]) map.set(match[1], match[2]);
  }
  return map;
}

/** Server-authoritative check: rendered claims equal the payload's. */
export function claimMapMatches(svg: string, payload: GamePayload): boolean {
  const rendered = renderedClaimMap(svg);
  if (rendered.size !== payload.claims.length) return false;
  for (const [edge, claim] of payload.claims) {
    if (rendered.get(edgeKey(edge)) !== claim) return false;
  }
  return true;
}
