/** Browser-free game session: staging, submission, polling, resync.
 *
 * The server stays authoritative: every accepted response replaces the
 * local view model wholesale, and rejections trigger a fresh GET so the
 * board can never drift from the service's record.
 */

import type { CreateParams, ServiceClient } from "./client.js";
import { edgeKey } from "./geometry.js";
import type { Edge, GamePayload } from "./types.js";
import {
  type BoardViewModel,
  requiredEdges,
  renderSvg,
  viewModelFrom,
} from "./view.js";

const sleep = (ms: number) => new Promise((r) => setTimeout(r, ms));

export interface SessionOptions {
  showDual?: boolean;
  pollMs?: number;
  maxPolls?: number;
}

export class UiSession {
  private payload: GamePayload | null = null;
  private staged: Edge[] = [];
  private error: string | null = null;
  private showDual: boolean;
  private pollMs: number;
  private maxPolls: number;
  /** Milliseconds from the last submission to the engine's reply. */
  lastReplyMs = 0;

  constructor(
    private client: ServiceClient,
    opts: SessionOptions = {},
  ) {
    this.showDual = opts.showDual ?? false;
    this.pollMs = opts.pollMs ?? 150;
    this.maxPolls = opts.maxPolls ?? 40;
  }

  latest(): BoardViewModel {
    if (this.payload === null) {
      throw new Error("no game yet");
    }
    return viewModelFrom(this.payload, {
      staged: this.staged,
      showDual: this.showDual,
      error: this.error,
    });
  }

  svg(): string {
    return renderSvg(this.latest());
  }

  gameId(): string {
    if (this.payload === null) throw new Error("no game yet");
    return this.payload.id;
  }

  setDualOverlay(on: boolean): void {
    this.showDual = on;
  }

  async create(params: CreateParams): Promise<BoardViewModel> {
    this.payload = await this.client.createGame(params);
    this.staged = [];
    this.error = null;
    return this.latest();
  }

  async refresh(): Promise<BoardViewModel> {
    this.payload = await this.client.getGame(this.gameId());
    return this.latest();
  }

  /** Stages a click; submits once the quota's worth of edges is staged. */
  async clickEdge(edge: Edge): Promise<BoardViewModel> {
    const vm = this.latest();
    this.error = null;
    if (vm.verdict !== "ongoing") {
      this.error = "the game is over";
      return this.latest();
    }
    if (vm.turn !== vm.humanRole) {
      this.error = "not your turn";
      return this.latest();
    }
    const key = edgeKey(edge);
    const doubling = vm.variant === "Secure" && vm.claims.get(key) === "blue";
    if (vm.claims.has(key) && !doubling) {
      this.error = "edge already claimed";
      return this.latest();
    }
    const already = this.staged.findIndex((e) => edgeKey(e) === key);
    if (already >= 0) {
      this.staged.splice(already, 1); // second click unstages
      return this.latest();
    }
    this.staged.push(edge);
    if (this.staged.length < requiredEdges(vm)) {
      return this.latest();
    }
    return this.submit();
  }

  private async submit(): Promise<BoardViewModel> {
    const edges = this.staged;
    this.staged = [];
    const started = Date.now();
    const outcome = await this.client.postMove(this.gameId(), edges);
    if (!outcome.ok) {
      this.error = `${outcome.rejection.reason}: ${outcome.rejection.message}`;
      await this.refresh(); // resync; the server is authoritative
      return this.latest();
    }
    this.payload = outcome.payload;
    // poll until the engine's reply shows up (it usually already has)
    let polls = 0;
    while (
      this.payload.verdict === "ongoing" &&
      this.payload.turn !== this.payload.humanRole &&
      polls < this.maxPolls
    ) {
      await sleep(this.pollMs);
      this.payload = await this.client.getGame(this.gameId());
      polls += 1;
    }
    this.lastReplyMs = Date.now() - started;
    return this.latest();
  }
}
