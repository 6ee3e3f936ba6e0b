/** Thin fetch wrapper around the play service REST API. */

import { type Edge, type GamePayload, validatePayload } from "./types.js";

export interface CreateParams {
  variant?: string;
  m?: number;
  n?: number;
  p?: number;
  q?: number;
  humanRole?: string;
  engine?: string;
  seed?: number;
}

export interface Rejection {
  status: number;
  reason: string;
  message: string;
}

export type MoveOutcome =
  | { ok: true; payload: GamePayload }
  | { ok: false; rejection: Rejection };

export class ServiceError extends Error {
  constructor(
    public status: number,
    message: string,
  ) {
    super(message);
  }
}

type Fetch = typeof globalThis.fetch;

export class ServiceClient {
  constructor(
    public baseUrl: string,
    private fetchFn: Fetch = globalThis.fetch.bind(globalThis),
  ) {}

  private async json(res: Response): Promise<unknown> {
    try {
      return await res.json();
    } catch {
      return null;
    }
  }

  async createGame(params: CreateParams): Promise<GamePayload> {
    const res = await this.fetchFn(`${this.baseUrl}/games`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(params),
    });
    const body = await this.json(res);
    if (!res.ok) {
      const detail = (body as { detail?: string } | null)?.detail;
      throw new ServiceError(res.status, detail ?? `create failed (${res.status})`);
    }
    return validatePayload(body);
  }

  async getGame(id: string): Promise<GamePayload> {
    const res = await this.fetchFn(`${this.baseUrl}/games/${id}`);
    const body = await this.json(res);
    if (!res.ok) {
      throw new ServiceError(res.status, `game ${id} not found`);
    }
    return validatePayload(body);
  }

  async postMove(id: string, edges: Edge[]): Promise<MoveOutcome> {
    const res = await this.fetchFn(`${this.baseUrl}/games/${id}/moves`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ edges }),
    });
    const body = await this.json(res);
    if (res.ok) {
      return { ok: true, payload: validatePayload(body) };
    }
    const detail = (body as { detail?: unknown } | null)?.detail;
    if (typeof detail === "object" && detail !== null) {
      const d = detail as { reason?: string; message?: string };
      return {
        ok: false,
        rejection: {
          status: res.status,
          reason: d.reason ?? "Rejected",
          message: d.message ?? `move rejected (${res.status})`,
        },
      };
    }
    return {
      ok: false,
      rejection: {
        status: res.status,
        reason: "Rejected",
        message: typeof detail === "string" ? detail : `move rejected (${res.status})`,
      },
    };
  }

  async overlay(id: string): Promise<unknown> {
    const res = await this.fetchFn(`${this.baseUrl}/games/${id}/overlay`);
    if (!res.ok) {
      throw new ServiceError(res.status, `overlay ${id} not found`);
    }
    return this.json(res);
  }
}
