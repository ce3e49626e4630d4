/**
 * API client with single-flight discipline: at most one request in flight;
 * responses arriving for superseded requests are discarded by sequence
 * number (and the transport is aborted when possible).
 */

import type { CepResponse, ScenarioPreset, TruthCepRequest } from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(public status: number, public detail: unknown) {
    super(`service error ${status}`);
  }
}

export class ApiClient {
  private seq = 0;
  private controller: AbortController | null = null;

  constructor(private baseUrl = "", private fetchFn: FetchLike = fetch.bind(globalThis)) {}

  async scenarios(): Promise<ScenarioPreset[]> {
    const r = await this.fetchFn(`${this.baseUrl}/api/scenarios`);
    if (!r.ok) throw new ApiError(r.status, await r.text());
    return (await r.json()) as ScenarioPreset[];
  }

  /**
   * POST a truth-CEP request. Resolves with null when a newer request was
   * issued before this one settled (stale response, caller must ignore).
   */
  async truthCep(body: TruthCepRequest): Promise<CepResponse | null> {
    const mySeq = ++this.seq;
    this.controller?.abort();
    this.controller = typeof AbortController !== "undefined" ? new AbortController() : null;
    let r: Response;
    try {
      r = await this.fetchFn(`${this.baseUrl}/api/truth-cep`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(body),
        ...(this.controller ? { signal: this.controller.signal } : {}),
      });
    } catch (err) {
      if (mySeq !== this.seq) return null; // aborted because superseded
      throw err;
    }
    if (mySeq !== this.seq) return null;
    if (!r.ok) {
      let detail: unknown;
      try {
        detail = (await r.json()) as { detail?: unknown };
      } catch {
        detail = await r.text();
      }
      throw new ApiError(r.status, (detail as { detail?: unknown })?.detail ?? detail);
    }
    return (await r.json()) as CepResponse;
  }
}
