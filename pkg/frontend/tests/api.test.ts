import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import { buildRequest, defaultState } from "../src/state.js";
import type { CepResponse } from "../src/types.js";

const RESPONSE: CepResponse = {
  config: {},
  points: [{ id: 0, ds: 0.5, dt: 0.01 }],
  lines: [{ iter: 0, g0: 0.0, g1: 0.016 }],
  summary: { g0_mean: 0, g0_lo: -0.01, g0_hi: 0.01, g1_mean: 0.016,
             g1_lo: 0.012, g1_hi: 0.02, mean_ds: 0.49, mean_dt: 0.008 },
};

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

describe("ApiClient.truthCep", () => {
  it("returns the parsed response", async () => {
    const client = new ApiClient("", async () => jsonResponse(RESPONSE));
    const out = await client.truthCep(buildRequest(defaultState()));
    expect(out?.summary.g1_mean).toBe(0.016);
  });

  it("discards stale responses by sequence number", async () => {
    const resolvers: ((r: Response) => void)[] = [];
    const client = new ApiClient("", (_url, init) => {
      return new Promise<Response>((resolve, reject) => {
        resolvers.push(resolve);
        init?.signal?.addEventListener("abort", () =>
          reject(new DOMException("aborted", "AbortError")));
      });
    });
    const first = client.truthCep(buildRequest(defaultState()));
    const second = client.truthCep(buildRequest({ ...defaultState(), seed: 2 }));
    // complete the second request; the first was superseded (and aborted)
    resolvers[1](jsonResponse(RESPONSE));
    expect(await second).not.toBeNull();
    expect(await first).toBeNull();
  });

  it("maps error bodies to ApiError with detail", async () => {
    const client = new ApiClient(
      "", async () => jsonResponse({ detail: [{ loc: ["frailty", "rho_s"], msg: "too big" }] }, 400));
    await expect(client.truthCep(buildRequest(defaultState()))).rejects.toSatisfy((e: unknown) => {
      return e instanceof ApiError && e.status === 400 &&
        JSON.stringify(e.detail).includes("rho_s");
    });
  });

  it("keeps control state decoupled from transport failures", async () => {
    const client = new ApiClient("", async () => {
      throw new TypeError("network down");
    });
    const state = defaultState();
    await expect(client.truthCep(buildRequest(state))).rejects.toThrow(/network down/);
    // the state object used to build the body is untouched by the failure
    expect(state.frailty.rho_s).toBe(0.5);
  });
});
