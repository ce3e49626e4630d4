/**
 * Verdict banner logic and the numeric readout. The displayed numbers are
 * exactly the service's values (no client-side recomputation).
 */

import type { CepSummary } from "./types.js";

export interface VerdictThresholds {
  interceptNearZero: number;
}

export const DEFAULT_THRESHOLDS: VerdictThresholds = { interceptNearZero: 0.03 };

export interface Verdict {
  valid: boolean;
  message: string;
}

export function judge(s: CepSummary, t: VerdictThresholds = DEFAULT_THRESHOLDS): Verdict {
  const interceptOk = Math.abs(s.g0_mean) <= t.interceptNearZero || (s.g0_lo <= 0 && 0 <= s.g0_hi);
  const slopeOk = s.g1_mean > 0 && s.g1_lo > 0;
  if (interceptOk && slopeOk) {
    return { valid: true, message: "consistent with a valid surrogate: intercept near 0, positive slope" };
  }
  const reasons: string[] = [];
  if (!interceptOk) reasons.push("intercept away from 0");
  if (!slopeOk) reasons.push(s.g1_mean <= 0 ? "non-positive slope" : "slope uncertainty includes 0");
  return { valid: false, message: `not consistent with a valid surrogate: ${reasons.join(", ")}` };
}

const f4 = (x: number) => x.toFixed(4);

/** Numeric readout strings, built verbatim from the service summary. */
export function readout(s: CepSummary): Record<string, string> {
  return {
    intercept: `${f4(s.g0_mean)} (${f4(s.g0_lo)}, ${f4(s.g0_hi)})`,
    slope: `${f4(s.g1_mean)} (${f4(s.g1_lo)}, ${f4(s.g1_hi)})`,
    meanDs: f4(s.mean_ds),
    meanDt: f4(s.mean_dt),
  };
}
