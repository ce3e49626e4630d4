/**
 * Explorer state: all control values, clamping rules, and conversion to a
 * request body the service is guaranteed to accept.
 */

import type { ArmSpec, FrailtySpec, ScenarioPreset, TruthCepRequest } from "./types.js";

export interface ExplorerState {
  control: ArmSpec;
  treated: ArmSpec;
  frailty: FrailtySpec;
  tauS: number;
  tauT: number;
  nDraws: number;
  seed: number;
  presetId: number | null;
}

export const GAMMA_MIN = 0.01;
export const GAMMA_MAX = 5;
export const ALPHA_MIN = 0.2;
export const ALPHA_MAX = 3;
export const THETA_LIMIT = 2;
export const N_DRAWS_INTERACTIVE = 20_000;
export const N_DRAWS_PRECISE = 200_000;
export const MAX_POINTS = 2000;
const N_DRAWS_CAP = 500_000;

export function defaultArm(): ArmSpec {
  return { gamma12: 1, gamma13: 0.5, gamma23: 1, alpha12: 1, alpha13: 1, alpha23: 1, theta23: 0 };
}

export function defaultState(): ExplorerState {
  return {
    control: defaultArm(),
    treated: defaultArm(),
    frailty: { structure: "equal_13_23", sigma_omega: 0.4, rho_s: 0.5, rho_t: 0.5 },
    tauS: 1,
    tauT: 5,
    nDraws: N_DRAWS_INTERACTIVE,
    seed: 1,
    presetId: null,
  };
}

const clip = (x: number, lo: number, hi: number) => Math.min(hi, Math.max(lo, x));

function finiteOr(x: number, fallback: number): number {
  return Number.isFinite(x) ? x : fallback;
}

export function clampArm(arm: ArmSpec): ArmSpec {
  return {
    gamma12: clip(finiteOr(arm.gamma12, 1), GAMMA_MIN, GAMMA_MAX),
    gamma13: clip(finiteOr(arm.gamma13, 0.5), GAMMA_MIN, GAMMA_MAX),
    gamma23: clip(finiteOr(arm.gamma23, 1), GAMMA_MIN, GAMMA_MAX),
    alpha12: clip(finiteOr(arm.alpha12, 1), ALPHA_MIN, ALPHA_MAX),
    alpha13: clip(finiteOr(arm.alpha13, 1), ALPHA_MIN, ALPHA_MAX),
    alpha23: clip(finiteOr(arm.alpha23, 1), ALPHA_MIN, ALPHA_MAX),
    theta23: clip(finiteOr(arm.theta23, 0), -THETA_LIMIT, THETA_LIMIT),
  };
}

/** Enforce every control invariant; never lets an invalid body escape. */
export function clampState(s: ExplorerState): ExplorerState {
  const tauS = clip(finiteOr(s.tauS, 1), 0.05, 50);
  let tauT = clip(finiteOr(s.tauT, 5), 0.1, 100);
  if (tauT <= tauS) tauT = tauS + 0.1;
  return {
    control: clampArm(s.control),
    treated: clampArm(s.treated),
    frailty: {
      structure: s.frailty.structure,
      sigma_omega: clip(finiteOr(s.frailty.sigma_omega, 0.4), 0.01, 3),
      rho_s: clip(finiteOr(s.frailty.rho_s, 0.5), -1, 1),
      rho_t: clip(finiteOr(s.frailty.rho_t, 0.5), -1, 1),
      ...(s.frailty.rho_st !== undefined ? { rho_st: clip(s.frailty.rho_st, -1, 1) } : {}),
      ...(s.frailty.rho_t1 !== undefined ? { rho_t1: clip(s.frailty.rho_t1, -1, 1) } : {}),
      ...(s.frailty.rho_t4 !== undefined ? { rho_t4: clip(s.frailty.rho_t4, -1, 1) } : {}),
    },
    tauS,
    tauT,
    nDraws: Math.round(clip(finiteOr(s.nDraws, N_DRAWS_INTERACTIVE), 1000, N_DRAWS_CAP)),
    seed: Math.round(finiteOr(s.seed, 1)),
    presetId: s.presetId,
  };
}

export function buildRequest(s: ExplorerState): TruthCepRequest {
  const c = clampState(s);
  return {
    control: c.control,
    treated: c.treated,
    frailty: c.frailty,
    tau_s: c.tauS,
    tau_t: c.tauT,
    n_draws: c.nDraws,
    seed: c.seed,
    max_points: MAX_POINTS,
  };
}

/** Populate arm controls from a scenario preset; other controls persist. */
export function applyPreset(s: ExplorerState, presets: ScenarioPreset[], id: number): ExplorerState {
  const preset = presets.find((p) => p.id === id);
  if (!preset) {
    throw new Error(`unknown scenario id ${id}; valid ids: ${presets.map((p) => p.id).join(", ")}`);
  }
  return clampState({
    ...s,
    control: { ...preset.control },
    treated: { ...preset.treated },
    presetId: preset.id,
  });
}
