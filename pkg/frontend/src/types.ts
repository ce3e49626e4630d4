/** Shared contract types mirroring the compute service's JSON API. */

export interface ArmSpec {
  gamma12: number;
  gamma13: number;
  gamma23: number;
  alpha12: number;
  alpha13: number;
  alpha23: number;
  theta23: number;
}

export type FrailtyStructure = "equal_13_23" | "independent_three" | "full_six";

export interface FrailtySpec {
  structure: FrailtyStructure;
  sigma_omega: number;
  rho_s: number;
  rho_t: number;
  rho_st?: number;
  rho_t1?: number;
  rho_t4?: number;
}

export interface TruthCepRequest {
  control: ArmSpec;
  treated: ArmSpec;
  frailty: FrailtySpec;
  tau_s: number;
  tau_t: number;
  n_draws: number;
  seed: number;
  max_points: number;
}

export interface CepPoint {
  id: number;
  ds: number;
  dt: number;
}

export interface CepSummary {
  g0_mean: number;
  g0_lo: number;
  g0_hi: number;
  g1_mean: number;
  g1_lo: number;
  g1_hi: number;
  mean_ds: number;
  mean_dt: number;
}

export interface CepResponse {
  config: Record<string, unknown>;
  points: CepPoint[];
  lines: { iter: number; g0: number; g1: number }[];
  summary: CepSummary;
}

export interface ScenarioPreset {
  id: number;
  label: string;
  control: ArmSpec;
  treated: ArmSpec;
}
