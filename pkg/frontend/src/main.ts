/** DOM wiring: controls -> debounced recompute -> scatter + readout + banner. */

import { ApiClient, ApiError } from "./api.js";
import { renderCepSvg } from "./chart.js";
import { debounce } from "./debounce.js";
import {
  applyPreset, buildRequest, clampState, defaultState,
  N_DRAWS_INTERACTIVE, N_DRAWS_PRECISE,
} from "./state.js";
import type { ExplorerState } from "./state.js";
import type { ArmSpec, CepResponse, ScenarioPreset } from "./types.js";
import { judge, readout } from "./verdict.js";

const api = new ApiClient();
let state: ExplorerState = defaultState();
let presets: ScenarioPreset[] = [];

const $ = (id: string) => document.getElementById(id) as HTMLElement;
const input = (id: string) => document.getElementById(id) as HTMLInputElement;

const ARM_FIELDS: (keyof ArmSpec)[] = [
  "gamma12", "alpha12", "gamma13", "alpha13", "gamma23", "alpha23", "theta23",
];

function controlIds(arm: "control" | "treated"): string[] {
  return ARM_FIELDS.map((f) => `${arm}-${f}`);
}

function pushStateToControls(): void {
  for (const arm of ["control", "treated"] as const) {
    ARM_FIELDS.forEach((f, i) => {
      input(controlIds(arm)[i]).value = String(state[arm][f]);
    });
  }
  input("sigma-omega").value = String(state.frailty.sigma_omega);
  input("rho-s").value = String(state.frailty.rho_s);
  input("rho-t").value = String(state.frailty.rho_t);
  (document.getElementById("structure") as HTMLSelectElement).value = state.frailty.structure;
  input("tau-s").value = String(state.tauS);
  input("tau-t").value = String(state.tauT);
  input("seed").value = String(state.seed);
}

function pullStateFromControls(): void {
  const arm = (which: "control" | "treated"): ArmSpec => {
    const vals = controlIds(which).map((id) => Number(input(id).value));
    return {
      gamma12: vals[0], alpha12: vals[1], gamma13: vals[2], alpha13: vals[3],
      gamma23: vals[4], alpha23: vals[5], theta23: vals[6],
    };
  };
  state = clampState({
    ...state,
    control: arm("control"),
    treated: arm("treated"),
    frailty: {
      ...state.frailty,
      structure: (document.getElementById("structure") as HTMLSelectElement)
        .value as ExplorerState["frailty"]["structure"],
      sigma_omega: Number(input("sigma-omega").value),
      rho_s: Number(input("rho-s").value),
      rho_t: Number(input("rho-t").value),
    },
    tauS: Number(input("tau-s").value),
    tauT: Number(input("tau-t").value),
    seed: Number(input("seed").value),
  });
  pushStateToControls(); // reflect clamping back into the UI
}

function showError(message: string): void {
  const el = $("error");
  el.textContent = message;
  el.hidden = false;
}

function render(res: CepResponse): void {
  $("error").hidden = true;
  $("chart").innerHTML = renderCepSvg(res.points, res.summary);
  const r = readout(res.summary);
  $("readout-intercept").textContent = r.intercept;
  $("readout-slope").textContent = r.slope;
  $("readout-mean-ds").textContent = r.meanDs;
  $("readout-mean-dt").textContent = r.meanDt;
  const verdict = judge(res.summary);
  const banner = $("banner");
  banner.textContent = verdict.message;
  banner.className = verdict.valid ? "banner ok" : "banner bad";
}

async function recompute(nDraws?: number): Promise<void> {
  state = clampState({ ...state, nDraws: nDraws ?? N_DRAWS_INTERACTIVE });
  $("busy").hidden = false;
  try {
    const res = await api.truthCep(buildRequest(state));
    if (res !== null) render(res);
  } catch (err) {
    if (err instanceof ApiError) {
      showError(`service rejected the request (${err.status}): ${JSON.stringify(err.detail)}`);
    } else {
      showError(`request failed: ${String(err)}`);
    }
  } finally {
    $("busy").hidden = true;
  }
}

const debouncedRecompute = debounce(() => void recompute(), 300);

function onControlChange(): void {
  pullStateFromControls();
  state = { ...state, presetId: null };
  debouncedRecompute();
}

async function boot(): Promise<void> {
  presets = await api.scenarios();
  const select = document.getElementById("preset") as HTMLSelectElement;
  for (const p of presets) {
    const opt = document.createElement("option");
    opt.value = String(p.id);
    opt.textContent = `scenario ${p.id}: ${p.label}`;
    select.appendChild(opt);
  }
  select.addEventListener("change", () => {
    const id = Number(select.value);
    if (!Number.isNaN(id)) {
      try {
        state = applyPreset(state, presets, id);
      } catch (err) {
        showError(String(err));
        return;
      }
      pushStateToControls();
      debouncedRecompute();
    }
  });

  for (const arm of ["control", "treated"] as const) {
    for (const id of controlIds(arm)) input(id).addEventListener("input", onControlChange);
  }
  for (const id of ["sigma-omega", "rho-s", "rho-t", "tau-s", "tau-t", "seed"]) {
    input(id).addEventListener("input", onControlChange);
  }
  (document.getElementById("structure") as HTMLSelectElement)
    .addEventListener("change", onControlChange);
  $("precise").addEventListener("click", () => void recompute(N_DRAWS_PRECISE));

  pushStateToControls();
  await recompute();
}

if (typeof document !== "undefined") {
  void boot();
}
