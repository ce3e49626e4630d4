"""Causal effect predictiveness (CEP) quantities.

Per subject, the treatment effect on the intermediate endpoint is the log
cumulative-hazard ratio of the 1->2 transition at a landmark tau_s,

    ds_i = log( L12_control(tau_s | omega) / L12_treated(tau_s | omega) ),

and the effect on the terminal endpoint is the survival difference at tau_t,

    dt_i = P(T_treated > tau_t | omega) - P(T_control > tau_t | omega),

each conditional on that subject's frailties in both counterfactual arms.
Frailties for the unobserved arm are drawn from the conditional normal
N(rho * omega_observed, scale^2 * (1 - rho^2)); ``scale`` is the marginal
frailty sd by default, or 1 under the unit-variance convention. An ordinary
least squares line through the (ds_i, dt_i) cloud summarizes predictiveness:
a useful surrogate has intercept near zero and positive slope, with a
treatment effect on the intermediate endpoint (nonzero mean ds).

Chain-based clouds are recomputed at every retained MCMC iteration and
averaged; truth clouds are computed once from generating parameters.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .data import DataError, TrialData
from .mcmc import ArmParams, FitResult
from .models import (EQUAL_13_23, FULL_SIX, INDEPENDENT_THREE,
                     ArmModel, DomainError, FrailtyConfig, FrailtySet,
                     QuadratureConfig, cum_hazard, survival_probs)


@dataclass(frozen=True)
class CepConfig:
    """Landmark times, cross-arm correlations, and draw conventions."""

    tau_s: float = 1.0
    tau_t: float = 5.0
    rho_s: float = 0.5
    rho_t: float = 0.5
    sigma_omega: float = 0.4
    quad: QuadratureConfig = field(default_factory=QuadratureConfig)
    unit_variance_conditional: bool = False

    def __post_init__(self):
        if not (0 < self.tau_s < self.tau_t):
            raise DomainError("need 0 < tau_s < tau_t")
        if abs(self.rho_s) > 1 or abs(self.rho_t) > 1:
            raise DomainError("|rho| must be <= 1")
        if not (self.sigma_omega > 0):
            raise DomainError("sigma_omega must be > 0")

    @property
    def conditional_scale(self):
        return 1.0 if self.unit_variance_conditional else self.sigma_omega

    def frailty_law(self):
        """Cross-arm joint law implied by these settings (equal-frailty structure)."""
        return FrailtyConfig(structure=EQUAL_13_23, sigma_omega=self.sigma_omega,
                             rho_s=self.rho_s, rho_t=self.rho_t)


def draw_counterfactual_frailty(omega_obs, rho, sigma, rng):
    """Draw from N(rho * omega_obs, sigma^2 (1 - rho^2)); exact copy at rho=1."""
    if abs(rho) > 1:
        raise DomainError("|rho| must be <= 1")
    omega_obs = np.asarray(omega_obs, float)
    sd = sigma * np.sqrt(max(1.0 - rho * rho, 0.0))
    out = rho * omega_obs + sd * rng.standard_normal(omega_obs.shape)
    return float(out) if out.ndim == 0 else out


def delta_s_values(control: ArmModel, treated: ArmModel, w12_control, w12_treated, tau_s):
    """Vectorized log cumulative-hazard ratio for the 1->2 transition."""
    p0, p1 = control.t12, treated.t12
    if p0.gamma <= 0 or p1.gamma <= 0:
        raise DomainError("delta_s undefined when a 1->2 scale is zero")
    return (np.log(p0.gamma / p1.gamma)
            + (p0.alpha - p1.alpha) * np.log(tau_s)
            + p0.kappa * np.asarray(w12_control, float)
            - p1.kappa * np.asarray(w12_treated, float))


def delta_s(control: ArmModel, control_frailty: FrailtySet,
            treated: ArmModel, treated_frailty: FrailtySet, tau_s):
    """Per-subject treatment effect on the intermediate endpoint."""
    return float(delta_s_values(control, treated,
                                control_frailty.omega12, treated_frailty.omega12, tau_s))


def delta_t(control: ArmModel, control_frailty: FrailtySet,
            treated: ArmModel, treated_frailty: FrailtySet, tau_t,
            quad: QuadratureConfig = QuadratureConfig()):
    """Per-subject treatment effect on terminal-event survival at tau_t."""
    s1 = survival_probs(treated, treated_frailty.omega12, treated_frailty.omega13,
                        treated_frailty.omega23_value, tau_t, quad)
    s0 = survival_probs(control, control_frailty.omega12, control_frailty.omega13,
                        control_frailty.omega23_value, tau_t, quad)
    return float(s1[0] - s0[0])


class LineFit(NamedTuple):
    gamma0: float
    gamma1: float
    se0: float
    se1: float


def fit_line(points) -> LineFit:
    """Ordinary least squares line through a (ds, dt) cloud.

    Rejects clouds with fewer than two points or (numerically) zero variance
    in ds, where the slope is undefined.
    """
    pts = np.asarray(points, float)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 2:
        raise DomainError("fit_line needs >= 2 (ds, dt) points")
    x, y = pts[:, 0], pts[:, 1]
    xbar, ybar = x.mean(), y.mean()
    sxx = np.sum((x - xbar) ** 2)
    scale = max(np.abs(x).max(), 1.0)
    if sxx <= (1e-12 * scale) ** 2 * len(x):
        raise DomainError("degenerate cloud: ds has (numerically) zero variance")
    g1 = np.sum((x - xbar) * (y - ybar)) / sxx
    g0 = ybar - g1 * xbar
    n = len(x)
    resid = y - (g0 + g1 * x)
    s2 = np.sum(resid ** 2) / max(n - 2, 1)
    se1 = np.sqrt(s2 / sxx)
    se0 = np.sqrt(s2 * (1.0 / n + xbar ** 2 / sxx))
    return LineFit(float(g0), float(g1), float(se0), float(se1))


@dataclass
class CepResult:
    """Cloud, per-iteration lines, and summary of a CEP computation."""

    ids: np.ndarray
    ds: np.ndarray
    dt: np.ndarray
    lines: np.ndarray            # (n_lines, 2) columns (gamma0, gamma1)
    summary: dict
    config: dict

    def to_dict(self, max_points=None):
        ids, ds, dt = self.ids, self.ds, self.dt
        if max_points is not None and len(ids) > max_points:
            keep = thin_by_rank(ds, max_points)
            ids, ds, dt = ids[keep], ds[keep], dt[keep]
        return {
            "config": self.config,
            "points": [{"id": int(i), "ds": float(a), "dt": float(b)}
                       for i, a, b in zip(ids, ds, dt)],
            "lines": [{"iter": int(k), "g0": float(g0), "g1": float(g1)}
                      for k, (g0, g1) in enumerate(self.lines)],
            "summary": self.summary,
        }


def thin_by_rank(ds, max_points):
    """Deterministic stratified thinning by ds rank; keeps extremes and spread."""
    n = len(ds)
    order = np.argsort(ds, kind="stable")
    pick = np.unique(np.linspace(0, n - 1, max_points).round().astype(int))
    return np.sort(order[pick])


def _summary_from_lines(lines, ds_mean, dt_mean):
    g0, g1 = lines[:, 0], lines[:, 1]
    return {
        "g0_mean": float(g0.mean()), "g0_lo": float(np.quantile(g0, 0.025)),
        "g0_hi": float(np.quantile(g0, 0.975)),
        "g1_mean": float(g1.mean()), "g1_lo": float(np.quantile(g1, 0.025)),
        "g1_hi": float(np.quantile(g1, 0.975)),
        "mean_ds": float(ds_mean), "mean_dt": float(dt_mean),
    }


# ---------------------------------------------------------------------------
# chain-based CEP
# ---------------------------------------------------------------------------

def _conditional_six(corr6, obs_idx, cf_idx, W_obs, scale, rng):
    """Draw the three counterfactual frailties given the observed triple."""
    C_oo = corr6[np.ix_(obs_idx, obs_idx)]
    C_co = corr6[np.ix_(cf_idx, obs_idx)]
    C_cc = corr6[np.ix_(cf_idx, cf_idx)]
    A = C_co @ np.linalg.inv(C_oo)
    cond = (C_cc - A @ C_co.T) * scale ** 2
    # W_obs rows are (w12, w13, w23); conditional mean is scale-free
    mean = W_obs @ A.T
    L = np.linalg.cholesky(cond + 1e-12 * np.eye(3))
    return mean + rng.standard_normal(W_obs.shape) @ L.T


def cep_from_chain(fit_result: FitResult, dataset: TrialData, config: CepConfig,
                   seed=0, frailty: FrailtyConfig | None = None,
                   keep_iteration_points=False) -> CepResult:
    """CEP cloud and line from fitted chains, one evaluation per retained iteration.

    For each subject, the observed-arm frailties come from that arm's chain;
    counterfactual frailties are drawn from their conditional normal given the
    configured cross-arm correlations. The pooled (ds, dt) cloud over both
    arms is fitted by OLS per iteration; reported points are per-subject
    posterior means.
    """
    structure = fit_result.sampler.structure
    if frailty is None and structure == FULL_SIX:
        frailty = fit_result.sampler.frailty
    chains = fit_result.arms
    arm_rows = {z: dataset.arm(z) for z in (0, 1)}
    for z in (0, 1):
        if chains[z].omega12.shape[1] != len(arm_rows[z]):
            raise DataError(f"chain frailties for arm {z} do not match dataset subject count")
        if not np.array_equal(chains[z].subject_ids, arm_rows[z].ids):
            raise DataError(f"chain subject ids for arm {z} do not match dataset")
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))

    n_ret = chains[0].n_iterations - chains[0].burn_in
    ids = np.concatenate([arm_rows[0].ids, arm_rows[1].ids])
    n_all = len(ids)
    ds_acc = np.zeros(n_all)
    dt_acc = np.zeros(n_all)
    lines = np.empty((n_ret, 2))
    it_points = [] if keep_iteration_points else None
    scale = config.conditional_scale
    rho_st = frailty.rho_st_value if frailty is not None else config.rho_t

    params = {z: {k: chains[z].retained(k) for k in chains[z].params} for z in (0, 1)}
    omegas = {z: {w: chains[z].retained_omega(w) for w in ("omega12", "omega13", "omega23")}
              for z in (0, 1)}

    for p in range(n_ret):
        models = {z: ArmParams(**{k: params[z][k][p] for k in params[z]}).to_arm_model()
                  for z in (0, 1)}
        ds_it, dt_it = [], []
        for z in (0, 1):
            other = 1 - z
            w12_o = omegas[z]["omega12"][p]
            w13_o = omegas[z]["omega13"][p]
            m = len(w12_o)
            if structure == EQUAL_13_23:
                w23_o = w13_o
            else:
                w23_o = omegas[z]["omega23"][p].copy()
                missing = np.isnan(w23_o)
                if missing.any():
                    w23_o[missing] = config.sigma_omega * rng.standard_normal(missing.sum())
            if structure == FULL_SIX:
                obs_idx = [0, 2, 4] if z == 0 else [1, 3, 5]
                cf_idx = [1, 3, 5] if z == 0 else [0, 2, 4]
                W_cf = _conditional_six(frailty.full_corr, obs_idx, cf_idx,
                                        np.column_stack([w12_o, w13_o, w23_o]), scale, rng)
                w12_c, w13_c, w23_c = W_cf[:, 0], W_cf[:, 1], W_cf[:, 2]
            else:
                w12_c = draw_counterfactual_frailty(w12_o, config.rho_s, scale, rng)
                w13_c = draw_counterfactual_frailty(w13_o, config.rho_t, scale, rng)
                if structure == EQUAL_13_23:
                    w23_c = w13_c
                else:
                    w23_c = draw_counterfactual_frailty(w23_o, rho_st, scale, rng)
            if z == 0:
                w_ctl = (w12_o, w13_o, w23_o)
                w_trt = (w12_c, w13_c, w23_c)
            else:
                w_ctl = (w12_c, w13_c, w23_c)
                w_trt = (w12_o, w13_o, w23_o)
            ds_z = delta_s_values(models[0], models[1], w_ctl[0], w_trt[0], config.tau_s)
            dt_z = (survival_probs(models[1], *w_trt, config.tau_t, config.quad)
                    - survival_probs(models[0], *w_ctl, config.tau_t, config.quad))
            ds_it.append(ds_z)
            dt_it.append(dt_z)
        ds_it = np.concatenate(ds_it)
        dt_it = np.concatenate(dt_it)
        line = fit_line(np.column_stack([ds_it, dt_it]))
        lines[p] = (line.gamma0, line.gamma1)
        ds_acc += ds_it
        dt_acc += dt_it
        if it_points is not None:
            it_points.append((ds_it.copy(), dt_it.copy()))

    ds_mean = ds_acc / n_ret
    dt_mean = dt_acc / n_ret
    result = CepResult(
        ids=ids, ds=ds_mean, dt=dt_mean, lines=lines,
        summary=_summary_from_lines(lines, ds_mean.mean(), dt_mean.mean()),
        config={"tau_s": config.tau_s, "tau_t": config.tau_t, "rho_s": config.rho_s,
                "rho_t": config.rho_t, "sigma_omega": config.sigma_omega,
                "unit_variance_conditional": config.unit_variance_conditional,
                "structure": structure, "iterations": int(n_ret), "seed": seed,
                "source": "chain"},
    )
    if it_points is not None:
        result.iteration_points = it_points
    return result


# ---------------------------------------------------------------------------
# truth CEP
# ---------------------------------------------------------------------------

def truth_cep(control: ArmModel, treated: ArmModel, config: CepConfig,
              n_draws=200_000, seed=0, frailty: FrailtyConfig | None = None,
              chunk=50_000) -> CepResult:
    """CEP cloud and OLS line computed from generating parameters.

    Frailty four-tuples (or six-tuples under richer structures) are drawn from
    the cross-arm joint law; the reported confidence band is the OLS
    large-sample interval, which covers Monte-Carlo noise of the cloud.
    """
    from .simulate import draw_frailties

    if n_draws < 1000:
        raise DomainError("n_draws must be >= 1000")
    if frailty is None:
        frailty = config.frailty_law()
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    draws = draw_frailties(frailty, n_draws, rng)

    ds = delta_s_values(control, treated, draws.omega12[:, 0], draws.omega12[:, 1], config.tau_s)
    dt = np.empty(n_draws)
    for lo in range(0, n_draws, chunk):
        sl = slice(lo, min(lo + chunk, n_draws))
        s1 = survival_probs(treated, draws.omega12[sl, 1], draws.omega13[sl, 1],
                            draws.omega23[sl, 1], config.tau_t, config.quad)
        s0 = survival_probs(control, draws.omega12[sl, 0], draws.omega13[sl, 0],
                            draws.omega23[sl, 0], config.tau_t, config.quad)
        dt[sl] = s1 - s0
    line = fit_line(np.column_stack([ds, dt]))
    summary = {
        "g0_mean": line.gamma0, "g0_lo": line.gamma0 - 1.96 * line.se0,
        "g0_hi": line.gamma0 + 1.96 * line.se0,
        "g1_mean": line.gamma1, "g1_lo": line.gamma1 - 1.96 * line.se1,
        "g1_hi": line.gamma1 + 1.96 * line.se1,
        "mean_ds": float(ds.mean()), "mean_dt": float(dt.mean()),
    }
    return CepResult(
        ids=np.arange(n_draws), ds=ds, dt=dt,
        lines=np.array([[line.gamma0, line.gamma1]]),
        summary=summary,
        config={"tau_s": config.tau_s, "tau_t": config.tau_t,
                "rho_s": frailty.rho_s, "rho_t": frailty.rho_t,
                "sigma_omega": frailty.sigma_omega, "structure": frailty.structure,
                "n_draws": int(n_draws), "seed": seed, "source": "truth"},
    )


def sensitivity_sweep(control: ArmModel, treated: ArmModel, config: CepConfig,
                      rho_s_grid, rho_t_grid, structures=(EQUAL_13_23,),
                      full_corrs=None, n_draws=50_000, seed=0):
    """Truth-CEP over a correlation/structure grid, same seed per point.

    ``full_corrs`` maps the ``full_six`` structure name to a 6x6 correlation
    builder taking (rho_s, rho_t); non-PSD grid points are skipped with a
    warning. Returns one summary row per evaluated grid point.
    """
    rows = []
    for structure in structures:
        for rs in rho_s_grid:
            for rt in rho_t_grid:
                try:
                    if structure == FULL_SIX:
                        corr = full_corrs(rs, rt) if callable(full_corrs) else full_corrs
                        law = FrailtyConfig(structure=FULL_SIX, sigma_omega=config.sigma_omega,
                                            rho_s=rs, rho_t=rt, full_corr=corr)
                    else:
                        law = FrailtyConfig(structure=structure, sigma_omega=config.sigma_omega,
                                            rho_s=rs, rho_t=rt)
                except DomainError as e:
                    warnings.warn(f"skipping grid point ({structure}, {rs}, {rt}): {e}")
                    continue
                res = truth_cep(control, treated, config, n_draws=n_draws, seed=seed, frailty=law)
                rows.append({"structure": structure, "rho_s": float(rs), "rho_t": float(rt),
                             **{k: res.summary[k] for k in
                                ("g0_mean", "g1_mean", "mean_ds", "mean_dt")}})
    return rows
