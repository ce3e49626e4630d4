"""Simulation of counterfactual illness-death trial data.

Latent gap times for 1->2 and 1->3 are drawn by inverse transform,
T = (-log U / rate)**(1/alpha) with rate = gamma * exp(frailty link). The
smaller of the two decides the path: direct death, or illness at T12 followed
by a 2->3 gap drawn with the clock reset (and entry-time link under variant
A). Censoring (administrative and/or exponential) is applied last.

Reproducibility: the master seed spawns one named substream per purpose
(frailties, arm-0 paths, arm-1 paths); within a stream, arrays are drawn in a
single documented order, so results do not depend on any iteration order and a
fixed seed yields byte-identical CSV output.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .data import TrialData
from .models import (MODEL_A, EQUAL_13_23, INDEPENDENT_THREE, FULL_SIX,
                     ArmModel, DomainError, FrailtyConfig)

# Treated-arm Weibull scales (1->2, 1->3, 2->3) per scenario; the control arm
# is (1, 0.5, 1) in every scenario, all shapes 1, entry-time coefficient 0.
CONTROL_SCALES = (1.0, 0.5, 1.0)
SCENARIO_TREATED_SCALES = {
    1: (1.0, 0.5, 1.0),
    2: (0.61, 0.5, 1.0),
    3: (0.61, 0.5, 0.61),
    4: (0.61, 0.31, 1.0),
    5: (0.61, 0.31, 0.61),
    6: (1.0, 0.31, 0.61),
    7: (1.0, 0.5, 0.61),
    8: (1.0, 0.31, 1.0),
}
SCENARIO_LABELS = {
    1: "null case", 2: "perfect surrogate", 3: "partial surrogate",
    4: "partial surrogate", 5: "partial surrogate", 6: "not a surrogate",
    7: "not a surrogate", 8: "not a surrogate",
}


def scenario_arms(scenario_id):
    """(control, treated) ArmModel presets for one of the eight scenarios."""
    if scenario_id not in SCENARIO_TREATED_SCALES:
        raise DomainError(f"scenario_id must be 1..8, got {scenario_id}")
    control = ArmModel.from_scales(*CONTROL_SCALES)
    treated = ArmModel.from_scales(*SCENARIO_TREATED_SCALES[scenario_id])
    return control, treated


@dataclass(frozen=True)
class CensoringConfig:
    """Administrative cut time and/or exponential random censoring rate."""

    admin_time: float | None = 10.0
    random_rate: float = 0.0

    def __post_init__(self):
        if self.admin_time is not None and not (self.admin_time > 0):
            raise DomainError("admin_time must be > 0 or None")
        if self.random_rate < 0:
            raise DomainError("random_rate must be >= 0")
        if self.admin_time is None and self.random_rate == 0:
            raise DomainError("at least one censoring mechanism must be active")


@dataclass(frozen=True)
class ScenarioSpec:
    """Full description of one simulated trial."""

    scenario_id: int = 2
    n: int = 600
    frailty: FrailtyConfig = field(default_factory=FrailtyConfig)
    censoring: CensoringConfig = field(default_factory=CensoringConfig)
    seed: int = 0
    control: ArmModel | None = None
    treated: ArmModel | None = None

    def arms(self):
        control, treated = scenario_arms(self.scenario_id)
        return (self.control or control, self.treated or treated)

    def with_seed(self, seed):
        return replace(self, seed=seed)


@dataclass
class FrailtyDraws:
    """Per-subject frailties for both counterfactual arms, shape (n, 2)."""

    omega12: np.ndarray
    omega13: np.ndarray
    omega23: np.ndarray

    def arm(self, z):
        return self.omega12[:, z], self.omega13[:, z], self.omega23[:, z]


def _correlated_pair(rng, sigma, rho, n):
    """Cross-arm pair with marginal sd sigma and correlation rho (exact at rho=+-1)."""
    z = rng.standard_normal((n, 2))
    w0 = sigma * z[:, 0]
    w1 = sigma * (rho * z[:, 0] + np.sqrt(max(1.0 - rho * rho, 0.0)) * z[:, 1])
    return np.column_stack([w0, w1])


def draw_frailties(config: FrailtyConfig, n, rng) -> FrailtyDraws:
    """Draw n subjects' frailty sets for both arms under the configured law."""
    if config.structure == FULL_SIX:
        cov = config.sigma_omega ** 2 * config.full_corr
        w = rng.multivariate_normal(np.zeros(6), cov, size=n, method="svd")
        return FrailtyDraws(w[:, 0:2], w[:, 2:4], w[:, 4:6])
    w12 = _correlated_pair(rng, config.sigma_omega, config.rho_s, n)
    w13 = _correlated_pair(rng, config.sigma_omega, config.rho_t, n)
    if config.structure == EQUAL_13_23:
        return FrailtyDraws(w12, w13, w13)
    w23 = _correlated_pair(rng, config.sigma_omega, config.rho_st_value, n)
    return FrailtyDraws(w12, w13, w23)


def _inverse_weibull(u, rate, alpha):
    """Quantile-transform uniforms to Weibull(alpha, rate) gap times."""
    with np.errstate(divide="ignore"):
        return (-np.log(u) / rate) ** (1.0 / alpha)


def simulate_arm(arm: ArmModel, omega12, omega13, omega23, censoring: CensoringConfig, rng):
    """Simulate observed + latent columns for subjects assigned to one arm.

    Draw order within the stream: U(1->2), U(1->3), U(2->3 gap), U(censoring).
    """
    omega12 = np.asarray(omega12, float)
    omega13 = np.asarray(omega13, float)
    omega23 = np.asarray(omega23, float)
    n = len(omega12)
    p12, p13, p23 = arm.t12, arm.t13, arm.t23

    u12, u13, ugap, ucens = (rng.uniform(size=n) for _ in range(4))
    t12_lat = _inverse_weibull(u12, p12.gamma * np.exp(p12.kappa * omega12), p12.alpha)
    t13_lat = _inverse_weibull(u13, p13.gamma * np.exp(p13.kappa * omega13), p13.alpha)
    illness = t12_lat < t13_lat
    if arm.variant == MODEL_A:
        lp23 = p23.kappa * omega23 + p23.theta * t12_lat
    else:
        lp23 = p23.kappa12_star * omega12 + p23.kappa13_star * omega13
    gap_lat = _inverse_weibull(ugap, p23.gamma * np.exp(lp23), p23.alpha)
    death_lat = np.where(illness, t12_lat + gap_lat, t13_lat)

    cens = np.full(n, np.inf)
    if censoring.admin_time is not None:
        cens = np.minimum(cens, censoring.admin_time)
    if censoring.random_rate > 0:
        cens = np.minimum(cens, -np.log(ucens) / censoring.random_rate)

    s_event = illness & (t12_lat < cens)
    t_event = death_lat < cens
    t_time = np.where(t_event, death_lat, cens)
    s_time = np.where(s_event, t12_lat, t_time)
    return {
        "s_time": s_time, "s_event": s_event.astype(np.int64),
        "t_time": t_time, "t_event": t_event.astype(np.int64),
        "latent_t12": t12_lat, "latent_t13": t13_lat, "latent_gap": gap_lat,
    }


def simulate_trial(spec: ScenarioSpec, complete=False) -> TrialData:
    """Simulate a full two-arm trial; n/2 subjects per arm.

    With ``complete=True`` the latent event times and both arms' frailties are
    kept in ``extra`` columns (latent_* / omega_*); otherwise only the observed
    schema is populated.
    """
    control, treated = spec.arms()
    half = spec.n // 2
    ss = np.random.SeedSequence(spec.seed)
    frailty_ss, arm0_ss, arm1_ss = ss.spawn(3)
    frailties = draw_frailties(spec.frailty, spec.n, np.random.Generator(np.random.Philox(frailty_ss)))

    cols0 = simulate_arm(control, frailties.omega12[:half, 0], frailties.omega13[:half, 0],
                         frailties.omega23[:half, 0], spec.censoring,
                         np.random.Generator(np.random.Philox(arm0_ss)))
    cols1 = simulate_arm(treated, frailties.omega12[half:, 1], frailties.omega13[half:, 1],
                         frailties.omega23[half:, 1], spec.censoring,
                         np.random.Generator(np.random.Philox(arm1_ss)))

    merged = {k: np.concatenate([cols0[k], cols1[k]]) for k in cols0}
    extra = {}
    if complete:
        extra = {k: merged[k] for k in ("latent_t12", "latent_t13", "latent_gap")}
        extra.update({
            "omega_12_0": frailties.omega12[:, 0], "omega_12_1": frailties.omega12[:, 1],
            "omega_13_0": frailties.omega13[:, 0], "omega_13_1": frailties.omega13[:, 1],
            "omega_23_0": frailties.omega23[:, 0], "omega_23_1": frailties.omega23[:, 1],
        })
    return TrialData(
        ids=np.arange(spec.n), z=np.repeat([0, 1], [half, spec.n - half]),
        s_time=merged["s_time"], s_event=merged["s_event"],
        t_time=merged["t_time"], t_event=merged["t_event"], extra=extra,
    )


def transition_counts(data: TrialData):
    """Events per arrow of the two illness-death diagrams: counts keyed by (z, '12'|'13'|'23')."""
    out = {}
    for z in (0, 1):
        arm = data.arm(z)
        out[(z, "12")] = int(arm.s_event.sum())
        out[(z, "13")] = int(((arm.s_event == 0) & (arm.t_event == 1)).sum())
        out[(z, "23")] = int(((arm.s_event == 1) & (arm.t_event == 1)).sum())
    return out
