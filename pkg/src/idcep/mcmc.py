"""Observed-data likelihood, priors, and block Metropolis-Hastings sampler.

Each arm is fitted separately on its observed-data likelihood (variant A,
Weibull baselines). Per-subject contributions, conditional on frailties:

  no intermediate event (s_event=0, both gap times censored at t):
      dt * log lam13(t) - L13(t) - L12(t)
  intermediate event at s with gap g = t - s:
      log lam12(s) - L12(s) - L13(s) + dt * log lam23(g | s) - L23(g | s)

Sampling uses symmetric Gaussian random-walk proposals accepted with
probability min(1, posterior ratio). Updates are grouped into the blocks
{omega12 per subject}; {gamma12, alpha12}; {omega13 per subject};
{gamma13, alpha13}; {gamma23, alpha23, theta23 [, kappa23]} for each arm,
with per-subject frailty proposals accepted independently (they touch
disjoint likelihood terms given fixed structural parameters).

Priors: Gamma(shape, rate) on each Weibull scale and shape, diffuse normal on
theta/kappa coefficients, N(0, sd^2) on frailties (correlated within arm under
the full-correlation structure).
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import minimize
from scipy.special import gammaln

from .data import DataError, SubjectRecord, TrialData
from .models import (MODEL_A, EQUAL_13_23, FULL_SIX, INDEPENDENT_THREE,
                     ArmModel, DomainError, FrailtyConfig, FrailtySet, TransitionParams)


class TuningWarning(UserWarning):
    """A Metropolis block's acceptance rate left the healthy range."""


class DegenerateDataWarning(UserWarning):
    """A transition has no observed events; its parameters are prior-dominated."""


@dataclass(frozen=True)
class PriorConfig:
    """Hyperparameters: Gamma(shape, rate) for Weibull scale/shape, normal sds for the rest."""

    gamma_shape: float = 0.1
    gamma_rate: float = 0.1
    alpha_shape: float = 0.1
    alpha_rate: float = 0.1
    coef_prior_sd: float = 10.0
    frailty_prior_sd: float = 0.4

    def __post_init__(self):
        for name in ("gamma_shape", "gamma_rate", "alpha_shape", "alpha_rate",
                     "coef_prior_sd", "frailty_prior_sd"):
            if not (getattr(self, name) > 0):
                raise DomainError(f"{name} must be > 0")


@dataclass(frozen=True)
class SamplerConfig:
    iterations: int = 3000
    burn_in: int = 900
    proposal_sd_params: float = 0.1
    proposal_sd_frailty: float = 0.4
    fix_kappa_to_one: bool = True
    fix_alpha_to_one: bool = False
    structure: str = EQUAL_13_23
    frailty: FrailtyConfig | None = None   # within-arm prior correlations for full_six
    adapt_during_burnin: bool = False
    seed: int = 0

    def __post_init__(self):
        if not (0 <= self.burn_in < self.iterations):
            raise DomainError("need 0 <= burn_in < iterations")
        if self.structure == FULL_SIX and self.frailty is None:
            raise DomainError("full_six fitting needs a FrailtyConfig with full_corr")


def gamma_logpdf(x, shape, rate):
    """Log density of Gamma in the shape/rate parameterization."""
    x = np.asarray(x, float)
    return shape * np.log(rate) + (shape - 1) * np.log(x) - rate * x - gammaln(shape)


def normal_logpdf(x, sd):
    x = np.asarray(x, float)
    return -0.5 * np.log(2 * np.pi * sd * sd) - 0.5 * (x / sd) ** 2


def metropolis_step(current, log_post, propose, rng):
    """One symmetric-proposal Metropolis step; returns (state, accepted)."""
    proposal = propose(current, rng)
    diff = log_post(proposal) - log_post(current)
    if np.log(rng.uniform()) < diff:
        return proposal, True
    return current, False


# ---------------------------------------------------------------------------
# likelihood
# ---------------------------------------------------------------------------

@dataclass
class ArmParams:
    """Structural parameters of one arm during sampling (variant A)."""

    gamma12: float = 1.0
    alpha12: float = 1.0
    gamma13: float = 1.0
    alpha13: float = 1.0
    gamma23: float = 1.0
    alpha23: float = 1.0
    theta23: float = 0.0
    kappa23: float = 1.0

    def as_dict(self):
        return dict(gamma12=self.gamma12, alpha12=self.alpha12, gamma13=self.gamma13,
                    alpha13=self.alpha13, gamma23=self.gamma23, alpha23=self.alpha23,
                    theta23=self.theta23, kappa23=self.kappa23)

    def to_arm_model(self):
        return ArmModel(
            t12=TransitionParams(alpha=self.alpha12, gamma=self.gamma12),
            t13=TransitionParams(alpha=self.alpha13, gamma=self.gamma13),
            t23=TransitionParams(alpha=self.alpha23, gamma=self.gamma23,
                                 kappa=self.kappa23, theta=self.theta23),
            variant=MODEL_A,
        )

    def valid(self):
        return self.gamma12 > 0 and self.alpha12 > 0 and self.gamma13 > 0 and \
            self.alpha13 > 0 and self.gamma23 > 0 and self.alpha23 > 0


class _ArmData:
    """Preprocessed per-arm columns for fast likelihood evaluation."""

    def __init__(self, trial_arm: TrialData, allow_no_events=False):
        self.ids = trial_arm.ids
        self.s = trial_arm.s_time
        self.ds = trial_arm.s_event.astype(bool)
        self.t = trial_arm.t_time
        self.dt = trial_arm.t_event.astype(bool)
        self.gap = np.where(self.ds, self.t - self.s, np.nan)
        self.n = len(self.s)
        if np.any(self.t[self.dt] <= 0) or np.any(self.s[self.ds] <= 0):
            raise DataError("event times must be strictly positive")
        if np.any(self.gap[self.ds & self.dt] <= 0):
            raise DataError("zero 2->3 gap with an observed terminal event (infinite hazard)")
        if not allow_no_events and not self.ds.any() and not self.dt.any():
            raise DataError("arm is fully censored; nothing to fit "
                            "(pass allow_no_events=True to sample the prior)")

    def transition_event_counts(self):
        return {"12": int(self.ds.sum()),
                "13": int((~self.ds & self.dt).sum()),
                "23": int((self.ds & self.dt).sum())}


def loglik_vector(d: _ArmData, p: ArmParams, w12, w13, w23):
    """Per-subject observed-data log-likelihood contributions for one arm."""
    ll = np.empty(d.n)
    m = ~d.ds
    if m.any():
        tt = d.t[m]
        with np.errstate(divide="ignore", invalid="ignore"):
            log_lam13 = (np.log(p.gamma13 * p.alpha13)
                         + (p.alpha13 - 1) * np.log(tt) + w13[m])
        ll[m] = (np.where(d.dt[m], log_lam13, 0.0)
                 - p.gamma13 * tt ** p.alpha13 * np.exp(w13[m])
                 - p.gamma12 * tt ** p.alpha12 * np.exp(w12[m]))
    m = d.ds
    if m.any():
        ss, gg = d.s[m], d.gap[m]
        log_lam12 = np.log(p.gamma12 * p.alpha12) + (p.alpha12 - 1) * np.log(ss) + w12[m]
        lp23 = p.kappa23 * w23[m] + p.theta23 * ss
        with np.errstate(divide="ignore", invalid="ignore"):
            log_lam23 = np.log(p.gamma23 * p.alpha23) + (p.alpha23 - 1) * np.log(gg) + lp23
        ll[m] = (log_lam12
                 - p.gamma12 * ss ** p.alpha12 * np.exp(w12[m])
                 - p.gamma13 * ss ** p.alpha13 * np.exp(w13[m])
                 + np.where(d.dt[m], log_lam23, 0.0)
                 - p.gamma23 * gg ** p.alpha23 * np.exp(lp23))
    return ll


def log_lik_subject(record: SubjectRecord, arm: ArmModel, frailty: FrailtySet):
    """Observed-data log-likelihood of one subject under variant A."""
    if arm.variant != MODEL_A:
        raise DomainError("subject likelihood implemented for variant A")
    data = TrialData(np.array([record.id]), np.array([record.z]),
                     np.array([record.s_time]), np.array([record.s_event]),
                     np.array([record.t_time]), np.array([record.t_event]))
    p = ArmParams(gamma12=arm.t12.gamma, alpha12=arm.t12.alpha,
                  gamma13=arm.t13.gamma, alpha13=arm.t13.alpha,
                  gamma23=arm.t23.gamma, alpha23=arm.t23.alpha,
                  theta23=arm.t23.theta, kappa23=arm.t23.kappa)
    w12 = np.array([arm.t12.kappa * frailty.omega12])
    w13 = np.array([arm.t13.kappa * frailty.omega13])
    w23 = np.array([frailty.omega23_value])
    return float(loglik_vector(_ArmData(data, allow_no_events=True), p, w12, w13, w23)[0])


BLOCKS = ("block12", "block13", "block23")
_BLOCK_MEMBERS = {
    "block12": ("gamma12", "alpha12"),
    "block13": ("gamma13", "alpha13"),
    "block23": ("gamma23", "alpha23", "theta23", "kappa23"),
}


def _block_members(block, cfg: SamplerConfig):
    members = [m for m in _BLOCK_MEMBERS[block]]
    if cfg.fix_alpha_to_one:
        members = [m for m in members if not m.startswith("alpha")]
    if cfg.fix_kappa_to_one:
        members = [m for m in members if not m.startswith("kappa")]
    return tuple(members)


def _block_log_prior(p: ArmParams, block, cfg: SamplerConfig, priors: PriorConfig):
    lp = 0.0
    for m in _block_members(block, cfg):
        v = getattr(p, m)
        if m.startswith("gamma"):
            lp += float(gamma_logpdf(v, priors.gamma_shape, priors.gamma_rate))
        elif m.startswith("alpha"):
            lp += float(gamma_logpdf(v, priors.alpha_shape, priors.alpha_rate))
        else:
            lp += float(normal_logpdf(v, priors.coef_prior_sd))
    return lp


def log_posterior_block(d: _ArmData, p: ArmParams, w12, w13, w23, block,
                        cfg: SamplerConfig, priors: PriorConfig):
    """Unnormalized block log-posterior: full likelihood sum plus block-member priors.

    Terms not involving the block cancel in Metropolis ratios, so differences
    of this quantity equal full-posterior differences. Returns -inf outside
    the support (nonpositive scale or shape).
    """
    if not p.valid():
        return -np.inf
    return float(loglik_vector(d, p, w12, w13, w23).sum()) + _block_log_prior(p, block, cfg, priors)


def theta_init_from_regression(d: _ArmData):
    """Starting value for the entry-time coefficient: slope of an exponential
    regression of the 2->3 gap hazard on illness entry time."""
    m = d.ds
    if m.sum() < 3 or d.dt[m].sum() < 2:
        return 0.0
    s, g, dt = d.s[m], d.gap[m], d.dt[m].astype(float)

    def negll(b):
        lp = b[0] + b[1] * s
        return -(np.sum(dt * lp) - np.sum(g * np.exp(lp)))

    def grad(b):
        lp = b[0] + b[1] * s
        r = dt - g * np.exp(lp)
        return -np.array([r.sum(), (r * s).sum()])

    x0 = np.array([np.log(max(dt.sum(), 1.0) / g.sum()), 0.0])
    res = minimize(negll, x0, jac=grad, method="BFGS")
    return float(res.x[1]) if res.success or res.fun < negll(x0) else 0.0


# ---------------------------------------------------------------------------
# chains
# ---------------------------------------------------------------------------

@dataclass
class ChainDraws:
    """All iterations of one arm's chain plus acceptance bookkeeping."""

    arm: int
    subject_ids: np.ndarray
    params: dict[str, np.ndarray]
    omega12: np.ndarray
    omega13: np.ndarray
    omega23: np.ndarray | None
    burn_in: int
    acceptance: dict[str, float]
    config: SamplerConfig = field(repr=False, default=None)

    @property
    def n_iterations(self):
        return len(next(iter(self.params.values())))

    def retained(self, key):
        return self.params[key][self.burn_in:]

    def retained_omega(self, which):
        arr = {"omega12": self.omega12, "omega13": self.omega13, "omega23": self.omega23}[which]
        return None if arr is None else arr[self.burn_in:]

    def summary(self):
        out = {}
        for k in self.params:
            x = self.retained(k)
            out[k] = {"mean": float(x.mean()), "sd": float(x.std(ddof=1)),
                      "q025": float(np.quantile(x, 0.025)), "q975": float(np.quantile(x, 0.975))}
        return out


class _ArmSampler:
    """Sequential block-MH chain for one arm."""

    def __init__(self, d: _ArmData, arm_z, cfg: SamplerConfig, priors: PriorConfig, seed_seq):
        self.d = d
        self.arm_z = arm_z
        self.cfg = cfg
        self.priors = priors
        self.rng = np.random.Generator(np.random.Philox(seed_seq))
        self.p = ArmParams(theta23=theta_init_from_regression(d))
        self.w12 = np.zeros(d.n)
        self.w13 = np.zeros(d.n)
        self.separate_w23 = cfg.structure in (INDEPENDENT_THREE, FULL_SIX)
        self.w23 = np.zeros(d.n) if self.separate_w23 else None
        if cfg.structure == FULL_SIX:
            corr = cfg.frailty.full_corr
            idx = [0, 2, 4] if arm_z == 0 else [1, 3, 5]
            self.prior_corr3 = corr[np.ix_(idx, idx)]
            self.prior_prec3 = np.linalg.inv(self.prior_corr3 * priors.frailty_prior_sd ** 2)
        self._param_sds = {b: cfg.proposal_sd_params for b in BLOCKS}
        self._frailty_sd = cfg.proposal_sd_frailty

    # -- frailty machinery ---------------------------------------------------

    def _w23_effective(self):
        return self.w13 if self.w23 is None else self.w23

    def _frailty_prior_diff(self, which, prop):
        """Per-subject log-prior difference for replacing one frailty column."""
        sd = self.priors.frailty_prior_sd
        if self.cfg.structure != FULL_SIX:
            cur = {"w12": self.w12, "w13": self.w13, "w23": self.w23}[which]
            return (cur ** 2 - prop ** 2) / (2 * sd * sd)
        cols = {"w12": self.w12, "w13": self.w13, "w23": self.w23}

        def quad(w12, w13, w23):
            X = np.column_stack([w12, w13, w23])
            return -0.5 * np.einsum("ij,jk,ik->i", X, self.prior_prec3, X)

        trial = dict(cols)
        trial[which] = prop
        return quad(trial["w12"], trial["w13"], trial["w23"]) - quad(cols["w12"], cols["w13"], cols["w23"])

    def _sweep_frailty(self, which, ll_cur):
        """Vectorized per-subject Metropolis update of one frailty column.

        Each subject's proposal is accepted independently: given fixed
        structural parameters the likelihood terms are disjoint across
        subjects. Under the equal-frailty structure a proposed omega13 also
        feeds the 2->3 hazard.
        """
        cur = {"w12": self.w12, "w13": self.w13, "w23": self.w23}[which]
        active = self.d.ds.copy() if which == "w23" else np.ones(self.d.n, bool)
        prop = np.where(active, cur + self.rng.normal(0.0, self._frailty_sd, self.d.n), cur)
        if which == "w12":
            ll_prop = loglik_vector(self.d, self.p, prop, self.w13, self._w23_effective())
        elif which == "w13":
            w23_eff = prop if self.w23 is None else self.w23
            ll_prop = loglik_vector(self.d, self.p, self.w12, prop, w23_eff)
        else:
            ll_prop = loglik_vector(self.d, self.p, self.w12, self.w13, prop)
        log_u = np.log(self.rng.uniform(size=self.d.n))
        accept = active & (log_u < (ll_prop - ll_cur) + self._frailty_prior_diff(which, prop))
        cur[accept] = prop[accept]
        ll_cur[accept] = ll_prop[accept]
        return ll_cur, accept.sum() / max(active.sum(), 1)

    def _gibbs_w23_nonexperiencers(self):
        """full_six only: conditional-prior draw of omega23 for subjects without
        the intermediate event (their likelihood does not involve omega23)."""
        m = ~self.d.ds
        if not m.any():
            return
        sd2 = self.priors.frailty_prior_sd ** 2
        C = self.prior_corr3 * sd2
        c_vec = C[2, :2]
        A = np.linalg.solve(C[:2, :2], c_vec)
        cond_var = C[2, 2] - c_vec @ A
        mean = A[0] * self.w12[m] + A[1] * self.w13[m]
        self.w23[m] = mean + np.sqrt(max(cond_var, 0.0)) * self.rng.standard_normal(m.sum())

    # -- parameter blocks ------------------------------------------------------

    def _update_block(self, block, ll_cur):
        """Jointly propose/accept one parameter block; returns (ll_vector, accepted)."""
        prop = replace(self.p)
        for m in _block_members(block, self.cfg):
            setattr(prop, m, getattr(self.p, m) + self.rng.normal(0.0, self._param_sds[block]))
        u = self.rng.uniform()
        if not prop.valid():
            return ll_cur, False
        ll_prop = loglik_vector(self.d, prop, self.w12, self.w13, self._w23_effective())
        dpost = (ll_prop.sum() - ll_cur.sum()
                 + _block_log_prior(prop, block, self.cfg, self.priors)
                 - _block_log_prior(self.p, block, self.cfg, self.priors))
        if np.log(u) < dpost:
            self.p = prop
            return ll_prop, True
        return ll_cur, False

    # -- main loop -------------------------------------------------------------

    def run(self):
        cfg = self.cfg
        n_it = cfg.iterations
        keys = [k for b in BLOCKS for k in _block_members(b, cfg)]
        store = {k: np.empty(n_it) for k in keys}
        om12 = np.empty((n_it, self.d.n))
        om13 = np.empty((n_it, self.d.n))
        om23 = np.empty((n_it, self.d.n)) if self.separate_w23 else None
        accept_counts = {b: 0 for b in BLOCKS}
        frailty_rates = {"w12": [], "w13": [], "w23": []}

        ll = loglik_vector(self.d, self.p, self.w12, self.w13, self._w23_effective())
        for it in range(n_it):
            ll, r12 = self._sweep_frailty("w12", ll)
            ll, acc = self._update_block("block12", ll)
            accept_counts["block12"] += acc
            ll, r13 = self._sweep_frailty("w13", ll)
            ll, acc = self._update_block("block13", ll)
            accept_counts["block13"] += acc
            r23 = None
            if self.separate_w23:
                ll, r23 = self._sweep_frailty("w23", ll)
                if cfg.structure == FULL_SIX:
                    # their likelihood has no omega23 term, so ll stays valid
                    self._gibbs_w23_nonexperiencers()
            ll, acc = self._update_block("block23", ll)
            accept_counts["block23"] += acc
            frailty_rates["w12"].append(r12)
            frailty_rates["w13"].append(r13)
            if r23 is not None:
                frailty_rates["w23"].append(r23)
            if cfg.adapt_during_burnin and it < cfg.burn_in and it > 0 and it % 100 == 0:
                for b in BLOCKS:
                    rate = accept_counts[b] / (it + 1)
                    self._param_sds[b] *= float(np.exp(np.clip(rate - 0.3, -0.5, 0.5)))
            for k in keys:
                store[k][it] = getattr(self.p, k)
            om12[it] = self.w12
            om13[it] = self.w13
            if om23 is not None:
                om23[it] = np.where(self.d.ds, self.w23, np.nan) \
                    if cfg.structure == INDEPENDENT_THREE else self.w23

        acceptance = {b: accept_counts[b] / n_it for b in BLOCKS}
        for which, rates in frailty_rates.items():
            if rates:
                acceptance[f"frailty_{which}"] = float(np.mean(rates))
        for b in BLOCKS:
            if not (0.05 < acceptance[b] < 0.95):
                warnings.warn(
                    f"arm {self.arm_z} {b} acceptance rate {acceptance[b]:.3f} outside (0.05, 0.95); "
                    "consider tuning proposal_sd_params", TuningWarning)
        return ChainDraws(self.arm_z, self.d.ids, store, om12, om13, om23,
                          cfg.burn_in, acceptance, cfg)


@dataclass
class FitResult:
    """Chains for both arms plus dataset bookkeeping."""

    arms: dict[int, ChainDraws]
    sampler: SamplerConfig
    priors: PriorConfig

    def summary(self):
        out = {"acceptance": {}, "params": {}}
        for z, chain in self.arms.items():
            for k, stats in chain.summary().items():
                out["params"][f"{k}_{z}"] = stats
            for k, v in chain.acceptance.items():
                out["acceptance"][f"{k}_{z}"] = v
        return out

    def save(self, prefix):
        """Write retained chain CSV, frailty matrices (.npy), manifest, and JSON summary."""
        import csv as _csv

        cols = []
        for z in sorted(self.arms):
            for k in self.arms[z].params:
                cols.append((f"{k}_{z}", self.arms[z].retained(k)))
        chain_path = f"{prefix}_chain.csv"
        with open(chain_path, "w", newline="") as fh:
            w = _csv.writer(fh)
            w.writerow([c for c, _ in cols])
            for i in range(len(cols[0][1])):
                w.writerow([repr(float(arr[i])) for _, arr in cols])
        paths = {"chain": chain_path}
        for z, chain in self.arms.items():
            stack = [chain.retained_omega("omega12"), chain.retained_omega("omega13")]
            if chain.omega23 is not None:
                stack.append(chain.retained_omega("omega23"))
            arr = np.stack(stack, axis=-1)
            p = f"{prefix}_frailty_arm{z}.npy"
            np.save(p, arr)
            paths[f"frailty_arm{z}"] = p
        summary_path = f"{prefix}_summary.json"
        with open(summary_path, "w") as fh:
            json.dump(self.summary(), fh, indent=1, sort_keys=True)
        paths["summary"] = summary_path
        manifest = {
            "sampler": {"iterations": self.sampler.iterations, "burn_in": self.sampler.burn_in,
                        "structure": self.sampler.structure, "seed": self.sampler.seed,
                        "fix_kappa_to_one": self.sampler.fix_kappa_to_one,
                        "fix_alpha_to_one": self.sampler.fix_alpha_to_one},
            "subject_ids": {str(z): self.arms[z].subject_ids.tolist() for z in self.arms},
            "params": {str(z): list(self.arms[z].params) for z in self.arms},
            "acceptance": {str(z): self.arms[z].acceptance for z in self.arms},
        }
        manifest_path = f"{prefix}_manifest.json"
        with open(manifest_path, "w") as fh:
            json.dump(manifest, fh, indent=1, sort_keys=True)
        paths["manifest"] = manifest_path
        return paths


def load_fit(prefix) -> FitResult:
    """Reload saved chains (retained iterations only) for downstream CEP runs."""
    import csv as _csv

    with open(f"{prefix}_manifest.json") as fh:
        manifest = json.load(fh)
    with open(f"{prefix}_chain.csv", newline="") as fh:
        r = _csv.reader(fh)
        header = next(r)
        rows = np.array([[float(v) for v in row] for row in r])
    cols = {name: rows[:, j] for j, name in enumerate(header)}
    if manifest["sampler"]["structure"] == FULL_SIX:
        raise DataError("full_six fits cannot be reloaded without their frailty "
                        "configuration; rerun fit and cep in one process")
    sampler = SamplerConfig(
        iterations=len(rows), burn_in=0,
        structure=manifest["sampler"]["structure"], seed=manifest["sampler"]["seed"],
        fix_kappa_to_one=manifest["sampler"]["fix_kappa_to_one"],
        fix_alpha_to_one=manifest["sampler"]["fix_alpha_to_one"])
    arms = {}
    for z in (0, 1):
        omega = np.load(f"{prefix}_frailty_arm{z}.npy")
        params = {k: cols[f"{k}_{z}"] for k in manifest["params"][str(z)]}
        arms[z] = ChainDraws(
            arm=z, subject_ids=np.asarray(manifest["subject_ids"][str(z)], dtype=np.int64),
            params=params, omega12=omega[:, :, 0], omega13=omega[:, :, 1],
            omega23=omega[:, :, 2] if omega.shape[2] > 2 else None,
            burn_in=0, acceptance=manifest["acceptance"][str(z)], config=sampler)
    return FitResult(arms, sampler, PriorConfig())


def fit(dataset: TrialData, sampler: SamplerConfig = SamplerConfig(),
        priors: PriorConfig = PriorConfig(), allow_no_events=False) -> FitResult:
    """Fit both arms by block Metropolis-Hastings; arms are independent chains.

    Fully censored arms are rejected unless ``allow_no_events`` is set (useful
    only for prior-recovery checks). Transitions without any observed events
    are flagged with a DegenerateDataWarning and end up prior-dominated.
    """
    ss = np.random.SeedSequence(sampler.seed)
    children = ss.spawn(2)
    chains = {}
    for z in (0, 1):
        arm_rows = dataset.arm(z)
        if len(arm_rows) == 0:
            raise DataError(f"arm {z} is empty")
        d = _ArmData(arm_rows, allow_no_events=allow_no_events)
        for trans, count in d.transition_event_counts().items():
            if count == 0:
                warnings.warn(f"arm {z}: no observed {trans} transition events; "
                              "its parameters are prior-dominated", DegenerateDataWarning)
        chains[z] = _ArmSampler(d, z, sampler, priors, children[z]).run()
    return FitResult(chains, sampler, priors)
