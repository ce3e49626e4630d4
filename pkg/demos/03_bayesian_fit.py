"""
Bayesian fitting by block Metropolis-Hastings
=============================================

Each arm is fitted separately on its observed-data likelihood. Per-subject
frailties are sampled alongside the structural parameters; scale/shape pairs
and the 2->3 block (scale, shape, entry-time coefficient) are accepted
jointly.

This demo runs a deliberately short chain; the acceptance suite runs the full
3000-iteration protocol.
"""

import numpy as np

from idcep import PriorConfig, SamplerConfig, ScenarioSpec, fit, simulate_trial

data = simulate_trial(ScenarioSpec(scenario_id=2, n=600, seed=7))

result = fit(
    data,
    SamplerConfig(iterations=1500, burn_in=500, seed=1),
    PriorConfig(),   # Gamma(0.1, 0.1) scale/shape priors, N(0, 0.4^2) frailties
)

truth = {"gamma12_0": 1.0, "gamma12_1": 0.61, "gamma13_0": 0.5, "gamma13_1": 0.5,
         "gamma23_0": 1.0, "gamma23_1": 1.0, "theta23_0": 0.0, "theta23_1": 0.0}
print(f"{'parameter':12s} {'truth':>6s} {'mean':>7s} {'sd':>6s} {'2.5%':>7s} {'97.5%':>7s}")
summary = result.summary()["params"]
for k, true_val in truth.items():
    s = summary[k]
    print(f"{k:12s} {true_val:6.2f} {s['mean']:7.3f} {s['sd']:6.3f} "
          f"{s['q025']:7.3f} {s['q975']:7.3f}")

print("\nacceptance rates:")
for k, v in sorted(result.summary()["acceptance"].items()):
    print(f"  {k:20s} {v:.2f}")

# Frailty draws wander more than the structural parameters; their posterior
# spread reflects how weakly single-subject data identify them.
omega = result.arms[0].retained_omega("omega12")
print(f"\narm-0 illness-frailty draws: mean {omega.mean():+.3f}, "
      f"per-subject posterior sd ~ {omega.std(axis=0).mean():.3f}")

paths = result.save("/tmp/idcep_demo_fit")
print("\nartifacts:", ", ".join(sorted(paths.values())))
