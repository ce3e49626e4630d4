"""
Truth-CEP across the eight benchmark scenarios
==============================================

With generating parameters known, the CEP cloud needs no chain: draw frailty
sets from the cross-arm joint law and evaluate both arms' survival exactly.
The intercept separates surrogate quality: scenarios whose treatment effects
bypass the intermediate endpoint push the line off the origin.
"""

from idcep import CepConfig, scenario_arms, truth_cep
from idcep.simulate import SCENARIO_LABELS

config = CepConfig(tau_s=1.0, tau_t=5.0, rho_s=0.5, rho_t=0.5, sigma_omega=0.4)

print(f"{'scenario':>8s}  {'label':20s} {'intercept':>10s} {'slope':>8s} "
      f"{'mean dS':>8s} {'mean dT':>8s}")
for sid in range(1, 9):
    control, treated = scenario_arms(sid)
    res = truth_cep(control, treated, config, n_draws=50_000, seed=sid)
    s = res.summary
    print(f"{sid:>8d}  {SCENARIO_LABELS[sid]:20s} {s['g0_mean']:>+10.4f} "
          f"{s['g1_mean']:>+8.4f} {s['mean_ds']:>+8.4f} {s['mean_dt']:>+8.4f}")

print("""
Reading the table: the null case (1) and the perfect surrogate (2) keep the
intercept at zero; every scenario with a treatment effect on a death
transition (3-8) lifts it, most of all when both death transitions are
affected (5, 6). Slopes stay positive throughout because higher illness
frailty also predicts shorter survival here (the post-illness death rate
exceeds the direct one).
""")
