"""
Conventional (association-based) surrogacy checks
=================================================

The classical criteria compare treatment coefficients across Weibull
proportional-hazards fits: on the intermediate endpoint, on the terminal
endpoint, and on the terminal endpoint adjusting for occurrence of the
intermediate one as a time-dependent indicator. Attenuation of the treatment
effect after adjustment is the classical signature of a surrogate - but the
comparison conditions on a post-treatment variable, hence the causal
machinery in the rest of this package.
"""

from idcep import ScenarioSpec, fit_weibull_ph, simulate_trial

data = simulate_trial(ScenarioSpec(scenario_id=2, n=5000, seed=99))

for model in ("s_on_z", "t_on_z", "t_on_z_plus_s"):
    res = fit_weibull_ph(data, model)
    parts = [f"{name}: HR {c['hr']:.3f} (95% CI "
             f"{2.718281828 ** (c['coef'] - 1.96 * c['se']):.3f}-"
             f"{2.718281828 ** (c['coef'] + 1.96 * c['se']):.3f}, p={c['p']:.4f})"
             for name, c in res.coefficients.items()]
    print(f"{model:14s} shape {res.alpha:.3f}  " + "; ".join(parts))

print("""
Under the perfect-surrogate scenario the treatment clearly slows the
intermediate endpoint (HR well below 1), shows a modest marginal effect on
survival, and that effect attenuates toward the null once the indicator for
having experienced the intermediate event enters the model - the indicator
itself carries a large hazard increase, since post-illness death is faster
than direct death in this parameterization.
""")
