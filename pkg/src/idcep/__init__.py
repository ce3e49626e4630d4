"""idcep: causal surrogate-endpoint validation for semi-competing
time-to-event outcomes via counterfactual illness-death frailty models.

Capabilities: exact hazard/survival evaluation for the two model variants,
trial simulation under eight benchmark scenarios, Bayesian fitting by block
Metropolis-Hastings on the observed-data likelihood, causal effect
predictiveness (CEP) clouds and line summaries from chains or generating
truth, correlation sensitivity sweeps, conventional Weibull
proportional-hazards checks, a CLI, and an HTTP compute service.
"""

from .data import DataError, SubjectRecord, TrialData
from .models import (MODEL_A, MODEL_B, EQUAL_13_23, INDEPENDENT_THREE, FULL_SIX,
                     ArmModel, DomainError, FrailtyConfig, FrailtySet,
                     QuadratureConfig, QuadratureError, TransitionParams,
                     build_six_corr, cum_hazard, hazard, hazard_23, cum_hazard_23,
                     survival_prob, survival_probs)
from .simulate import (CensoringConfig, FrailtyDraws, ScenarioSpec,
                       SCENARIO_LABELS, SCENARIO_TREATED_SCALES, CONTROL_SCALES,
                       draw_frailties, scenario_arms, simulate_arm, simulate_trial,
                       transition_counts)
from .mcmc import (ChainDraws, DegenerateDataWarning, FitResult, PriorConfig,
                   SamplerConfig, TuningWarning, fit, gamma_logpdf, load_fit,
                   log_lik_subject, log_posterior_block, metropolis_step)
from .cep import (CepConfig, CepResult, LineFit, cep_from_chain,
                  delta_s, delta_s_values, delta_t, draw_counterfactual_frailty,
                  fit_line, sensitivity_sweep, truth_cep, thin_by_rank)
from .prentice import (PRENTICE_MODELS, S_ON_Z, T_ON_Z, T_ON_Z_PLUS_S,
                       NumericalError, PrenticeFit, fit_weibull_ph, prentice_report)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
