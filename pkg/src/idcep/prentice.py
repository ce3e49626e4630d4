"""Conventional (association-based) surrogacy checks.

Three Weibull proportional-hazards models on the pooled observed data:

    s_on_z         hazard of the intermediate event  ~ exp(phi * Z)
    t_on_z         hazard of the terminal event      ~ exp(phi * Z)
    t_on_z_plus_s  terminal hazard ~ exp(phi * Z + omega_coef * I(t > S_i))

The time-dependent indicator is handled by splitting each risk interval at
the subject's intermediate-event time (counting-process form): a subject with
the event at s < t contributes (0, s] with indicator 0 and (s, t] with
indicator 1. Maximum likelihood runs on (log gamma, log alpha, coefficients)
with analytic gradients; standard errors come from the inverse observed
information (finite differences of the gradient at the optimum).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize
from scipy.stats import norm

from .data import DataError, TrialData
from .models import DomainError

S_ON_Z = "s_on_z"
T_ON_Z = "t_on_z"
T_ON_Z_PLUS_S = "t_on_z_plus_s"
PRENTICE_MODELS = (S_ON_Z, T_ON_Z, T_ON_Z_PLUS_S)


class NumericalError(RuntimeError):
    """Optimizer failed to converge; message carries the gradient norm."""


@dataclass
class _Intervals:
    """Risk intervals (start, stop], event flag at stop, covariate columns."""

    start: np.ndarray
    stop: np.ndarray
    event: np.ndarray
    X: np.ndarray          # columns: treatment [, post-intermediate indicator]
    names: tuple


def _build_intervals(data: TrialData, model):
    z = data.z.astype(float)
    if model == S_ON_Z:
        return _Intervals(np.zeros(len(data)), data.s_time, data.s_event.astype(float),
                          z[:, None], ("treatment",))
    if model == T_ON_Z:
        return _Intervals(np.zeros(len(data)), data.t_time, data.t_event.astype(float),
                          z[:, None], ("treatment",))
    if model != T_ON_Z_PLUS_S:
        raise DomainError(f"unknown model {model!r}; choose from {PRENTICE_MODELS}")
    starts, stops, events, zs, inds = [], [], [], [], []
    split = (data.s_event == 1) & (data.s_time < data.t_time)
    for i in range(len(data)):
        if split[i]:
            starts += [0.0, data.s_time[i]]
            stops += [data.s_time[i], data.t_time[i]]
            events += [0.0, float(data.t_event[i])]
            zs += [z[i], z[i]]
            inds += [0.0, 1.0]
        else:
            starts.append(0.0)
            stops.append(data.t_time[i])
            events.append(float(data.t_event[i]))
            zs.append(z[i])
            inds.append(0.0)
    X = np.column_stack([zs, inds])
    names = ("treatment", "post_intermediate")
    if not np.any(X[:, 1] > 0):
        # indicator never fires; model degenerates to t_on_z
        X = X[:, :1]
        names = ("treatment",)
    return _Intervals(np.asarray(starts), np.asarray(stops), np.asarray(events), X, names)


def neg_loglik_and_grad(params, iv: _Intervals):
    """Negative log-likelihood and gradient in (log gamma, log alpha, coefs)."""
    lg, la = params[0], params[1]
    beta = params[2:]
    gamma, alpha = np.exp(lg), np.exp(la)
    eta = iv.X @ beta
    b, a, d = iv.stop, iv.start, iv.event
    log_b = np.log(np.where(b > 0, b, 1.0))
    log_a = np.log(np.where(a > 0, a, 1.0))
    cum = gamma * (b ** alpha - a ** alpha) * np.exp(eta)
    ll = np.sum(d * (lg + la + (alpha - 1.0) * log_b + eta)) - np.sum(cum)
    # gradient of the positive log-likelihood
    dcum_la = gamma * alpha * (b ** alpha * log_b - a ** alpha * log_a) * np.exp(eta)
    g_lg = np.sum(d) - np.sum(cum)
    g_la = np.sum(d * (1.0 + alpha * log_b)) - np.sum(dcum_la)
    g_beta = iv.X.T @ (d - cum)
    grad = np.concatenate([[g_lg, g_la], g_beta])
    return -ll, -grad


def _hessian_fd(params, iv, h=1e-5):
    k = len(params)
    H = np.empty((k, k))
    for j in range(k):
        e = np.zeros(k)
        e[j] = h
        _, gp = neg_loglik_and_grad(params + e, iv)
        _, gm = neg_loglik_and_grad(params - e, iv)
        H[:, j] = (gp - gm) / (2 * h)
    return 0.5 * (H + H.T)


@dataclass
class PrenticeFit:
    """MLE of one conventional model: coefficients, SEs, hazard ratios, Wald p."""

    model: str
    gamma: float
    alpha: float
    coefficients: dict
    loglik: float
    n_events: int
    grad_norm: float

    def to_dict(self):
        return {"model": self.model, "gamma": self.gamma, "alpha": self.alpha,
                "loglik": self.loglik, "n_events": self.n_events,
                "coefficients": self.coefficients}


def fit_weibull_ph(data: TrialData, model, max_iter=200) -> PrenticeFit:
    """Fit one of the three conventional Weibull proportional-hazards models."""
    iv = _build_intervals(data, model)
    n_events = int(iv.event.sum())
    if n_events == 0:
        raise DataError(f"{model}: no events observed; nothing to fit")
    total_time = np.sum(iv.stop - iv.start)
    x0 = np.concatenate([[np.log(max(n_events, 1) / total_time), 0.0],
                         np.zeros(iv.X.shape[1])])
    res = minimize(neg_loglik_and_grad, x0, args=(iv,), jac=True,
                   method="L-BFGS-B", options={"maxiter": max_iter})
    grad_norm = float(np.linalg.norm(res.jac))
    if not res.success and grad_norm > 1e-3:
        raise NumericalError(f"{model}: no convergence after {max_iter} iterations; "
                             f"gradient norm {grad_norm:.3e}")
    H = _hessian_fd(res.x, iv)
    cov = np.linalg.inv(H)
    se = np.sqrt(np.maximum(np.diag(cov), 0.0))
    coefs = {}
    for j, name in enumerate(iv.names):
        c = float(res.x[2 + j])
        s = float(se[2 + j])
        coefs[name] = {"coef": c, "se": s, "hr": float(np.exp(c)),
                       "p": float(2 * norm.sf(abs(c) / s)) if s > 0 else float("nan")}
    return PrenticeFit(model=model, gamma=float(np.exp(res.x[0])),
                       alpha=float(np.exp(res.x[1])), coefficients=coefs,
                       loglik=float(-res.fun), n_events=n_events, grad_norm=grad_norm)


def prentice_report(data: TrialData):
    """All three conventional fits as one JSON-ready report."""
    return {model: fit_weibull_ph(data, model).to_dict() for model in PRENTICE_MODELS}
