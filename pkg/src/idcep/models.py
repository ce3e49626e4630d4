"""Counterfactual illness-death frailty models.

Three-state structure per treatment arm: baseline -> illness (1->2),
baseline -> death (1->3), illness -> death (2->3, clock reset at illness).
Each transition has a Weibull baseline with cumulative hazard

    L_jk(t) = gamma * t**alpha,      lam_jk(t) = gamma * alpha * t**(alpha-1),

multiplied by a log-linear frailty link. The 1->2 and 1->3 links are
exp(kappa * omega). The 2->3 hazard runs on the gap time v = t - t12 and its
link depends on the variant:

    variant "A":  exp(kappa * omega23 + theta * t12)
    variant "B":  exp(kappa12_star * omega12 + kappa13_star * omega13)

Arm survival at a horizon tau decomposes as "never leave baseline" plus an
integral over illness times u:

    S(tau) = exp(-L12(tau) - L13(tau))
           + int_0^tau exp(-L12(u) - L13(u)) lam12(u) exp(-L23(tau-u | u)) du

evaluated by Gauss-Legendre quadrature. When alpha12 < 1 the integrand has an
integrable singularity at u = 0; the substitution u = tau * v**(1/alpha12)
removes it exactly (the lam12(u) du measure becomes a constant in v).

All evaluation functions are pure and accept scalar or ndarray frailties.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

MODEL_A = "A"
MODEL_B = "B"

EQUAL_13_23 = "equal_13_23"
INDEPENDENT_THREE = "independent_three"
FULL_SIX = "full_six"
FRAILTY_STRUCTURES = (EQUAL_13_23, INDEPENDENT_THREE, FULL_SIX)

# component order of the stacked cross-arm frailty vector
SIX_ORDER = ("omega12_0", "omega12_1", "omega13_0", "omega13_1", "omega23_0", "omega23_1")


class DomainError(ValueError):
    """Invalid parameter or evaluation point."""


class NotPositiveSemiDefinite(DomainError):
    """Supplied correlation matrix fails the PSD requirement."""


class QuadratureError(RuntimeError):
    """Quadrature self-check failed; carries the achieved error estimate."""

    def __init__(self, estimate, tol):
        self.estimate = estimate
        self.tol = tol
        super().__init__(f"quadrature error estimate {estimate:.3e} exceeds tolerance {tol:.3e}")


@dataclass(frozen=True)
class TransitionParams:
    """Weibull shape/scale plus frailty and entry-time coefficients for one transition.

    ``theta`` (entry-time coefficient) is meaningful only for the 2->3
    transition under variant A; ``kappa12_star``/``kappa13_star`` only for
    2->3 under variant B. ``gamma = 0`` is a degenerate evaluation-only limit.
    """

    alpha: float = 1.0
    gamma: float = 1.0
    kappa: float = 1.0
    theta: float = 0.0
    kappa12_star: float = 0.0
    kappa13_star: float = 0.0

    def __post_init__(self):
        if not (self.alpha > 0):
            raise DomainError(f"alpha must be > 0, got {self.alpha}")
        if not (self.gamma >= 0):
            raise DomainError(f"gamma must be >= 0, got {self.gamma}")


@dataclass(frozen=True)
class ArmModel:
    """Transition parameter set for one treatment arm."""

    t12: TransitionParams
    t13: TransitionParams
    t23: TransitionParams
    variant: str = MODEL_A

    def __post_init__(self):
        if self.variant not in (MODEL_A, MODEL_B):
            raise DomainError(f"unknown model variant {self.variant!r}")

    @staticmethod
    def from_scales(g12, g13, g23, a12=1.0, a13=1.0, a23=1.0, theta=0.0,
                    variant=MODEL_A, kappa12_star=0.0, kappa13_star=0.0):
        return ArmModel(
            t12=TransitionParams(alpha=a12, gamma=g12),
            t13=TransitionParams(alpha=a13, gamma=g13),
            t23=TransitionParams(alpha=a23, gamma=g23, theta=theta,
                                 kappa12_star=kappa12_star, kappa13_star=kappa13_star),
            variant=variant,
        )


@dataclass(frozen=True)
class FrailtySet:
    """Per-subject frailties for one arm; omega23=None aliases omega13 (equal-frailty case)."""

    omega12: float = 0.0
    omega13: float = 0.0
    omega23: float | None = None

    @property
    def omega23_value(self):
        return self.omega13 if self.omega23 is None else self.omega23


@dataclass(frozen=True)
class QuadratureConfig:
    """Gauss-Legendre node count and optional self-check tolerance.

    With ``check_tol`` set, every survival evaluation is repeated at twice the
    node count and the difference is used as an error estimate.
    """

    nodes: int = 64
    check_tol: float | None = None

    def __post_init__(self):
        if self.nodes < 2:
            raise DomainError("need at least 2 quadrature nodes")


@dataclass(frozen=True)
class FrailtyConfig:
    """Cross-arm frailty law: structural assumption, marginal sd, correlations.

    ``rho_s`` links the two arms' illness frailties (omega12), ``rho_t`` the
    death frailties (omega13). Under ``independent_three`` the 2->3 pair needs
    its own cross-arm correlation ``rho_st`` (defaults to rho_t). Under
    ``full_six`` a complete 6x6 correlation matrix in ``SIX_ORDER`` component
    order is required (see :func:`build_six_corr`).
    """

    structure: str = EQUAL_13_23
    sigma_omega: float = 0.4
    rho_s: float = 0.5
    rho_t: float = 0.5
    rho_st: float | None = None
    full_corr: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.structure not in FRAILTY_STRUCTURES:
            raise DomainError(f"unknown frailty structure {self.structure!r}")
        if not (self.sigma_omega > 0):
            raise DomainError("sigma_omega must be > 0")
        for name in ("rho_s", "rho_t"):
            r = getattr(self, name)
            if abs(r) > 1:
                raise DomainError(f"|{name}| must be <= 1, got {r}")
        if self.rho_st is not None and abs(self.rho_st) > 1:
            raise DomainError(f"|rho_st| must be <= 1, got {self.rho_st}")
        if self.structure == FULL_SIX:
            if self.full_corr is None:
                raise DomainError("full_six structure requires full_corr")
            object.__setattr__(self, "full_corr", validate_corr(np.asarray(self.full_corr, float), 6))

    @property
    def rho_st_value(self):
        return self.rho_t if self.rho_st is None else self.rho_st

    def cross_arm_corr(self):
        """6x6 correlation of the stacked frailty vector implied by the structure."""
        if self.structure == FULL_SIX:
            return self.full_corr
        C = np.eye(6)
        C[0, 1] = C[1, 0] = self.rho_s
        C[2, 3] = C[3, 2] = self.rho_t
        if self.structure == EQUAL_13_23:
            # omega23 identically equals omega13
            C[4:, :] = C[2:4, :]
            C[:, 4:] = C[:, 2:4]
        else:
            C[4, 5] = C[5, 4] = self.rho_st_value
        return C


def validate_corr(C, dim):
    """Check a correlation matrix: shape, symmetry, unit diagonal, PSD."""
    C = np.asarray(C, float)
    if C.shape != (dim, dim):
        raise DomainError(f"correlation matrix must be {dim}x{dim}, got {C.shape}")
    if not np.allclose(C, C.T, atol=1e-10):
        raise DomainError("correlation matrix must be symmetric")
    if not np.allclose(np.diag(C), 1.0, atol=1e-10):
        raise DomainError("correlation matrix must have unit diagonal")
    if np.linalg.eigvalsh(C).min() < -1e-10:
        raise NotPositiveSemiDefinite("correlation matrix is not positive semi-definite")
    return C


def build_six_corr(rho_s=0.5, rho_t=0.5, rho_00=0.0, rho_01=0.0, rho_10=0.0, rho_11=0.0,
                   rho_s1=0.0, rho_s2=0.0, rho_s3=0.0, rho_s4=0.0,
                   rho_t1=0.95, rho_t2=0.5, rho_t3=0.5, rho_t4=0.95, rho_st=0.5):
    """Assemble the 6x6 frailty correlation matrix from its named entries.

    Component order is ``SIX_ORDER``; rho_t1..rho_t4 link the omega13 pair to
    the omega23 pair (t1: within arm 0, t4: within arm 1). Defaults give the
    near-equal death-frailty sensitivity configuration; note that large
    rho_t1/rho_t4 require the cross-arm entries rho_t2/rho_t3 to stay close to
    rho_t and rho_st for positive semi-definiteness.
    """
    C = np.array([
        [1.0, rho_s, rho_00, rho_01, rho_s1, rho_s2],
        [rho_s, 1.0, rho_10, rho_11, rho_s3, rho_s4],
        [rho_00, rho_10, 1.0, rho_t, rho_t1, rho_t2],
        [rho_01, rho_11, rho_t, 1.0, rho_t3, rho_t4],
        [rho_s1, rho_s3, rho_t1, rho_t3, 1.0, rho_st],
        [rho_s2, rho_s4, rho_t2, rho_t4, rho_st, 1.0],
    ])
    return validate_corr(C, 6)


# ---------------------------------------------------------------------------
# hazard evaluation
# ---------------------------------------------------------------------------

def cum_hazard(params: TransitionParams, omega, t):
    """Cumulative hazard gamma * t**alpha * exp(kappa * omega) at time t >= 0."""
    t = np.asarray(t, float)
    if np.any(t < 0):
        raise DomainError("t must be >= 0")
    out = params.gamma * t ** params.alpha * np.exp(params.kappa * np.asarray(omega, float))
    return float(out) if out.ndim == 0 else out


def hazard(params: TransitionParams, omega, t):
    """Instantaneous hazard gamma * alpha * t**(alpha-1) * exp(kappa * omega)."""
    t = np.asarray(t, float)
    if np.any(t < 0):
        raise DomainError("t must be >= 0")
    base = params.gamma * params.alpha * t ** (params.alpha - 1.0)
    out = base * np.exp(params.kappa * np.asarray(omega, float))
    return float(out) if out.ndim == 0 else out


def _link_23(arm: ArmModel, omega12, omega13, omega23, t12):
    """Log of the 2->3 multiplicative link, given entry time t12."""
    p = arm.t23
    if arm.variant == MODEL_A:
        return p.kappa * np.asarray(omega23, float) + p.theta * np.asarray(t12, float)
    return p.kappa12_star * np.asarray(omega12, float) + p.kappa13_star * np.asarray(omega13, float)


def hazard_23(arm: ArmModel, frailty: FrailtySet, t, t12):
    """2->3 hazard at absolute time t for a subject who entered illness at t12.

    Zero for t <= t12; otherwise a Weibull hazard in the gap time (t - t12)
    times the variant-specific link.
    """
    t = np.asarray(t, float)
    t12 = np.asarray(t12, float)
    if np.any(t < 0) or np.any(t12 < 0):
        raise DomainError("times must be >= 0")
    p = arm.t23
    gap = np.maximum(t - t12, 0.0)
    lp = _link_23(arm, frailty.omega12, frailty.omega13, frailty.omega23_value, t12)
    with np.errstate(divide="ignore"):
        base = p.gamma * p.alpha * np.where(gap > 0, gap, 1.0) ** (p.alpha - 1.0)
    out = np.where(t > t12, base * np.exp(lp), 0.0)
    return float(out) if out.ndim == 0 else out


def cum_hazard_23(arm: ArmModel, frailty: FrailtySet, gap, t12):
    """2->3 cumulative hazard over a gap time since illness entry at t12."""
    gap = np.asarray(gap, float)
    if np.any(gap < 0):
        raise DomainError("gap must be >= 0")
    p = arm.t23
    lp = _link_23(arm, frailty.omega12, frailty.omega13, frailty.omega23_value, t12)
    out = p.gamma * gap ** p.alpha * np.exp(lp)
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# survival probability
# ---------------------------------------------------------------------------

_leggauss_cache: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _leggauss01(n):
    """Gauss-Legendre nodes/weights on [0, 1], cached."""
    if n not in _leggauss_cache:
        x, w = np.polynomial.legendre.leggauss(n)
        _leggauss_cache[n] = (0.5 * (x + 1.0), 0.5 * w)
    return _leggauss_cache[n]


def _survival_vec(arm: ArmModel, w12, w13, w23, tau, nodes):
    """Vectorized survival over frailty arrays; core of survival_prob."""
    p12, p13, p23 = arm.t12, arm.t13, arm.t23
    w12 = np.atleast_1d(np.asarray(w12, float))
    w13 = np.atleast_1d(np.asarray(w13, float))
    w23 = np.atleast_1d(np.asarray(w23, float))
    link12 = np.exp(p12.kappa * w12)[:, None]
    link13 = np.exp(p13.kappa * w13)[:, None]

    v, wq = _leggauss01(nodes)
    if p12.alpha < 1.0:
        # u = tau * v**(1/alpha12): lam12(u) du -> gamma12 * tau**alpha12 dv
        u = tau * v ** (1.0 / p12.alpha)
        measure = p12.gamma * tau ** p12.alpha * link12 * wq[None, :]
    else:
        u = tau * v
        with np.errstate(divide="ignore"):
            lam12_base = p12.gamma * p12.alpha * np.where(u > 0, u, 1.0) ** (p12.alpha - 1.0)
        measure = lam12_base[None, :] * link12 * (tau * wq)[None, :]

    L12_u = p12.gamma * u[None, :] ** p12.alpha * link12
    L13_u = p13.gamma * u[None, :] ** p13.alpha * link13
    if arm.variant == MODEL_A:
        lp23 = p23.kappa * w23[:, None] + p23.theta * u[None, :]
    else:
        lp23 = (p23.kappa12_star * w12 + p23.kappa13_star * w13)[:, None] + 0.0 * u[None, :]
    L23_gap = p23.gamma * (tau - u)[None, :] ** p23.alpha * np.exp(lp23)

    term1 = np.exp(-(p12.gamma * tau ** p12.alpha * link12
                     + p13.gamma * tau ** p13.alpha * link13))[:, 0]
    integral = np.einsum("ij,ij->i", np.exp(-(L12_u + L13_u) - L23_gap), measure)
    return np.clip(term1 + integral, 0.0, 1.0)


def survival_probs(arm: ArmModel, w12, w13, w23, tau, quad: QuadratureConfig = QuadratureConfig()):
    """P(T > tau) for arrays of per-subject frailties (one arm)."""
    if not (tau > 0):
        raise DomainError("tau must be > 0")
    out = _survival_vec(arm, w12, w13, w23, tau, quad.nodes)
    if quad.check_tol is not None:
        ref = _survival_vec(arm, w12, w13, w23, tau, 2 * quad.nodes)
        est = float(np.max(np.abs(out - ref)))
        if est > quad.check_tol:
            raise QuadratureError(est, quad.check_tol)
    return out


def survival_prob(arm: ArmModel, frailty: FrailtySet, tau, quad: QuadratureConfig = QuadratureConfig()):
    """P(T > tau) for one subject's frailty set; value in [0, 1]."""
    return float(survival_probs(arm, frailty.omega12, frailty.omega13,
                                frailty.omega23_value, tau, quad)[0])
