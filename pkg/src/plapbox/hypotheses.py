"""Sampled verification of the box hypotheses and the lambda-family analysis.

The box hypotheses for a nonlinearity f with constants (k1, k2, gamma):

    (H1)  0 <= f(u, s) <= k1 * M^(p-1)      on [0, M] x [0, gamma*M],
    (H2)  f(u, s) >= k2 * delta^(p-1)       on [delta, M] x [0, gamma*M],
    (H3)  f(u, s) <= C(u) * (1 + s^p)       for an increasing C.

For the one-parameter family f_lam(u, s) = lam * u^(q-1) * (1 + s^p) with
1 < q < p, closed forms give the optimal box height M*, the largest
admissible lam* and, for each lam <= lam*, a floor height delta_lam.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .grids import as_exponent
from .solver import NonlinearitySpec

DEFAULT_SAMPLES_PER_AXIS = 256


def lambda_family(lam: float, q_exp: float, p) -> NonlinearitySpec:
    """The gradient-coupled power family lam * u^(q-1) * (1 + s^p)."""
    pv = as_exponent(p).p
    if lam <= 0:
        raise ValueError("lam must be positive")
    if q_exp <= 1:
        raise ValueError("the family needs exponent q > 1")

    def evaluator(u, s):
        u = np.asarray(u, dtype=np.float64)
        s = np.asarray(s, dtype=np.float64)
        return lam * u ** (q_exp - 1.0) * (1.0 + s**pv)

    return NonlinearitySpec(
        evaluator=evaluator,
        description=f"{lam:.12g} * u^{q_exp - 1.0:.12g} * (1 + s^{pv:.12g})",
    )


def eval_H(M, p, q_exp: float, mu: float):
    """Height budget H(M) = M^(q-p) * (1 + mu^p * M^p); blows up at 0 and inf."""
    pv = as_exponent(p).p
    arr = np.asarray(M, dtype=np.float64)
    if np.any(arr <= 0):
        raise ValueError("H is only evaluated at positive heights")
    out = arr ** (q_exp - pv) * (1.0 + mu**pv * arr**pv)
    return float(out) if out.ndim == 0 else out


def eval_G(x, p, q_exp: float):
    """Gradient-free minorant G(x) = x^(q-p); G <= H everywhere."""
    pv = as_exponent(p).p
    arr = np.asarray(x, dtype=np.float64)
    if np.any(arr <= 0):
        raise ValueError("G is only evaluated at positive arguments")
    out = arr ** (q_exp - pv)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class LambdaFamilyReport:
    """Closed-form box parameters for the power family at one lam."""

    p: float
    q_exp: float
    mu: float
    k1: float
    k2: float
    M_star: float
    H_at_Mstar: float
    lambda_star: float
    lam: float
    delta_lambda: float
    delta_cap: float

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "q_exp": self.q_exp,
            "mu": self.mu,
            "k1": self.k1,
            "k2": self.k2,
            "M_star": self.M_star,
            "H_at_Mstar": self.H_at_Mstar,
            "lambda_star": self.lambda_star,
            "lambda": self.lam,
            "delta_lambda": self.delta_lambda,
            "delta_cap": self.delta_cap,
        }


def analyze_lambda_family(
    p, q_exp: float, mu: float, k1: float, k2: float, lam: float | None = None
) -> LambdaFamilyReport:
    """Optimal box parameters for lam * u^(q-1) * (1 + (mu*s)^... ) -- see below.

    mu is the slope-to-height quotient gamma of the chosen ball, so the
    admissible gradients satisfy s <= mu * M. The unique minimizer of H is

        M* = (p/q - 1)^(1/p) / mu,

    the ceiling hypothesis holds for every lam <= lam* = k1 / H(M*), and
    for a given lam the floor hypothesis holds with

        delta_lam = (lam / k2)^(1/(p-q)),

    which always stays below M* (delta_lam <= M* (q/p)^(1/(p-q)) < M*).
    """
    pv = as_exponent(p).p
    if not 1.0 < q_exp < pv:
        raise ValueError(f"the analysis needs 1 < q < p, got q={q_exp}, p={pv}")
    if mu <= 0 or k1 <= 0 or k2 <= 0:
        raise ValueError("mu, k1 and k2 must be positive")
    if not k1 < k2:
        raise ValueError("expected k1 < k2")
    m_star = (pv / q_exp - 1.0) ** (1.0 / pv) / mu
    h_star = eval_H(m_star, pv, q_exp, mu)
    lam_star = k1 / h_star
    if lam is None:
        lam = lam_star
    if lam <= 0:
        raise ValueError("lam must be positive")
    if lam > lam_star * (1.0 + 1e-12):
        raise ValueError(f"lam={lam} exceeds the admissible lambda*={lam_star}")
    delta_lam = (lam / k2) ** (1.0 / (pv - q_exp))
    delta_cap = m_star * (q_exp / pv) ** (1.0 / (pv - q_exp))
    if not delta_lam <= delta_cap * (1.0 + 1e-12):
        raise RuntimeError("floor height escaped its analytic cap; inputs inconsistent")
    return LambdaFamilyReport(
        p=pv,
        q_exp=q_exp,
        mu=mu,
        k1=k1,
        k2=k2,
        M_star=m_star,
        H_at_Mstar=h_star,
        lambda_star=lam_star,
        lam=lam,
        delta_lambda=delta_lam,
        delta_cap=delta_cap,
    )


@dataclass(frozen=True)
class HypothesisCheck:
    """Result of one sampled hypothesis check."""

    name: str
    passed: bool
    bound: float
    worst_value: float
    worst_u: float
    worst_s: float
    margin: float
    samples_per_axis: int
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "bound": self.bound,
            "worst_value": self.worst_value,
            "worst_u": self.worst_u,
            "worst_s": self.worst_s,
            "margin": self.margin,
            "samples_per_axis": self.samples_per_axis,
            "note": self.note,
        }


def _lattice_extremum(f, u_lo, u_hi, s_lo, s_hi, m, mode, zoom_rounds):
    """Extremum of f over [u_lo,u_hi] x [s_lo,s_hi]: lattice scan plus local zoom."""
    pick = np.argmax if mode == "max" else np.argmin
    best_u, best_s, best_v = u_lo, s_lo, None
    for _ in range(zoom_rounds + 1):
        us = np.linspace(u_lo, u_hi, m)
        ss = np.linspace(s_lo, s_hi, m)
        U, S = np.meshgrid(us, ss, indexing="ij")
        F = np.asarray(f(U, S), dtype=np.float64)
        if not np.all(np.isfinite(F)):
            raise ValueError("nonlinearity is not finite on the sampled box")
        flat = int(pick(F))
        i, j = np.unravel_index(flat, F.shape)
        best_u, best_s, best_v = float(us[i]), float(ss[j]), float(F[i, j])
        du = (u_hi - u_lo) / (m - 1)
        ds = (s_hi - s_lo) / (m - 1)
        u_lo, u_hi = max(best_u - du, u_lo), min(best_u + du, u_hi)
        s_lo, s_hi = max(best_s - ds, s_lo), min(best_s + ds, s_hi)
    return best_v, best_u, best_s


def check_H1(
    f,
    k1: float,
    M: float,
    gamma: float,
    p,
    samples_per_axis: int = DEFAULT_SAMPLES_PER_AXIS,
    rel_tol: float = 1e-10,
    zoom_rounds: int = 2,
) -> HypothesisCheck:
    """Sampled ceiling hypothesis: 0 <= f <= k1 * M^(p-1) on [0,M] x [0,gamma*M]."""
    if M <= 0 or gamma <= 0:
        raise ValueError("M and gamma must be positive")
    pv = as_exponent(p).p
    bound = k1 * M ** (pv - 1.0)
    worst, wu, ws = _lattice_extremum(
        f, 0.0, M, 0.0, gamma * M, samples_per_axis, "max", zoom_rounds
    )
    low, lu, ls = _lattice_extremum(
        f, 0.0, M, 0.0, gamma * M, samples_per_axis, "min", zoom_rounds
    )
    margin = bound - worst
    passed = margin >= -rel_tol * bound and low >= -rel_tol * bound
    note = "" if low >= -rel_tol * bound else f"negative value {low} at ({lu}, {ls})"
    return HypothesisCheck(
        name="H1",
        passed=bool(passed),
        bound=float(bound),
        worst_value=float(worst),
        worst_u=wu,
        worst_s=ws,
        margin=float(margin),
        samples_per_axis=samples_per_axis,
        note=note or "sampled verification",
    )


def check_H2(
    f,
    k2: float,
    delta: float,
    M: float,
    gamma: float,
    p,
    samples_per_axis: int = DEFAULT_SAMPLES_PER_AXIS,
    rel_tol: float = 1e-10,
    zoom_rounds: int = 2,
) -> HypothesisCheck:
    """Sampled floor hypothesis: f >= k2 * delta^(p-1) on [delta,M] x [0,gamma*M]."""
    if not 0.0 < delta < M:
        raise ValueError("need 0 < delta < M")
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    pv = as_exponent(p).p
    bound = k2 * delta ** (pv - 1.0)
    worst, wu, ws = _lattice_extremum(
        f, delta, M, 0.0, gamma * M, samples_per_axis, "min", zoom_rounds
    )
    margin = worst - bound
    return HypothesisCheck(
        name="H2",
        passed=bool(margin >= -rel_tol * bound),
        bound=float(bound),
        worst_value=float(worst),
        worst_u=wu,
        worst_s=ws,
        margin=float(margin),
        samples_per_axis=samples_per_axis,
        note="sampled verification",
    )


def check_H3(
    f,
    growth: Callable,
    p,
    u_max: float,
    s_max: float,
    samples_per_axis: int = DEFAULT_SAMPLES_PER_AXIS,
    rel_tol: float = 1e-10,
) -> HypothesisCheck:
    """Sampled growth hypothesis: f(u, s) / (1 + s^p) <= growth(u).

    A global growth condition is not decidable by sampling, so the result
    is explicitly labelled as verified on the sampled box only.
    """
    if u_max <= 0 or s_max <= 0:
        raise ValueError("box bounds must be positive")
    pv = as_exponent(p).p
    us = np.linspace(0.0, u_max, samples_per_axis)
    ss = np.linspace(0.0, s_max, samples_per_axis)
    U, S = np.meshgrid(us, ss, indexing="ij")
    F = np.asarray(f(U, S), dtype=np.float64)
    cap = np.asarray(growth(U), dtype=np.float64)
    if not (np.all(np.isfinite(F)) and np.all(np.isfinite(cap))):
        raise ValueError("nonlinearity or growth bound not finite on the sampled box")
    ratio = F / (1.0 + S**pv)
    slack = cap - ratio
    flat = int(np.argmin(slack))
    i, j = np.unravel_index(flat, slack.shape)
    margin = float(slack[i, j])
    scale = max(float(np.max(np.abs(cap))), 1e-300)
    return HypothesisCheck(
        name="H3",
        passed=bool(margin >= -rel_tol * scale),
        bound=float(cap[i, j]),
        worst_value=float(ratio[i, j]),
        worst_u=float(us[i]),
        worst_s=float(ss[j]),
        margin=margin,
        samples_per_axis=samples_per_axis,
        note="verified on sampled box only",
    )
