"""Torsion-type radial profiles and the box constants derived from them.

For a radial weight w on the ball of radius rho the profile

    phi(r) = int_r^rho ( theta^{1-N} * int_0^theta s^{N-1} w(s) ds )^{1/(p-1)} dtheta

solves the weighted p-Laplace torsion problem with zero boundary data.
Three scalars extracted from it drive everything else:

* k1 = ||phi||_inf^{-(p-1)}          (ceiling constant),
* k2 = [max_r g(r)]^{1-p} with
  g(r) = (int_0^r s^{N-1} w ds)^{1/(p-1)} * int_r^rho theta^{(1-N)/(p-1)} dtheta
                                        (floor constant), and
* gamma = ||phi'||_inf / ||phi||_inf  (slope-to-height quotient).

k1 < k2 always holds for valid weights, and gamma >= 1/rho.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .grids import (
    DEFAULT_GRID_N,
    RadialGrid,
    as_exponent,
    phi_q,
    prefix_integral,
    prefix_value_at,
    suffix_integral,
    tail_power_integral,
)
from .profiles import RadialProfile
from .weights import AmbientWeight, RadialWeight, symmetrize

_INV_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class InvalidWeightError(ValueError):
    """The supplied weight cannot support the construction (e.g. identically zero)."""


class CertificationError(RuntimeError):
    """A certificate was requested for data that fails its premise."""


@dataclass(frozen=True)
class ProblemConstants:
    """The parameter set (p, N, rho, k1, k2, t, gamma) of one ball problem."""

    p: float
    N: int
    rho: float
    k1: float
    k2: float
    t_argmax: float
    gamma_rho: float

    def __post_init__(self):
        if not (self.k1 > 0 and self.k2 > 0):
            raise ValueError("k1 and k2 must be positive")
        if not self.k1 < self.k2:
            raise ValueError(f"k1 {self.k1} must be strictly below k2 {self.k2}")
        if not (0.0 < self.t_argmax < self.rho):
            raise ValueError("argmax t must lie strictly inside (0, rho)")
        if self.gamma_rho * self.rho < 1.0 - 1e-9:
            raise ValueError("gamma violates the gross lower bound 1/rho")

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "N": self.N,
            "rho": self.rho,
            "k1": self.k1,
            "k2": self.k2,
            "t": self.t_argmax,
            "gamma": self.gamma_rho,
        }


@dataclass(frozen=True)
class DomainSummary:
    """Scalar geometry of the domain: inradius, circumradius, convexity, sup of the weight."""

    r_star: float
    R_circ: float
    convex: bool = False
    omega_sup: float = 1.0

    def __post_init__(self):
        if not (0 < self.r_star <= self.R_circ):
            raise ValueError("need 0 < r_star <= R_circ")
        if not self.omega_sup > 0:
            raise ValueError("omega_sup must be positive")


def _moment_samples(w: RadialWeight, N: int) -> np.ndarray:
    return w.grid.nodes ** (N - 1) * w.samples


def _check_dimension(N) -> int:
    if int(N) != N or N < 2:
        raise ValueError(f"dimension must be an integer > 1, got {N}")
    return int(N)


def torsion_profile(w: RadialWeight, p, N: int) -> RadialProfile:
    """Radial solution of the weighted torsion problem on the ball of w.

    Returns the profile together with its derivative
    u'(r) = -phi_q(r^{1-N} * int_0^r s^{N-1} w(s) ds); u(rho) = 0 and
    u'(0) = 0 hold exactly.
    """
    N = _check_dimension(N)
    pe = as_exponent(p)
    grid = w.grid
    moments = _moment_samples(w, N)
    J = prefix_integral(moments, grid)
    with np.errstate(divide="ignore", invalid="ignore"):
        arg = J * grid.nodes ** (1.0 - N)
    arg[0] = 0.0
    slope = phi_q(arg, pe)
    u = suffix_integral(slope, grid)
    return RadialProfile(grid=grid, u=u, du=-slope)


def k1_of_ball(w: RadialWeight, p, N: int) -> float:
    """Ceiling constant ||phi||_inf^{-(p-1)} of the ball problem."""
    pe = as_exponent(p)
    prof = torsion_profile(w, pe, N)
    sup = float(prof.u[0])
    if sup <= 0.0:
        raise InvalidWeightError("torsion profile vanishes; weight has no mass")
    return sup ** (1.0 - pe.p)


def _golden_max(fn, lo: float, hi: float, tol: float = 1e-10) -> float:
    """Golden-section argmax of a unimodal function on [lo, hi]."""
    a, b = float(lo), float(hi)
    c = b - _INV_GOLDEN * (b - a)
    d = a + _INV_GOLDEN * (b - a)
    fc, fd = fn(c), fn(d)
    while (b - a) > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _INV_GOLDEN * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_GOLDEN * (b - a)
            fd = fn(d)
    return 0.5 * (a + b)


def k2_of_ball(w: RadialWeight, p, N: int, refine_tol: float = 1e-10) -> tuple[float, float]:
    """Floor constant and its interior maximizer t.

    The truncated profile height g(r) is scanned on the grid and the
    maximizer refined by golden-section (the coarse scan guards against
    the unproven unimodality of g).
    """
    N = _check_dimension(N)
    pe = as_exponent(p)
    grid = w.grid
    nodes = grid.nodes
    moments = _moment_samples(w, N)
    J = prefix_integral(moments, grid)
    if J[-1] <= 0.0:
        raise InvalidWeightError("weight has no mass on the ball")
    beta = (1.0 - N) / (pe.p - 1.0)
    tails = tail_power_integral(grid.rho, beta, nodes)
    g = np.zeros(grid.n)
    interior = slice(1, grid.n - 1)
    g[interior] = phi_q(J[interior], pe) * tails[interior]
    m = int(np.argmax(g))
    if g[m] <= 0.0:
        raise InvalidWeightError("truncated profile height is identically zero")

    def height(r: float) -> float:
        return phi_q(max(prefix_value_at(moments, grid, J, r), 0.0), pe) * float(
            tail_power_integral(grid.rho, beta, r)
        )

    lo = nodes[m - 1] if m >= 1 else 0.0
    hi = nodes[m + 1] if m + 1 < grid.n else grid.rho
    t = _golden_max(height, lo, hi, tol=refine_tol)
    peak = height(t)
    if not (0.0 < t < grid.rho):
        raise InvalidWeightError("maximizer collapsed to the boundary")
    return peak ** (1.0 - pe.p), t


def gamma_of_ball(w: RadialWeight, p, N: int) -> float:
    """Slope-to-height quotient ||phi'||_inf / ||phi||_inf of the ball problem."""
    prof = torsion_profile(w, p, N)
    sup = float(prof.u[0])
    if sup <= 0.0:
        raise InvalidWeightError("torsion profile vanishes; weight has no mass")
    return prof.sup_du / sup


def compute_constants(
    w: RadialWeight, p, N: int, use_closed_form: bool | None = None
) -> ProblemConstants:
    """All box constants of the ball problem in one pass.

    Weights tagged as constant take the closed-form fast path (exact, so
    equality cases such as gamma = q/rho carry no quadrature error);
    pass ``use_closed_form=False`` to force quadrature.
    """
    pe = as_exponent(p)
    N = _check_dimension(N)
    if use_closed_form is None:
        use_closed_form = w.constant is not None
    if use_closed_form:
        if w.constant is None:
            raise ValueError("closed forms need a weight tagged as constant")
        if w.constant <= 0:
            raise InvalidWeightError("constant weight must be positive")
        rho = w.grid.rho
        return ProblemConstants(
            p=pe.p,
            N=N,
            rho=rho,
            k1=k1_ball_closed(pe, N, rho, w.constant),
            k2=k2_ball_closed(pe, N, rho, w.constant),
            t_argmax=t_argmax_closed_unit(pe, N, rho),
            gamma_rho=gamma_ball_closed(pe, rho),
        )
    prof = torsion_profile(w, pe, N)
    sup = float(prof.u[0])
    if sup <= 0.0:
        raise InvalidWeightError("torsion profile vanishes; weight has no mass")
    k1 = sup ** (1.0 - pe.p)
    k2, t = k2_of_ball(w, pe, N)
    return ProblemConstants(
        p=pe.p,
        N=N,
        rho=w.grid.rho,
        k1=k1,
        k2=k2,
        t_argmax=t,
        gamma_rho=prof.sup_du / sup,
    )


# ---------------------------------------------------------------------------
# closed forms for constant weights


def c_np(p, N: int) -> float:
    """Shape constant in the unit-weight identity k2 = c_np / rho**p."""
    pe = as_exponent(p)
    N = _check_dimension(N)
    pv = pe.p
    if N == pv:
        return pv**pv / (pv - 1.0) ** (pv - 1.0) * math.exp(pv - 1.0)
    return N**pv / (pv - 1.0) ** (pv - 1.0) * (pv / N) ** (pv * (pv - 1.0) / (pv - N))


def k1_ball_closed(p, N: int, R: float, omega_sup: float = 1.0) -> float:
    """k1 of the ball of radius R under the constant weight omega_sup."""
    pe = as_exponent(p)
    N = _check_dimension(N)
    return ((pe.p - 1.0) / pe.p) ** (1.0 - pe.p) * N / (omega_sup * R**pe.p)


def k2_ball_closed(p, N: int, rho: float, omega_sup: float = 1.0) -> float:
    """k2 of the ball of radius rho under the constant weight omega_sup."""
    return c_np(p, N) / (omega_sup * rho ** as_exponent(p).p)


def gamma_ball_closed(p, rho: float) -> float:
    """gamma of any constant-weight ball: p / ((p - 1) * rho)."""
    return as_exponent(p).p_conj / rho


def t_argmax_closed_unit(p, N: int, rho: float) -> float:
    """Interior maximizer of the truncated height for constant weights.

    Maximizing r^{N/(p-1)} * int_r^rho theta^{(1-N)/(p-1)} dtheta gives
    t = rho * (N/p)^{(p-1)/(p-N)} for N != p and t = rho * e^{-(p-1)/p}
    for N = p.
    """
    pe = as_exponent(p)
    N = _check_dimension(N)
    if N == pe.p:
        return rho * math.exp(-(pe.p - 1.0) / pe.p)
    return rho * (N / pe.p) ** ((pe.p - 1.0) / (pe.p - N))


def torsion_profile_closed(p, N: int, R: float, omega_sup: float, r):
    """Constant-weight torsion profile on the ball of radius R.

    ((p-1)/p) * (omega_sup/N)^{1/(p-1)} * (R^{p/(p-1)} - r^{p/(p-1)}).
    """
    pe = as_exponent(p)
    e = pe.p_conj
    r = np.asarray(r, dtype=np.float64)
    out = (pe.p - 1.0) / pe.p * (omega_sup / N) ** (1.0 / (pe.p - 1.0)) * (R**e - r**e)
    return float(out) if out.ndim == 0 else out


def lambda_inf_k2(
    dom: DomainSummary,
    p,
    N: int,
    *,
    ambient: AmbientWeight | None = None,
    candidate_balls: Sequence[tuple] | None = None,
    grid_n: int = DEFAULT_GRID_N,
    directions: int | None = None,
) -> float:
    """Infimum of k2 over balls inside the domain, or an upper bound for it.

    With a constant weight the infimum is exact: c_np / (omega_sup * r*^p),
    attained at the largest inscribed ball. For a general ambient weight
    the returned value is the minimum over the supplied candidate balls
    ``(center, radius)`` and is only an upper bound on the true infimum.
    """
    pe = as_exponent(p)
    N = _check_dimension(N)
    if ambient is None:
        return k2_ball_closed(pe, N, dom.r_star, dom.omega_sup)
    if not candidate_balls:
        raise ValueError("a non-constant weight needs candidate balls to scan")
    best = math.inf
    for center, radius in candidate_balls:
        if radius > dom.r_star * (1.0 + 1e-12):
            raise ValueError(
                f"candidate ball radius {radius} exceeds the inradius {dom.r_star}"
            )
        w = symmetrize(ambient, center, radius, RadialGrid(radius, grid_n), directions)
        k2, _ = k2_of_ball(w, pe, N)
        best = min(best, k2)
    return best


def select_rho(
    dom: DomainSummary,
    p,
    N: int,
    omega_constant: bool,
    strategy: str = "circumscribed-ball",
) -> tuple[float, str]:
    """Ball radius guaranteeing the super-solution quotient condition.

    circumscribed-ball: the outer domain is the ball of radius R_circ; the
    quotient there is q/R with q = p/(p-1), so rho = r* works when
    r* <= R/q (case i) and rho = R/q otherwise (case ii). A constant
    weight always admits rho = r*.

    convex-domain: the outer domain is the (convex) domain itself; a
    maximum-principle bound on the quotient yields rho = r*/(q * N^{1/p}),
    improved to r*/N^{1/p} for constant weights. Requires dom.convex.
    """
    pe = as_exponent(p)
    N = _check_dimension(N)
    q = pe.p_conj
    if strategy == "circumscribed-ball":
        if omega_constant:
            return dom.r_star, "circumscribed:constant-weight"
        if dom.r_star <= dom.R_circ / q:
            return dom.r_star, "circumscribed:(i)"
        return dom.R_circ / q, "circumscribed:(ii)"
    if strategy == "convex-domain":
        if not dom.convex:
            raise ValueError("convex-domain strategy requires a convex domain flag")
        root = N ** (1.0 / pe.p)
        if omega_constant:
            return dom.r_star / root, "convex:constant-weight"
        return dom.r_star / (q * root), "convex:general"
    raise ValueError(f"unknown strategy {strategy!r}")


@dataclass(frozen=True)
class PayneReport:
    """Margins of the maximum-principle certificate for a torsion profile."""

    sup_grad: float
    grad_bound: float
    grad_margin: float
    functional_argmax_radius: float
    max_at_center: bool
    premise_residual: float
    passed: bool


def payne_philippin_check(
    profile: RadialProfile, p, N: int, residual_tol: float = 1e-6
) -> PayneReport:
    """Certify ||psi'||_inf <= (q * ||psi||_inf)^{1/p} for a unit-load profile.

    The premise (that the profile solves the unit-load radial problem) is
    checked by rebuilding the profile; a premise residual above
    ``residual_tol`` refuses to certify. Also locates the maximum of the
    gradient functional 2*((p-1)/p)*|psi'|^p + 2*psi, which must sit at
    the center for convex domains.
    """
    pe = as_exponent(p)
    N = _check_dimension(N)
    reference = torsion_profile(RadialWeight.from_constant(1.0, profile.grid), pe, N)
    premise_residual = profile.c1_distance(reference)
    if premise_residual > residual_tol:
        raise CertificationError(
            f"profile is not a unit-load torsion solution (residual {premise_residual:.3e})"
        )
    sup_u = profile.sup_u
    sup_grad = profile.sup_du
    bound = (pe.p_conj * sup_u) ** (1.0 / pe.p)
    functional = 2.0 * (pe.p - 1.0) / pe.p * np.abs(profile.du) ** pe.p + 2.0 * profile.u
    idx = int(np.argmax(functional))
    max_at_center = idx == 0
    passed = bool(sup_grad <= bound * (1.0 + 1e-12)) and max_at_center
    return PayneReport(
        sup_grad=sup_grad,
        grad_bound=float(bound),
        grad_margin=float(bound - sup_grad),
        functional_argmax_radius=float(profile.grid.nodes[idx]),
        max_at_center=max_at_center,
        premise_residual=float(premise_residual),
        passed=passed,
    )
