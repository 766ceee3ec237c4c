"""The integral operator of the radial problem and its fixed-point driver.

A fixed point of

    (Tu)(r) = int_r^rho phi_q( theta^{1-N} int_0^theta s^{N-1} w(s) f(u(s), |u'(s)|) ds ) dtheta

solves the radial boundary value problem. The driver iterates T inside the
envelope box

    Y = { u : psi_delta <= u <= phi_M, |u'| <= Gamma_M },

which T maps into itself whenever the box hypotheses hold for f.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .constants import ProblemConstants, torsion_profile
from .grids import (
    as_exponent,
    phi_q,
    prefix_integral,
    prefix_value_at,
    suffix_integral,
    tail_power_integral,
)
from .profiles import RadialProfile
from .weights import RadialWeight


class ContractViolationError(ValueError):
    """The nonlinearity broke its contract (negative or non-finite values)."""


class BoxViolationError(RuntimeError):
    """A pure operator step left the envelope box.

    This signals that the (delta, M, gamma) hypotheses supplied for f are
    inconsistent: under valid hypotheses the operator maps the box into
    itself.
    """


@dataclass(frozen=True)
class NonlinearitySpec:
    """A nonnegative nonlinearity f(u, s) of value and gradient magnitude.

    ``evaluator`` must be vectorized over numpy arrays of equal shape.
    """

    evaluator: Callable
    description: str = ""

    def __call__(self, u, s):
        return self.evaluator(u, s)


@dataclass(frozen=True)
class BoxY:
    """Envelope box: psi_delta <= u <= phi_M with |u'| <= gamma_m."""

    delta: float
    M: float
    t: float
    psi_delta: RadialProfile
    phi_M: RadialProfile
    gamma_m: np.ndarray

    @property
    def grid(self):
        return self.phi_M.grid


def build_envelopes(
    consts: ProblemConstants,
    w: RadialWeight,
    delta: float,
    M: float,
    profile: RadialProfile | None = None,
) -> BoxY:
    """Assemble the envelope box for the parameters (delta, M).

    phi_M and Gamma_M are the torsion profile scaled to height M; the
    lower envelope equals delta up to the maximizer t and then decays
    along the truncated kernel integral. Requires the compatibility
    condition k2 * delta^(p-1) <= k1 * M^(p-1), without which the
    envelopes cannot be ordered.
    """
    if not (0.0 < delta < M):
        raise ValueError(f"need 0 < delta < M, got delta={delta}, M={M}")
    pe = as_exponent(consts.p)
    N = consts.N
    grid = w.grid
    if abs(grid.rho - consts.rho) > 1e-12 * max(1.0, consts.rho):
        raise ValueError("constants were computed for a different ball radius")
    if consts.k2 * delta ** (pe.p - 1.0) > consts.k1 * M ** (pe.p - 1.0) * (1.0 + 1e-12):
        raise ValueError(
            "incompatible box parameters: k2*delta^(p-1) exceeds k1*M^(p-1), "
            "so no nonlinearity can satisfy both box hypotheses"
        )
    prof = profile if profile is not None else torsion_profile(w, pe, N)
    sup = float(prof.u[0])
    phi = M * prof.u / sup
    dphi = M * prof.du / sup
    gamma_m = np.abs(dphi)

    nodes = grid.nodes
    moments = nodes ** (N - 1) * w.samples
    J = prefix_integral(moments, grid)
    J_t = prefix_value_at(moments, grid, J, consts.t_argmax)
    amp = phi_q(consts.k2 * J_t, pe)
    beta = (1.0 - N) / (pe.p - 1.0)

    psi = np.full(grid.n, float(delta))
    dpsi = np.zeros(grid.n)
    outer = nodes > consts.t_argmax
    psi[outer] = delta * amp * tail_power_integral(grid.rho, beta, nodes[outer])
    dpsi[outer] = -delta * amp * nodes[outer] ** beta

    # continuity of the two branches at t follows from the definition of k2
    joint = delta * amp * tail_power_integral(grid.rho, beta, consts.t_argmax)
    if abs(joint - delta) > 1e-8 * max(1.0, delta):
        raise RuntimeError(
            f"lower envelope discontinuous at t: {joint} vs {delta}; "
            "constants and weight are inconsistent"
        )
    tol = 1e-12 * max(1.0, M)
    if np.any(psi < -tol) or np.any(phi - psi < -tol) or np.any(phi > M + tol):
        raise RuntimeError("envelope ordering 0 <= psi <= phi <= M failed")
    if np.any(gamma_m > consts.gamma_rho * M * (1.0 + 1e-12)):
        raise RuntimeError("gradient envelope exceeds gamma * M")
    return BoxY(
        delta=float(delta),
        M=float(M),
        t=consts.t_argmax,
        psi_delta=RadialProfile(grid=grid, u=psi, du=dpsi),
        phi_M=RadialProfile(grid=grid, u=phi, du=dphi),
        gamma_m=gamma_m,
    )


def _evaluate_f(f, u: RadialProfile) -> np.ndarray:
    vals = np.asarray(f(u.u, np.abs(u.du)), dtype=np.float64)
    if vals.shape != u.u.shape:
        raise ContractViolationError("nonlinearity must return one value per node")
    if not np.all(np.isfinite(vals)):
        raise ContractViolationError("nonlinearity returned non-finite values")
    if np.any(vals < 0.0):
        raise ContractViolationError("nonlinearity returned negative values")
    return vals


def apply_T(u: RadialProfile, f, w: RadialWeight, p, N: int) -> RadialProfile:
    """One application of the integral operator.

    (Tu)(rho) = 0 and (Tu)'(0) = 0 hold exactly; the output is
    nonincreasing because the integrand is nonnegative.
    """
    pe = as_exponent(p)
    grid = u.grid
    if grid != w.grid:
        raise ValueError("profile and weight live on different grids")
    fv = _evaluate_f(f, u)
    moments = grid.nodes ** (N - 1) * w.samples * fv
    J = prefix_integral(moments, grid)
    with np.errstate(divide="ignore", invalid="ignore"):
        arg = J * grid.nodes ** (1.0 - N)
    arg[0] = 0.0
    slope = phi_q(arg, pe)
    return RadialProfile(grid=grid, u=suffix_integral(slope, grid), du=-slope)


def residual(u: RadialProfile, f, w: RadialWeight, p, N: int) -> float:
    """Fixed-point defect ||u - Tu||_inf + ||u' - (Tu)'||_inf."""
    return u.c1_distance(apply_T(u, f, w, p, N))


@dataclass(frozen=True)
class MembershipReport:
    """Worst signed margins of a profile against the box envelopes."""

    lower_margin: float
    upper_margin: float
    gradient_margin: float
    violations: int
    ok: bool

    @property
    def worst_margin(self) -> float:
        return min(self.lower_margin, self.upper_margin, self.gradient_margin)


def check_box_membership(u: RadialProfile, box: BoxY, atol: float = 1e-12) -> MembershipReport:
    """Pointwise check of psi <= u <= phi and |u'| <= Gamma.

    Margins are signed (negative = violated); ``atol`` absorbs roundoff
    when comparing against the envelope samples.
    """
    if u.grid != box.grid:
        raise ValueError("profile and box live on different grids")
    lower = float(np.min(u.u - box.psi_delta.u))
    upper = float(np.min(box.phi_M.u - u.u))
    grad = float(np.min(box.gamma_m - np.abs(u.du)))
    violations = int(
        np.count_nonzero(u.u - box.psi_delta.u < -atol)
        + np.count_nonzero(box.phi_M.u - u.u < -atol)
        + np.count_nonzero(box.gamma_m - np.abs(u.du) < -atol)
    )
    return MembershipReport(
        lower_margin=lower,
        upper_margin=upper,
        gradient_margin=grad,
        violations=violations,
        ok=violations == 0,
    )


@dataclass(frozen=True)
class SolveHistory:
    """Convergence record of one fixed-point run."""

    converged: bool
    iterations: int
    updates: tuple
    final_residual: float
    max_u: float
    max_du: float

    def to_dict(self) -> dict:
        return {
            "converged": self.converged,
            "iterations": self.iterations,
            "final_update": self.updates[-1] if self.updates else 0.0,
            "final_residual": self.final_residual,
            "max_u": self.max_u,
            "max_du": self.max_du,
        }


def solve_fixed_point(
    f,
    box: BoxY,
    w: RadialWeight,
    p,
    N: int,
    tol: float = 1e-10,
    max_iter: int = 10_000,
    damping: float = 1.0,
    membership_atol: float = 1e-12,
) -> tuple[RadialProfile, SolveHistory]:
    """Damped Picard iteration u <- (1 - d) u + d Tu started from phi_M.

    Stops when the C^1 update norm drops below ``tol``. With pure steps
    (damping = 1) every image is asserted to stay in the box; a violation
    raises BoxViolationError since it contradicts the box hypotheses.
    Hitting ``max_iter`` returns the last iterate flagged non-converged
    rather than raising: existence is a fixed-point statement, not a
    convergence guarantee for this iteration.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if not (0.0 < damping <= 1.0):
        raise ValueError("damping must lie in (0, 1]")
    pe = as_exponent(p)
    grid = box.grid
    u = box.phi_M
    updates: list[float] = []
    converged = False
    for _ in range(max_iter):
        image = apply_T(u, f, w, pe, N)
        if damping == 1.0:
            report = check_box_membership(image, box, atol=membership_atol)
            if not report.ok:
                raise BoxViolationError(
                    f"operator image left the box (worst margin {report.worst_margin:.3e}); "
                    "the (delta, M, gamma) hypotheses are inconsistent with f"
                )
            nxt = image
        else:
            nxt = RadialProfile(
                grid=grid,
                u=(1.0 - damping) * u.u + damping * image.u,
                du=(1.0 - damping) * u.du + damping * image.du,
            )
        step = u.c1_distance(nxt)
        updates.append(step)
        u = nxt
        if step <= tol:
            converged = True
            break
    history = SolveHistory(
        converged=converged,
        iterations=len(updates),
        updates=tuple(updates),
        final_residual=residual(u, f, w, pe, N),
        max_u=u.sup_u,
        max_du=u.sup_du,
    )
    return u, history
