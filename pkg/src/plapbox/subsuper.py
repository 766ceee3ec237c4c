"""Ordered sub/super-solution pairs on an outer ball and their verification.

The sub-solution is the radial solution on the inner ball extended by
zero; the super-solution is the normalized constant-load profile on the
outer ball scaled to height M. Verification checks the ordering, the
comparison-principle premise, and the quotient condition, each with
explicit signed margins.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import ProblemConstants, k1_ball_closed
from .grids import RadialGrid, as_exponent, phi_p
from .profiles import RadialProfile
from .weights import RadialWeight

# a.e. ordering is approximated by grid ordering with this margin tolerance
MARGIN_TOL = 1e-12


def build_subsolution(
    u_inner: RadialProfile,
    R: float,
    grid: RadialGrid | None = None,
    boundary_tol: float = 1e-8,
) -> RadialProfile:
    """Extend an inner-ball profile by zero onto the ball of radius R.

    The inner profile must vanish at its own boundary (within
    ``boundary_tol``) so the extension is continuous.
    """
    rho = u_inner.grid.rho
    if R < rho * (1.0 - 1e-12):
        raise ValueError(f"outer radius {R} is smaller than the inner radius {rho}")
    if abs(float(u_inner.u[-1])) > boundary_tol:
        raise ValueError(
            f"inner profile does not vanish at its boundary: u(rho)={u_inner.u[-1]:.3e}"
        )
    if np.any(u_inner.u < -boundary_tol):
        raise ValueError("inner profile must be nonnegative")
    if grid is None:
        grid = u_inner.grid if R == rho else RadialGrid(R, u_inner.grid.n)
    if grid == u_inner.grid:
        return RadialProfile(grid=grid, u=u_inner.u.copy(), du=u_inner.du.copy())
    u = np.zeros(grid.n)
    du = np.zeros(grid.n)
    inside = grid.nodes <= rho
    u[inside] = np.interp(grid.nodes[inside], u_inner.grid.nodes, u_inner.u)
    du[inside] = np.interp(grid.nodes[inside], u_inner.grid.nodes, u_inner.du)
    return RadialProfile(grid=grid, u=u, du=du)


def build_supersolution(
    M: float, p, N: int, R: float, omega_sup: float, grid: RadialGrid | None = None
) -> RadialProfile:
    """Height-M multiple of the normalized constant-load profile on the R-ball.

    Closed form M * (1 - (r/R)^(p/(p-1))); its slope-to-height quotient is
    exactly p/((p-1) R), independent of N and of the load omega_sup.
    """
    if M <= 0 or R <= 0 or omega_sup <= 0:
        raise ValueError("M, R and omega_sup must be positive")
    pe = as_exponent(p)
    if grid is None:
        grid = RadialGrid(R)
    if abs(grid.rho - R) > 1e-12 * max(1.0, R):
        raise ValueError("grid radius does not match R")
    e = pe.p_conj
    scaled = grid.nodes / R
    u = M * (1.0 - scaled**e)
    du = -(M * e / R) * scaled ** (e - 1.0)
    return RadialProfile(grid=grid, u=u, du=du)


@dataclass(frozen=True)
class SubSuperPair:
    """An ordered candidate pair on a shared outer grid.

    ``sub_source`` keeps the inner-ball solution on its own grid; the
    premise check runs there, against the inner weight.
    """

    rho: float
    R: float
    M: float
    sub: RadialProfile
    super: RadialProfile
    sub_source: RadialProfile
    consts: ProblemConstants
    k1_outer: float
    omega_sup: float


def build_pair(
    u_inner: RadialProfile,
    consts: ProblemConstants,
    M: float,
    R: float,
    omega_sup: float = 1.0,
    grid: RadialGrid | None = None,
) -> SubSuperPair:
    """Assemble the pair from an inner solution and the outer ball data."""
    if grid is None:
        grid = u_inner.grid if R == consts.rho else RadialGrid(R, u_inner.grid.n)
    sub = build_subsolution(u_inner, R, grid=grid)
    sup = build_supersolution(M, consts.p, consts.N, R, omega_sup, grid=grid)
    return SubSuperPair(
        rho=consts.rho,
        R=float(R),
        M=float(M),
        sub=sub,
        super=sup,
        sub_source=u_inner,
        consts=consts,
        k1_outer=k1_ball_closed(consts.p, consts.N, R, omega_sup),
        omega_sup=float(omega_sup),
    )


def _deriv_order4(values: np.ndarray, h: float) -> np.ndarray:
    """Fourth-order finite difference; exact for quartic polynomials."""
    n = values.shape[0]
    if n < 5:
        raise ValueError("need at least 5 nodes")
    out = np.empty(n)
    f = values
    out[2:-2] = (f[:-4] - 8.0 * f[1:-3] + 8.0 * f[3:-1] - f[4:]) / (12.0 * h)
    out[0] = (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]) / (12.0 * h)
    out[1] = (-3 * f[0] - 10 * f[1] + 18 * f[2] - 6 * f[3] + f[4]) / (12.0 * h)
    out[-2] = (3 * f[-1] + 10 * f[-2] - 18 * f[-3] + 6 * f[-4] - f[-5]) / (12.0 * h)
    out[-1] = (25 * f[-1] - 48 * f[-2] + 36 * f[-3] - 16 * f[-4] + 3 * f[-5]) / (12.0 * h)
    return out


def supersolution_ode_residual(
    profile: RadialProfile, p, N: int, k1: float, M: float, omega_sup: float
) -> float:
    """Relative defect of -(r^{N-1} phi_p(u'))' = r^{N-1} k1 M^(p-1) omega_sup."""
    pe = as_exponent(p)
    nodes = profile.grid.nodes
    flux = nodes ** (N - 1) * phi_p(profile.du, pe)
    dflux = _deriv_order4(flux, profile.grid.h)
    rhs = nodes ** (N - 1) * (k1 * M ** (pe.p - 1.0) * omega_sup)
    scale = float(np.max(rhs))
    return float(np.max(np.abs(dflux + rhs)) / scale)


@dataclass(frozen=True)
class PairReport:
    """Signed margins of the three pair checks plus diagnostics."""

    ordered_ok: bool
    ordering_margin: float
    premise_ok: bool
    premise_margin: float
    quotient_ok: bool
    quotient_value: float
    quotient_margin: float
    ode_residual: float
    ode_ok: bool
    k1_monotone_ok: bool
    interior_critical_nodes: int
    passed: bool

    def to_dict(self) -> dict:
        return {
            "ordered_ok": self.ordered_ok,
            "ordering_margin": self.ordering_margin,
            "premise_ok": self.premise_ok,
            "premise_margin": self.premise_margin,
            "quotient_ok": self.quotient_ok,
            "quotient_value": self.quotient_value,
            "quotient_margin": self.quotient_margin,
            "ode_residual": self.ode_residual,
            "ode_ok": self.ode_ok,
            "k1_monotone_ok": self.k1_monotone_ok,
            "interior_critical_nodes": self.interior_critical_nodes,
            "passed": self.passed,
        }


def verify_pair(
    pair: SubSuperPair,
    f,
    w: RadialWeight,
    margin_tol: float = MARGIN_TOL,
    ode_tol: float = 1e-8,
) -> PairReport:
    """Check ordering, comparison premise, and quotient condition.

    (a) sub <= super at every shared node;
    (b) w(r) * f(u, |u'|) <= k1_outer * M^(p-1) * omega_sup on the inner
        ball (the premise that lets the comparison principle order the
        pair);
    (c) the super-solution quotient ||u'||/||u|| stays below gamma of the
        inner ball.

    Margins are signed; a check passes when its margin >= -margin_tol
    (grid ordering stands in for a.e. ordering at that tolerance).
    """
    pe = as_exponent(pair.consts.p)
    if w.grid != pair.sub_source.grid:
        raise ValueError("weight must live on the inner solution grid")

    ordering_margin = float(np.min(pair.super.u - pair.sub.u))

    fv = np.asarray(f(pair.sub_source.u, np.abs(pair.sub_source.du)), dtype=np.float64)
    lhs = w.samples * fv
    rhs = pair.k1_outer * pair.M ** (pe.p - 1.0) * pair.omega_sup
    premise_margin = float(rhs - np.max(lhs))

    quotient = pair.super.sup_du / pair.super.sup_u
    quotient_margin = float(pair.consts.gamma_rho - quotient)

    ode_residual = supersolution_ode_residual(
        pair.super, pe, pair.consts.N, pair.k1_outer, pair.M, pair.omega_sup
    )

    inner = pair.sub_source
    strict_inside = (inner.grid.nodes > 0) & (inner.grid.nodes < inner.grid.rho)
    crit_scale = max(inner.sup_du, 1e-300)
    critical = int(np.count_nonzero(np.abs(inner.du[strict_inside]) <= 1e-12 * crit_scale))

    ordered_ok = ordering_margin >= -margin_tol
    premise_ok = premise_margin >= -margin_tol * max(1.0, rhs)
    quotient_ok = quotient_margin >= -margin_tol * max(1.0, pair.consts.gamma_rho)
    return PairReport(
        ordered_ok=bool(ordered_ok),
        ordering_margin=ordering_margin,
        premise_ok=bool(premise_ok),
        premise_margin=premise_margin,
        quotient_ok=bool(quotient_ok),
        quotient_value=float(quotient),
        quotient_margin=quotient_margin,
        ode_residual=ode_residual,
        ode_ok=bool(ode_residual <= ode_tol),
        k1_monotone_ok=bool(pair.k1_outer <= pair.consts.k1 * (1.0 + 1e-9)),
        interior_critical_nodes=critical,
        passed=bool(ordered_ok and premise_ok and quotient_ok),
    )
