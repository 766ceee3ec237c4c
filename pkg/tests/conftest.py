import numpy as np
import pytest

from plapbox import (
    RadialGrid,
    RadialWeight,
    analyze_lambda_family,
    build_envelopes,
    compute_constants,
    lambda_family,
)


@pytest.fixture(scope="session")
def unit_ball_setup():
    """The unit-ball benchmark: p=2, N=3, rho=1, constant weight.

    Constants come from quadrature (not closed forms) so operator
    identities that must be float-exact stay consistent.
    """
    grid = RadialGrid(1.0, 2049)
    w = RadialWeight.from_constant(1.0, grid)
    consts = compute_constants(w, 2.0, 3, use_closed_form=False)
    return grid, w, consts


@pytest.fixture(scope="session")
def benchmark_family(unit_ball_setup):
    """lambda* family data and envelope box for the benchmark ball."""
    grid, w, consts = unit_ball_setup
    fam = analyze_lambda_family(2.0, 1.5, mu=consts.gamma_rho, k1=consts.k1, k2=consts.k2)
    f = lambda_family(fam.lambda_star, 1.5, 2.0)
    box = build_envelopes(consts, w, fam.delta_lambda, fam.M_star)
    return fam, f, box


def smooth_box_member(box, rng):
    """A random C^1-looking member of the envelope box."""
    from plapbox import RadialProfile

    grid = box.grid
    x = grid.nodes / grid.rho
    coef = rng.uniform(-1.0, 1.0, 6)
    blend = 0.5 + 0.5 * np.tanh(sum(c * np.cos((k + 1) * np.pi * x) for k, c in enumerate(coef)))
    u = box.psi_delta.u + blend * (box.phi_M.u - box.psi_delta.u)
    blend2 = 0.5 + 0.5 * np.tanh(sum(c * np.sin((k + 2) * np.pi * x) for k, c in enumerate(coef)))
    du = (2.0 * blend2 - 1.0) * box.gamma_m
    return RadialProfile(grid=grid, u=u, du=du)
