"""Box-hypothesis checks and the closed-form family analysis."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from plapbox import (
    analyze_lambda_family,
    check_H1,
    check_H2,
    check_H3,
    eval_G,
    eval_H,
    lambda_family,
)

# the worked benchmark: p=2, q=1.5, mu=2, k1=6, k2=81/4
BENCH = dict(p=2.0, q_exp=1.5, mu=2.0, k1=6.0, k2=20.25)


def brute_force_h_minimum(p, q_exp, mu):
    """Independent minimizer of H: log-spaced scan plus ternary refinement."""
    grid = np.logspace(-6, 6, 20001)
    vals = eval_H(grid, p, q_exp, mu)
    i = int(np.argmin(vals))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
    for _ in range(200):
        m1 = lo + (hi - lo) / 3
        m2 = hi - (hi - lo) / 3
        if eval_H(m1, p, q_exp, mu) < eval_H(m2, p, q_exp, mu):
            hi = m2
        else:
            lo = m1
    return 0.5 * (lo + hi)


class TestEvalHG:
    def test_h_at_one(self):
        assert eval_H(1.0, 2.0, 1.5, 2.0) == pytest.approx(1.0 + 2.0**2)

    def test_g_at_one(self):
        assert eval_G(1.0, 2.0, 1.5) == pytest.approx(1.0)

    def test_h_worked_value(self):
        # 0.25^{-0.5} * (1 + 4 * 0.0625) = 2 * 1.25
        assert eval_H(0.25, 2.0, 1.5, 2.0) == pytest.approx(2.5)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            eval_H(0.0, 2.0, 1.5, 2.0)
        with pytest.raises(ValueError):
            eval_G(-1.0, 2.0, 1.5)

    @given(
        x=st.floats(min_value=1e-3, max_value=1e3),
        p=st.sampled_from([2.0, 3.0]),
        q=st.sampled_from([1.2, 1.5, 1.9]),
        mu=st.floats(min_value=0.1, max_value=10.0),
    )
    @settings(max_examples=200, deadline=None)
    def test_g_below_h(self, x, p, q, mu):
        assert eval_G(x, p, q) <= eval_H(x, p, q, mu) * (1 + 1e-12)

    def test_h_blows_up_at_both_ends(self):
        report = analyze_lambda_family(**BENCH)
        h_star = report.H_at_Mstar
        assert eval_H(1e-8, 2.0, 1.5, 2.0) > 1e3 * h_star
        assert eval_H(1e8, 2.0, 1.5, 2.0) > 1e3 * h_star

    def test_h_unimodal_on_dense_grid(self):
        xs = np.linspace(1e-3, 10.0, 20000)
        vals = eval_H(xs, 2.0, 1.5, 2.0)
        drops = np.diff(vals) < 0
        # nonincreasing then nondecreasing: the sign changes exactly once
        assert np.count_nonzero(np.diff(drops.astype(int)) != 0) == 1


class TestAnalyzeLambdaFamily:
    def test_worked_benchmark_values(self):
        rep = analyze_lambda_family(**BENCH)
        assert rep.M_star == pytest.approx(0.2886751346, abs=1e-9)
        assert rep.H_at_Mstar == pytest.approx(2.4816129576, abs=1e-8)
        assert rep.lambda_star == pytest.approx(2.4177823466, abs=1e-8)
        assert rep.delta_lambda == pytest.approx(0.0142555622, abs=1e-9)

    def test_m_star_matches_brute_force_minimizer(self):
        rep = analyze_lambda_family(**BENCH)
        # a value-based minimizer can only localize M* to ~sqrt(eps/H'')
        assert rep.M_star == pytest.approx(brute_force_h_minimum(2.0, 1.5, 2.0), rel=5e-8)
        # and lambda* * H(M*) = k1 by construction
        assert rep.lambda_star * rep.H_at_Mstar == pytest.approx(6.0, rel=1e-12)

    def test_critical_point_identity(self):
        rep = analyze_lambda_family(p=3.0, q_exp=2.0, mu=1.7, k1=1.0, k2=2.0)
        assert rep.mu**rep.p * rep.M_star**rep.p == pytest.approx(3.0 / 2.0 - 1.0, abs=1e-12)

    def test_h_derivative_vanishes_at_m_star(self):
        rep = analyze_lambda_family(**BENCH)
        eps = 1e-7
        deriv = (
            eval_H(rep.M_star + eps, 2.0, 1.5, 2.0) - eval_H(rep.M_star - eps, 2.0, 1.5, 2.0)
        ) / (2 * eps)
        assert abs(deriv) < 1e-6

    def test_delta_cap_strictly_below_m_star(self):
        rep = analyze_lambda_family(**BENCH)
        cap = rep.M_star * (1.5 / 2.0) ** (1.0 / 0.5)
        assert rep.delta_cap == pytest.approx(cap, rel=1e-12)
        assert rep.delta_lambda < cap < rep.M_star
        assert cap == pytest.approx(0.1623797632, abs=1e-9)

    def test_delta_monotone_in_lambda(self):
        rep0 = analyze_lambda_family(**BENCH)
        lams = np.linspace(rep0.lambda_star / 10, rep0.lambda_star, 10)
        deltas = [analyze_lambda_family(**BENCH, lam=l).delta_lambda for l in lams]
        assert np.all(np.diff(deltas) > 0)

    def test_rejects_bad_exponents(self):
        with pytest.raises(ValueError):
            analyze_lambda_family(p=2.0, q_exp=2.5, mu=1.0, k1=1.0, k2=2.0)
        with pytest.raises(ValueError):
            analyze_lambda_family(p=2.0, q_exp=1.0, mu=1.0, k1=1.0, k2=2.0)

    def test_rejects_lambda_beyond_star(self):
        rep = analyze_lambda_family(**BENCH)
        with pytest.raises(ValueError):
            analyze_lambda_family(**BENCH, lam=rep.lambda_star * 1.001)


class TestCheckH1:
    def test_boundary_equality_passes(self):
        f = lambda u, s: np.full_like(np.asarray(u, float), 6.0 * 1.0)
        rep = check_H1(f, k1=6.0, M=1.0, gamma=2.0, p=2.0)
        assert rep.passed and abs(rep.margin) < 1e-9

    def test_double_ceiling_fails_with_margin(self):
        bound = 6.0
        f = lambda u, s: np.full_like(np.asarray(u, float), 2.0 * bound)
        rep = check_H1(f, k1=6.0, M=1.0, gamma=2.0, p=2.0)
        assert not rep.passed
        assert rep.margin == pytest.approx(-bound)

    def test_family_passes_below_lambda_star(self):
        rep = analyze_lambda_family(**BENCH)
        for lam in (rep.lambda_star / 100, rep.lambda_star / 2, 0.9 * rep.lambda_star):
            f = lambda_family(lam, 1.5, 2.0)
            assert check_H1(f, 6.0, rep.M_star, 2.0, 2.0).passed

    def test_family_sharp_at_lambda_star(self):
        rep = analyze_lambda_family(**BENCH)
        f = lambda_family(rep.lambda_star, 1.5, 2.0)
        h1 = check_H1(f, 6.0, rep.M_star, 2.0, 2.0)
        assert h1.passed
        # the worst point is the far corner of the box
        assert h1.worst_u == pytest.approx(rep.M_star)
        assert h1.worst_s == pytest.approx(2.0 * rep.M_star)
        assert abs(h1.margin) < 1e-10 * h1.bound

    @pytest.mark.parametrize("bump", [1e-6, 1e-4])
    def test_family_fails_just_beyond_lambda_star(self, bump):
        rep = analyze_lambda_family(**BENCH)
        f = lambda_family(rep.lambda_star * (1 + bump), 1.5, 2.0)
        assert not check_H1(f, 6.0, rep.M_star, 2.0, 2.0).passed


class TestCheckH2:
    def test_boundary_equality_passes(self):
        level = 20.25 * 0.1
        f = lambda u, s: np.full_like(np.asarray(u, float), level)
        assert check_H2(f, k2=20.25, delta=0.1, M=1.0, gamma=2.0, p=2.0).passed

    def test_zero_f_fails(self):
        f = lambda u, s: np.zeros_like(np.asarray(u, float))
        assert not check_H2(f, k2=20.25, delta=0.1, M=1.0, gamma=2.0, p=2.0).passed

    def test_family_floor_attained_at_lower_corner(self):
        rep = analyze_lambda_family(**BENCH)
        f = lambda_family(rep.lambda_star, 1.5, 2.0)
        h2 = check_H2(f, 20.25, rep.delta_lambda, rep.M_star, 2.0, 2.0)
        assert h2.passed
        assert h2.worst_u == pytest.approx(rep.delta_lambda)
        assert h2.worst_s == pytest.approx(0.0)
        assert abs(h2.margin) < 1e-10 * max(h2.bound, 1.0)

    def test_same_delta_valid_for_larger_lambda(self):
        rep = analyze_lambda_family(**BENCH, lam=1.0)
        for lam in np.linspace(1.0, rep.lambda_star, 5):
            f = lambda_family(lam, 1.5, 2.0)
            assert check_H2(f, 20.25, rep.delta_lambda, rep.M_star, 2.0, 2.0).passed


class TestCheckH3:
    def test_family_growth_equality(self):
        lam = 2.0
        f = lambda_family(lam, 1.5, 2.0)
        rep = check_H3(f, lambda u: lam * np.asarray(u, float) ** 0.5, 2.0, 1.0, 2.0)
        assert rep.passed
        assert rep.note == "verified on sampled box only"

    def test_supercritical_gradient_growth_fails(self):
        f = lambda u, s: np.asarray(s, float) ** 3.0  # grows faster than 1 + s^2
        rep = check_H3(f, lambda u: np.full_like(np.asarray(u, float), 5.0), 2.0, 1.0, 10.0)
        assert not rep.passed

    def test_constant_f_with_matching_bound(self):
        f = lambda u, s: np.full_like(np.asarray(u, float), 3.0)
        rep = check_H3(f, lambda u: np.full_like(np.asarray(u, float), 3.0), 2.0, 1.0, 2.0)
        assert rep.passed
