"""Acceptance criteria 1-9, each at its stated tolerance and runtime budget.

Every test records one PASS/FAIL line, printed in the pytest terminal summary.
"""
import contextlib
import time

import numpy as np
import pytest

from stripemin.energy import PerPeriodObjective, Profile, euler_lagrange_residual, per_period_energy
from stripemin.energy import per_period_gradient
from stripemin.exact_example import (
    constant_solution,
    critical_lambda,
    integro_ode_residual,
    kink_parameters,
    quartic_ode_residual,
)
from stripemin.kernel import single_exponential
from stripemin.local_term import LocalTerm, constant_branch
from stripemin.minimizer import SolverOptions, grid_size, inner_minimize, locate_transition, phase_sweep
from stripemin.reflection import chessboard_campaign, lemma1_campaign, reflect

pytestmark = pytest.mark.acceptance

VEE = LocalTerm("vee")


@pytest.fixture
def criterion(record_acceptance):
    @contextlib.contextmanager
    def run(number, name, budget_s):
        details = []
        start = time.perf_counter()
        try:
            yield details
            elapsed = time.perf_counter() - start
            details.append(f"{elapsed:.1f}s (budget {budget_s:g}s)")
            assert elapsed < budget_s, f"runtime {elapsed:.1f}s exceeds {budget_s}s"
        except BaseException:
            record_acceptance(number, name, False, "; ".join(details))
            raise
        record_acceptance(number, name, True, "; ".join(details))
    return run


def test_criterion_1_critical_coupling(criterion):
    with criterion(1, "critical coupling", 1.0) as info:
        lam_c = critical_lambda()
        info.append(f"lambda_c={lam_c:.12f}")
        assert abs(lam_c - 1.5) <= 1e-9


def test_criterion_2_constant_branch(criterion):
    with criterion(2, "constant branch", 1.0) as info:
        worst = 0.0
        for lam in (0.5, 1.0, 1.5, 3.0):
            expected = (1 / (1 + 2 * lam), 2 * lam / (1 + 2 * lam))
            for got in (constant_solution(lam), constant_branch(VEE, single_exponential(lam))):
                worst = max(worst, *(abs(g - e) for g, e in zip(got, expected)))
        info.append(f"max deviation {worst:.1e}")
        assert worst <= 1e-10


def test_criterion_3_kink_oracle(criterion):
    with criterion(3, "kink oracle", 10.0) as info:
        rng = np.random.default_rng(2024)
        x = np.linspace(0.0, 20.0, 1000)
        quartic = max(quartic_ode_residual(kink_parameters(lam), x)
                      for lam in rng.uniform(1e-3, 10.0, 20))
        xi = np.linspace(0.1, 10.0, 25)
        integro = max(integro_ode_residual(kink_parameters(lam), xi) for lam in (0.5, 1.0, 1.5, 3.0))
        info.append(f"quartic {quartic:.1e}, integro {integro:.1e}")
        assert quartic <= 1e-10
        assert integro <= 1e-6


def test_criterion_4_regime_dichotomy(criterion):
    opts = SolverOptions()
    assert opts.h_target <= 0.02 and opts.t_range[1] >= 60
    with criterion(4, "regime dichotomy", 600.0) as info:
        kernel = single_exponential(1.0)
        low, high = phase_sweep([1.0, 3.0], kernel, VEE, opts)
        info.append(f"lambda=1 {low.regime} e0={low.minimum_energy:.6f}")
        info.append(f"lambda=3 {high.regime} e0={high.minimum_energy:.6f} T*={high.optimal_half_period}")
        assert low.regime == "constant" and abs(low.minimum_energy - 2 / 3) <= 1e-3
        assert high.regime == "periodic" and high.minimum_energy < 6 / 7 - 1e-3
        assert np.isfinite(high.optimal_half_period)
        lo, hi, _ = locate_transition(kernel, VEE, 1.0, 3.0, width=0.05, options=opts)
        info.append(f"transition in [{lo:.5f}, {hi:.5f}]")
        assert 1.35 <= lo < hi <= 1.65


def test_criterion_5_reflection_campaign(criterion):
    with criterion(5, "reflection-positivity campaign", 120.0) as info:
        kernel = single_exponential(1.0)
        rows = lemma1_campaign(42, 100, kernel, VEE) + chessboard_campaign(42, 100, kernel, VEE)
        rel = [r["margin"] / (1 + abs(r["lhs"])) for r in rows]
        info.append(f"{len(rows)} cases, worst relative margin {min(rel):.2e}")
        assert len(rows) == 200
        assert min(rel) >= -1e-8


def test_criterion_6_gradient(criterion):
    with criterion(6, "gradient correctness", 10.0) as info:
        rng = np.random.default_rng(6)
        kernel = single_exponential(1.0)
        worst = 0.0
        for _ in range(50):
            prof = Profile(rng.uniform(0.5, 5.0), rng.uniform(0.05, 0.95, 30))
            obj = PerPeriodObjective(prof.period, prof.n, kernel, VEE)
            g = per_period_gradient(prof, kernel, VEE)
            eye = 1e-6 * np.eye(prof.n)
            fd = np.array([(obj.energy(prof.values + e) - obj.energy(prof.values - e)) / 2e-6
                           for e in eye])
            worst = max(worst, np.max(np.abs(g - fd)) / np.max(np.abs(g)))
        info.append(f"worst relative error {worst:.1e}")
        assert worst <= 1e-6


def test_criterion_7_euler_lagrange_order(criterion):
    with criterion(7, "Euler-Lagrange consistency", 300.0) as info:
        kernel, T = single_exponential(3.0), 2.8
        residuals = []
        for h in (0.04, 0.02, 0.01):
            rep = inner_minimize(T, round(T / h) - 1, kernel, VEE)
            assert rep.converged
            residuals.append(euler_lagrange_residual(rep.profile, kernel, VEE))
        ratios = [residuals[i] / residuals[i + 1] for i in range(2)]
        info.append("residuals " + ", ".join(f"{r:.2e}" for r in residuals)
                    + "; ratios " + ", ".join(f"{r:.2f}" for r in ratios))
        assert min(ratios) >= 3.5


def test_criterion_8_large_period_limit(criterion):
    with criterion(8, "convex large-T limit", 120.0) as info:
        T = 60.0
        rep = inner_minimize(T, grid_size(T, 0.02), single_exponential(1.0), VEE)
        e = rep.energy.total
        info.append(f"e_60={e:.6f}, relative gap {abs(e - 2 / 3) / (2 / 3):.2%}")
        assert rep.converged
        assert abs(e - 2 / 3) <= 0.02 * 2 / 3


def test_criterion_9_exact_symmetries(criterion):
    with criterion(9, "exact symmetries", 60.0) as info:
        rng = np.random.default_rng(9)
        kernel = single_exponential(1.0)
        for _ in range(100):
            prof = Profile(rng.uniform(0.5, 5.0), rng.uniform(-1.0, 1.0, rng.integers(3, 120)))
            assert np.array_equal(reflect(reflect(prof)).values, prof.values)
            assert per_period_energy(reflect(prof), kernel, VEE).total == \
                per_period_energy(prof, kernel, VEE).total
        clamp_checked = 0
        for _ in range(100):
            prof = Profile(rng.uniform(0.5, 5.0), rng.uniform(0.0, 1.5, rng.integers(3, 120)))
            if not np.any(prof.values > 1):
                prof = prof.with_values(np.r_[prof.values[:-1], 1.2])
            assert (per_period_energy(prof.clamped(), kernel, VEE).total
                    <= per_period_energy(prof, kernel, VEE).total)
            clamp_checked += 1
        info.append(f"100 reflection cases exact, {clamp_checked} clamp cases")
