import math

import numpy as np
import pytest

from specgrad.problems import Problem, problem
from specgrad.solver import (
    CONVERGED,
    EVAL_ERROR,
    ITER_LIMIT,
    LINESEARCH_FAILURE,
    SolverConfig,
    default_config,
    minimize,
    mu_sign_trace,
)


def steepest_descent_iters_qf1(n, eps=1e-8, max_iter=100000):
    """Independent exact-line-search steepest descent on f = 0.5 sum i x_i^2."""
    idx = np.arange(1.0, n + 1.0)
    x = np.ones(n)
    ni = 0
    while np.max(np.abs(idx * x)) > eps and ni < max_iter:
        g = idx * x
        alpha = float(g @ g) / float(g @ (idx * g))
        x = x - alpha * g
        ni += 1
    return ni


class TestConfig:
    def test_method_defaults(self):
        assert (default_config("scgmmwls").wolfe.rho, default_config("scgmmwls").wolfe.sigma) == (
            0.18,
            0.2,
        )
        for method in ("dk", "jian", "m2"):
            cfg = default_config(method)
            assert (cfg.wolfe.rho, cfg.wolfe.sigma) == (0.1, 0.9)

    def test_validation(self):
        cfg = default_config("scgmmwls")
        with pytest.raises(ValueError):
            SolverConfig(cfg.wolfe, cfg.direction, epsilon=0.0)
        with pytest.raises(ValueError):
            SolverConfig(cfg.wolfe, cfg.direction, trace_level="everything")


class TestMinimize:
    def test_qf1_converges_and_beats_10x_steepest_descent(self):
        sd_ni = steepest_descent_iters_qf1(10)
        res = minimize(problem("qf1", 10), default_config("scgmmwls", m=3))
        assert res.status == CONVERGED
        assert res.gnorm_inf_final <= 1e-8
        assert res.ni <= 200
        assert res.ni <= 10 * sd_ni

    def test_constant_function_converges_immediately(self):
        p = Problem("const", 3, lambda x: 42.0, lambda x: np.zeros(3), np.ones(3))
        res = minimize(p, default_config("scgmmwls"))
        assert res.status == CONVERGED
        assert (res.ni, res.nf, res.ng) == (0, 1, 1)

    def test_zero_iteration_budget(self):
        cfg = default_config("scgmmwls", max_iter=0)
        res = minimize(problem("qf1", 5), cfg)
        assert res.status == ITER_LIMIT
        assert res.ni == 0

    def test_eval_error_at_start(self):
        p = Problem("bad", 2, lambda x: math.inf, lambda x: np.zeros(2), np.ones(2))
        res = minimize(p, default_config("scgmmwls"))
        assert res.status == EVAL_ERROR
        assert (res.ni, res.nf, res.ng) == (0, 1, 1)

    def test_linear_objective_reports_linesearch_failure(self):
        p = Problem("lin", 2, lambda x: float(-x.sum()), lambda x: -np.ones(2), np.zeros(2))
        res = minimize(p, default_config("scgmmwls"))
        assert res.status == LINESEARCH_FAILURE
        assert res.ni == 0

    def test_first_direction_is_steepest_descent(self):
        p = problem("ext_himmelblau", 4)
        cfg = default_config("scgmmwls", max_iter=1, trace_level="full")
        res = minimize(p, cfg)
        rec = res.trace[0]
        g0 = p.gradient(p.start)
        d0 = -g0.copy()
        x1 = p.start + rec.alpha * d0
        assert p.objective(x1) == rec.f

    def test_monotone_descent_along_trace(self):
        p = problem("ext_rosenbrock", 20)
        res = minimize(p, default_config("scgmmwls", m=3, trace_level="full"))
        assert res.status == CONVERGED
        f_prev = p.objective(p.start)
        for rec in res.trace:
            assert rec.f <= f_prev + 1e-12 * (1.0 + abs(f_prev))
            f_prev = rec.f

    def test_determinism_bitwise(self):
        cfg = default_config("scgmmwls", m=3, trace_level="full")
        a = minimize(problem("arwhead", 50), cfg)
        b = minimize(problem("arwhead", 50), cfg)
        assert (a.status, a.ni, a.nf, a.ng) == (b.status, b.ni, b.nf, b.ng)
        assert a.f_final == b.f_final
        assert a.gnorm_inf_final == b.gnorm_inf_final
        assert [r.alpha for r in a.trace] == [r.alpha for r in b.trace]
        assert [r.mu for r in a.trace] == [r.mu for r in b.trace]

    def test_counters_match_independent_tally(self):
        p = problem("qf1", 8)
        calls = {"f": 0, "g": 0}

        def f(x):
            calls["f"] += 1
            return p.objective(x)

        def g(x):
            calls["g"] += 1
            return p.gradient(x)

        wrapped = Problem(p.name, p.dim, f, g, p.start, p.lipschitz_hint)
        res = minimize(wrapped, default_config("scgmmwls"))
        assert res.status == CONVERGED
        assert (res.nf, res.ng) == (calls["f"], calls["g"])

    def test_run_result_invariants(self):
        res = minimize(problem("engval1", 30), default_config("scgmmwls"))
        assert res.status == CONVERGED
        assert res.gnorm_inf_final <= 1e-8
        assert res.ni <= 10000

    @pytest.mark.parametrize("method", ["dk", "jian", "m2"])
    def test_baselines_converge_on_qf1(self, method):
        res = minimize(problem("qf1", 10), default_config(method, m=3))
        assert res.status == CONVERGED
        assert res.audit.clean

    def test_zoutendijk_summands_decay(self):
        res = minimize(problem("qf1", 50), default_config("scgmmwls", trace_level="full"))
        assert res.status == CONVERGED
        z = res.audit.zoutendijk
        assert all(np.isfinite(z)) and np.isfinite(sum(z))
        dec = max(1, len(z) // 10)
        assert np.mean(z[-dec:]) < np.mean(z[:dec])

    @pytest.mark.parametrize("c", [1e-3, 1e3])
    def test_invariants_hold_under_objective_scaling(self, c):
        base = problem("ext_rosenbrock", 10)
        scaled = Problem(
            f"scaled_{c}",
            base.dim,
            lambda x: c * base.objective(x),
            lambda x: c * base.gradient(x),
            base.start,
        )
        res = minimize(scaled, default_config("scgmmwls", m=3))
        assert res.status != EVAL_ERROR
        assert res.audit.clean


class TestMuTrace:
    def test_qf1_mu_at_roundoff_scale(self):
        p = problem("qf1", 100)
        cfg = default_config("scgmmwls", m=3, trace_level="full")
        res = minimize(p, cfg)
        assert res.status == CONVERGED
        f_prev = p.objective(p.start)
        for rec in res.trace:
            assert abs(rec.mu) <= 1e-9 * (1.0 + abs(f_prev) + abs(rec.f))
            f_prev = rec.f

    def test_arwhead_first_mu_negative(self):
        trace = mu_sign_trace(
            problem("arwhead", 100), default_config("scgmmwls", m=3), limit=1
        )
        assert trace[0][1] < 0.0

    def test_quartic_first_mu_matches_independent_evaluation(self):
        n = 6
        p = Problem(
            "quartic",
            n,
            lambda x: float(np.sum(x**4)),
            lambda x: 4.0 * x**3,
            np.ones(n),
        )
        cfg = default_config("scgmmwls", m=3, max_iter=1, trace_level="full")
        res = minimize(p, cfg)
        rec = res.trace[0]
        g0 = p.gradient(p.start)
        s = rec.alpha * (-g0.copy())
        x1 = p.start + s
        mu_ind = math.fsum(
            [2.0 * (p.objective(p.start) - p.objective(x1))]
            + [(g0[i] + p.gradient(x1)[i]) * s[i] for i in range(n)]
        )
        assert math.copysign(1.0, rec.mu) == math.copysign(1.0, mu_ind)

    def test_limit_argument(self):
        trace = mu_sign_trace(problem("qf1", 20), default_config("scgmmwls"), limit=5)
        assert len(trace) == 5
        assert [k for k, _ in trace] == [0, 1, 2, 3, 4]
