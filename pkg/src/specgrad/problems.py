"""Smooth unconstrained test problems with analytic gradients.

Twelve classic families from the unconstrained-optimization test-function
collections, each with its standard starting point and an exact gradient.
All objectives/gradients are vectorized numpy expressions, so evaluation cost
stays trivial up to n = 10000.

Families (standard starts in parentheses):

* ``arwhead``         f = sum_{i<n} [(x_i^2 + x_n^2)^2 - 4 x_i + 3]           (ones)
* ``ext_rosenbrock``  f = sum 100 (x_{2i} - x_{2i-1}^2)^2 + (1 - x_{2i-1})^2  (-1.2, 1, ...)
* ``ext_white_holst`` f = sum 100 (x_{2i} - x_{2i-1}^3)^2 + (1 - x_{2i-1})^2  (-1.2, 1, ...)
* ``ext_beale``       paired Beale terms                                      (1, 0.8, ...)
* ``diagonal1``       f = sum exp(x_i) - i x_i                                (1/n, ...)
* ``raydan1``         f = sum (i/10) (exp(x_i) - x_i)                         (ones)
* ``eg2``             f = sum_{i<n} sin(x_1 + x_i^2 - 1) + sin(x_n^2)/2       (ones)
* ``engval1``         f = sum_{i<n} [(x_i^2 + x_{i+1}^2)^2 - 4 x_i + 3]       (2, 2, ...)
* ``fletchcr``        f = sum 100 (x_{i+1} - x_i + 1 - x_i^2)^2               (zeros)
* ``nondquar``        quartic chain + two quadratic end terms                 (1, -1, ...)
* ``ext_himmelblau``  paired Himmelblau terms                                 (ones)
* ``qf1``             f = (1/2) sum i x_i^2, strictly convex quadratic        (ones)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .numkit import FiniteDifferenceSpec, Vector, fd_gradient, norm_inf

# Seed for the reproducible perturbed check points used by gradient audits.
CHECK_POINT_SEED = 20240117


class EvaluationError(RuntimeError):
    """Objective or gradient produced a non-finite value."""

    def __init__(self, problem_name: str, x: Vector, what: str):
        super().__init__(f"{what} of '{problem_name}' is non-finite")
        self.problem_name = problem_name
        self.x = x


@dataclass(frozen=True)
class Problem:
    name: str
    dim: int
    objective: Callable[[Vector], float]
    gradient: Callable[[Vector], Vector]
    start: Vector
    lipschitz_hint: float | None = None


def _arwhead(n: int) -> Problem:
    def f(x):
        t = x[:-1] ** 2 + x[-1] ** 2
        return float(np.sum(t * t - 4.0 * x[:-1] + 3.0))

    def g(x):
        t = x[:-1] ** 2 + x[-1] ** 2
        out = np.empty_like(x)
        out[:-1] = 4.0 * x[:-1] * t - 4.0
        out[-1] = 4.0 * x[-1] * np.sum(t)
        return out

    return Problem("arwhead", n, f, g, np.ones(n))


def _ext_rosenbrock(n: int) -> Problem:
    def f(x):
        u, v = x[0::2], x[1::2]
        return float(np.sum(100.0 * (v - u * u) ** 2 + (1.0 - u) ** 2))

    def g(x):
        u, v = x[0::2], x[1::2]
        r = v - u * u
        out = np.empty_like(x)
        out[0::2] = -400.0 * u * r - 2.0 * (1.0 - u)
        out[1::2] = 200.0 * r
        return out

    start = np.ones(n)
    start[0::2] = -1.2
    return Problem("ext_rosenbrock", n, f, g, start)


def _ext_white_holst(n: int) -> Problem:
    def f(x):
        u, v = x[0::2], x[1::2]
        return float(np.sum(100.0 * (v - u**3) ** 2 + (1.0 - u) ** 2))

    def g(x):
        u, v = x[0::2], x[1::2]
        r = v - u**3
        out = np.empty_like(x)
        out[0::2] = -600.0 * u * u * r - 2.0 * (1.0 - u)
        out[1::2] = 200.0 * r
        return out

    start = np.ones(n)
    start[0::2] = -1.2
    return Problem("ext_white_holst", n, f, g, start)


def _ext_beale(n: int) -> Problem:
    def f(x):
        u, v = x[0::2], x[1::2]
        a = 1.5 - u * (1.0 - v)
        b = 2.25 - u * (1.0 - v * v)
        c = 2.625 - u * (1.0 - v**3)
        return float(np.sum(a * a + b * b + c * c))

    def g(x):
        u, v = x[0::2], x[1::2]
        a = 1.5 - u * (1.0 - v)
        b = 2.25 - u * (1.0 - v * v)
        c = 2.625 - u * (1.0 - v**3)
        out = np.empty_like(x)
        out[0::2] = -2.0 * a * (1.0 - v) - 2.0 * b * (1.0 - v * v) - 2.0 * c * (1.0 - v**3)
        out[1::2] = 2.0 * a * u + 4.0 * b * u * v + 6.0 * c * u * v * v
        return out

    start = np.ones(n)
    start[1::2] = 0.8
    return Problem("ext_beale", n, f, g, start)


def _diagonal1(n: int) -> Problem:
    idx = np.arange(1.0, n + 1.0)

    def f(x):
        return float(np.sum(np.exp(x) - idx * x))

    def g(x):
        return np.exp(x) - idx

    return Problem("diagonal1", n, f, g, np.full(n, 1.0 / n))


def _raydan1(n: int) -> Problem:
    w = np.arange(1.0, n + 1.0) / 10.0

    def f(x):
        return float(np.sum(w * (np.exp(x) - x)))

    def g(x):
        return w * (np.exp(x) - 1.0)

    return Problem("raydan1", n, f, g, np.ones(n))


def _eg2(n: int) -> Problem:
    def f(x):
        return float(np.sum(np.sin(x[0] + x[:-1] ** 2 - 1.0)) + 0.5 * np.sin(x[-1] ** 2))

    def g(x):
        c = np.cos(x[0] + x[:-1] ** 2 - 1.0)
        out = np.zeros_like(x)
        out[: n - 1] = 2.0 * x[: n - 1] * c
        out[0] += np.sum(c)
        out[-1] += x[-1] * np.cos(x[-1] ** 2)
        return out

    return Problem("eg2", n, f, g, np.ones(n))


def _engval1(n: int) -> Problem:
    def f(x):
        t = x[:-1] ** 2 + x[1:] ** 2
        return float(np.sum(t * t - 4.0 * x[:-1] + 3.0))

    def g(x):
        t = x[:-1] ** 2 + x[1:] ** 2
        out = np.zeros_like(x)
        out[:-1] += 4.0 * x[:-1] * t - 4.0
        out[1:] += 4.0 * x[1:] * t
        return out

    return Problem("engval1", n, f, g, np.full(n, 2.0))


def _fletchcr(n: int) -> Problem:
    def f(x):
        r = x[1:] - x[:-1] + 1.0 - x[:-1] ** 2
        return float(100.0 * np.sum(r * r))

    def g(x):
        r = x[1:] - x[:-1] + 1.0 - x[:-1] ** 2
        out = np.zeros_like(x)
        out[:-1] += 200.0 * r * (-1.0 - 2.0 * x[:-1])
        out[1:] += 200.0 * r
        return out

    return Problem("fletchcr", n, f, g, np.zeros(n))


def _nondquar(n: int) -> Problem:
    def f(x):
        q = x[: n - 2] + x[1 : n - 1] + x[-1]
        return float((x[0] - x[1]) ** 2 + (x[-2] + x[-1]) ** 2 + np.sum(q**4))

    def g(x):
        q3 = 4.0 * (x[: n - 2] + x[1 : n - 1] + x[-1]) ** 3
        out = np.zeros_like(x)
        out[: n - 2] += q3
        out[1 : n - 1] += q3
        out[-1] += np.sum(q3)
        out[0] += 2.0 * (x[0] - x[1])
        out[1] -= 2.0 * (x[0] - x[1])
        out[-2] += 2.0 * (x[-2] + x[-1])
        out[-1] += 2.0 * (x[-2] + x[-1])
        return out

    start = np.ones(n)
    start[1::2] = -1.0
    return Problem("nondquar", n, f, g, start)


def _ext_himmelblau(n: int) -> Problem:
    def f(x):
        u, v = x[0::2], x[1::2]
        a = u * u + v - 11.0
        b = u + v * v - 7.0
        return float(np.sum(a * a + b * b))

    def g(x):
        u, v = x[0::2], x[1::2]
        a = u * u + v - 11.0
        b = u + v * v - 7.0
        out = np.empty_like(x)
        out[0::2] = 4.0 * u * a + 2.0 * b
        out[1::2] = 2.0 * a + 4.0 * v * b
        return out

    return Problem("ext_himmelblau", n, f, g, np.ones(n))


def _qf1(n: int) -> Problem:
    idx = np.arange(1.0, n + 1.0)

    def f(x):
        return float(0.5 * np.sum(idx * x * x))

    def g(x):
        return idx * x

    # Hessian is diag(1..n), so the gradient Lipschitz constant is exactly n.
    return Problem("qf1", n, f, g, np.ones(n), lipschitz_hint=float(n))


_BUILDERS: dict[str, Callable[[int], Problem]] = {
    "arwhead": _arwhead,
    "ext_rosenbrock": _ext_rosenbrock,
    "ext_white_holst": _ext_white_holst,
    "ext_beale": _ext_beale,
    "diagonal1": _diagonal1,
    "raydan1": _raydan1,
    "eg2": _eg2,
    "engval1": _engval1,
    "fletchcr": _fletchcr,
    "nondquar": _nondquar,
    "ext_himmelblau": _ext_himmelblau,
    "qf1": _qf1,
}

_EVEN_DIM = {"ext_rosenbrock", "ext_white_holst", "ext_beale", "ext_himmelblau"}

STANDARD_DIMS = (100, 1000, 10000)


def family_names() -> list[str]:
    return list(_BUILDERS)


def problem(name: str, dim: int) -> Problem:
    """Instantiate one family at a given dimension.

    Raises ``KeyError`` for unknown names and ``ValueError`` for dimensions the
    family does not support.
    """
    key = name.lower()
    if key not in _BUILDERS:
        raise KeyError(f"unknown problem '{name}'; known: {', '.join(_BUILDERS)}")
    if dim < 2:
        raise ValueError(f"problem '{key}' needs dimension >= 2, got {dim}")
    if key in _EVEN_DIM and dim % 2 != 0:
        raise ValueError(f"problem '{key}' needs an even dimension, got {dim}")
    return _BUILDERS[key](dim)


def registry(dims=STANDARD_DIMS, names=None) -> list[Problem]:
    """All registered problems instantiated at each requested dimension."""
    names = family_names() if names is None else list(names)
    return [problem(name, d) for name in names for d in dims]


@dataclass
class EvalCounter:
    nf: int = 0
    ng: int = 0


class InstrumentedOracle:
    """Counts every objective/gradient evaluation issued for one run.

    One oracle per (solver, problem) run; ``eval_fg`` charges one of each
    counter. Non-finite results raise :class:`EvaluationError` after the
    counters were charged, so failed trials still show up in NF/NG.
    """

    def __init__(self, prob: Problem):
        self.problem = prob
        self.counter = EvalCounter()

    @property
    def nf(self) -> int:
        return self.counter.nf

    @property
    def ng(self) -> int:
        return self.counter.ng

    def eval_f(self, x: Vector) -> float:
        self.counter.nf += 1
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            val = self.problem.objective(x)
        if not np.isfinite(val):
            raise EvaluationError(self.problem.name, x, "objective")
        return val

    def eval_g(self, x: Vector) -> Vector:
        self.counter.ng += 1
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            grad = self.problem.gradient(x)
        if not np.all(np.isfinite(grad)):
            raise EvaluationError(self.problem.name, x, "gradient")
        return grad

    def eval_fg(self, x: Vector) -> tuple[float, Vector]:
        self.counter.nf += 1
        self.counter.ng += 1
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            val = self.problem.objective(x)
            grad = self.problem.gradient(x)
        if not np.isfinite(val):
            raise EvaluationError(self.problem.name, x, "objective")
        if not np.all(np.isfinite(grad)):
            raise EvaluationError(self.problem.name, x, "gradient")
        return val, grad


def instrumented(prob: Problem) -> InstrumentedOracle:
    return InstrumentedOracle(prob)


@dataclass
class GradientCheckReport:
    problem_name: str
    tol: float
    rel_errors: list[float] = field(default_factory=list)

    @property
    def worst(self) -> float:
        return max(self.rel_errors) if self.rel_errors else 0.0

    @property
    def passed(self) -> bool:
        return all(e <= self.tol for e in self.rel_errors)


def check_points(prob: Problem, count: int = 5, seed: int = CHECK_POINT_SEED) -> list[Vector]:
    """Standard start plus ``count`` seeded Gaussian perturbations of it."""
    rng = np.random.default_rng(seed)
    pts = [prob.start.copy()]
    for _ in range(count):
        pts.append(prob.start + 0.1 * rng.standard_normal(prob.dim))
    return pts


def gradient_check(prob: Problem, points: list[Vector], tol: float) -> GradientCheckReport:
    """Compare the analytic gradient against central differences at each point.

    The relative error is ``|g_analytic - g_fd|_inf / (1 + |g_analytic|_inf)``
    with the difference step scaled as ``1e-6 * (1 + |x|_inf)``.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    report = GradientCheckReport(prob.name, tol)
    for x in points:
        g_a = prob.gradient(x)
        spec = FiniteDifferenceSpec(h=1e-6 * (1.0 + norm_inf(x)))
        g_fd = fd_gradient(prob.objective, x, spec)
        report.rel_errors.append(norm_inf(g_a - g_fd) / (1.0 + norm_inf(g_a)))
    return report
