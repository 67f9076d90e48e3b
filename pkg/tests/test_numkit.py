import numpy as np
import pytest

from specgrad.numkit import (
    FiniteDifferenceSpec,
    as_vector,
    axpy,
    dot,
    fd_gradient,
    fd_hessian_action,
    norm2,
    norm_inf,
    scale,
)


def vec(*vals):
    return np.array(vals, dtype=float)


class TestDot:
    def test_direct_sum(self):
        assert dot(vec(1, 2), vec(3, 4)) == 11.0

    def test_norm_squared_identity(self):
        u = vec(0.5, -0.5)
        assert dot(u, u) == 0.5

    def test_orthogonality(self):
        assert dot(vec(1, 0, 0), vec(0, 1, 0)) == 0.0

    def test_symmetry_exact(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            u = rng.standard_normal(31)
            v = rng.standard_normal(31)
            assert dot(u, v) == dot(v, u)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            dot(vec(1, 2), vec(1, 2, 3))


class TestNormsAxpy:
    def test_norm2(self):
        assert norm2(vec(3, 4)) == 5.0

    def test_norm_inf(self):
        assert norm_inf(vec(1, -3, 2)) == 3.0

    def test_norm2_squared_matches_dot(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            u = rng.standard_normal(17)
            assert norm2(u) ** 2 == pytest.approx(dot(u, u), rel=1e-14)

    def test_axpy(self):
        np.testing.assert_array_equal(axpy(2.0, vec(1, 1), vec(0, -1)), vec(2, 1))

    def test_axpy_length_mismatch(self):
        with pytest.raises(ValueError):
            axpy(1.0, vec(1, 2, 3), vec(1))

    def test_scale(self):
        np.testing.assert_array_equal(scale(-2.0, vec(1, -1)), vec(-2, 2))


class TestAsVector:
    def test_accepts_lists(self):
        v = as_vector([1, 2, 3])
        assert v.dtype == np.float64 and v.shape == (3,)

    @pytest.mark.parametrize("bad", [[], [[1.0, 2.0]], [1.0, np.nan], [1.0, np.inf]])
    def test_rejects_invalid(self, bad):
        with pytest.raises(ValueError):
            as_vector(bad)


class TestFiniteDifference:
    def test_spec_requires_positive_h(self):
        with pytest.raises(ValueError):
            FiniteDifferenceSpec(h=0.0)

    def test_gradient_square(self):
        f = lambda v: float(v[0] ** 2)
        g = fd_gradient(f, vec(1.0), FiniteDifferenceSpec(h=1e-5))
        assert g[0] == pytest.approx(2.0, abs=1e-8)

    def test_gradient_cube(self):
        # central-difference truncation is h^2 f'''/6 = (1e-4)^2 * 6/6 = 1e-8
        f = lambda v: float(v[0] ** 3)
        g = fd_gradient(f, vec(1.0), FiniteDifferenceSpec(h=1e-4))
        assert g[0] == pytest.approx(3.0, abs=1e-6)

    def test_gradient_constant(self):
        f = lambda v: 4.25
        g = fd_gradient(f, vec(0.3, -0.7, 2.0), FiniteDifferenceSpec(h=1e-6))
        np.testing.assert_array_equal(g, np.zeros(3))

    def test_hessian_action_square(self):
        f = lambda v: float(v[0] ** 2)
        val = fd_hessian_action(f, vec(0.0), vec(1.0), FiniteDifferenceSpec(h=1e-4))
        assert val == pytest.approx(2.0, abs=1e-6)

    def test_hessian_action_cube(self):
        # s^2 * 6x = 0.25 * 6 at x = 1
        f = lambda v: float(v[0] ** 3)
        val = fd_hessian_action(f, vec(1.0), vec(0.5), FiniteDifferenceSpec(h=1e-4))
        assert val == pytest.approx(1.5, abs=1e-5)

    def test_hessian_action_linear(self):
        # h large enough that cancellation roundoff eps/h^2 stays below 1e-8
        f = lambda v: float(3.0 * v[0] - v[1])
        val = fd_hessian_action(f, vec(1.0, 2.0), vec(0.4, -0.3), FiniteDifferenceSpec(h=1e-2))
        assert val == pytest.approx(0.0, abs=1e-8)

    def test_hessian_action_h_independent_on_quadratics(self):
        rng = np.random.default_rng(3)
        a = rng.standard_normal((4, 4))
        hess = a @ a.T + np.eye(4)
        f = lambda v: float(0.5 * v @ hess @ v)
        x = rng.standard_normal(4)
        s = rng.standard_normal(4)
        exact = float(s @ hess @ s)
        for h in (1e-1, 1e-2, 1e-3, 1e-4):
            val = fd_hessian_action(f, x, s, FiniteDifferenceSpec(h=h))
            assert val == pytest.approx(exact, rel=1e-6)

    @pytest.mark.filterwarnings("ignore:overflow")
    def test_non_finite_evaluation_raises(self):
        f = lambda v: float(np.exp(v[0]))
        with pytest.raises(ArithmeticError):
            fd_gradient(f, vec(1000.0), FiniteDifferenceSpec(h=1e-6))
