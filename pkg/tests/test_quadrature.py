import math

import numpy as np
import pytest

from hebound.quadrature import (
    QuadratureBudgetError,
    ball_volume,
    integrate,
    sphere_area,
)

from conftest import riemann_midpoint


class TestIntegrate:
    def test_inverse_sqrt(self):
        res = integrate(lambda r: r**-0.5, 0.0, 1.0)
        assert res.value == pytest.approx(2.0, abs=1e-10)
        assert res.err_estimate >= 0.0

    def test_monomial(self):
        res = integrate(lambda r: r**2, 0.0, 1.0)
        assert res.value == pytest.approx(1.0 / 3.0, rel=1e-12)

    def test_beta_half_half(self):
        # both endpoints singular; the midpoint oracle fixes the target
        f = lambda r: 1.0 / np.sqrt(r * (1.0 - r))
        oracle = riemann_midpoint(f, 0.0, 1.0, 4_000_000)
        res = integrate(f, 0.0, 1.0)
        assert abs(res.value - oracle) <= 3e-3  # oracle converges like sqrt(h)
        assert res.value == pytest.approx(math.pi, abs=1e-9)

    def test_orientation(self):
        f = lambda r: np.exp(r)
        a = integrate(f, 0.0, 1.0).value
        b = integrate(f, 1.0, 0.0).value
        assert a == pytest.approx(-b, rel=1e-14)
        assert integrate(f, 0.5, 0.5).value == 0.0

    def test_linearity(self):
        tol = 1e-10
        f = lambda r: np.sin(3.0 * r)
        g = lambda r: np.exp(-r) * r
        lhs = integrate(lambda r: 2.0 * f(r) + 3.0 * g(r), 0.0, 2.0, tol=tol).value
        rhs = 2.0 * integrate(f, 0.0, 2.0, tol=tol).value + 3.0 * integrate(g, 0.0, 2.0, tol=tol).value
        assert abs(lhs - rhs) <= 2.0 * tol * max(abs(lhs), 1.0)

    def test_splitting_invariance(self):
        tol = 1e-10
        f = lambda r: np.cos(5.0 * r) + r**-0.25
        whole = integrate(f, 0.0, 1.0, tol=tol).value
        parts = integrate(f, 0.0, 0.3, tol=tol).value + integrate(f, 0.3, 1.0, tol=tol).value
        assert abs(whole - parts) <= 2.0 * tol * max(abs(whole), 1.0)

    def test_budget_exhaustion_carries_best(self):
        with pytest.raises(QuadratureBudgetError) as exc:
            integrate(lambda r: 1.0 / r, 0.0, 1.0, tol=1e-10, budget=30_000)
        best = exc.value.best
        assert best.evaluations <= 30_000
        assert best.err_estimate > 0.0
        assert math.isfinite(best.value)

    def test_evaluation_count_within_budget(self):
        res = integrate(lambda r: r**-0.5 * (1.0 - r) ** -0.25, 0.0, 1.0)
        assert 0 < res.evaluations <= 10**6


class TestBallGeometry:
    def test_known_values(self):
        assert sphere_area(2) == pytest.approx(2.0 * math.pi, rel=1e-15)
        assert ball_volume(2) == pytest.approx(math.pi, rel=1e-15)
        assert sphere_area(3) == pytest.approx(4.0 * math.pi, rel=1e-15)
        assert ball_volume(3) == pytest.approx(4.0 * math.pi / 3.0, rel=1e-15)
        assert ball_volume(4) == pytest.approx(math.pi**2 / 2.0, rel=1e-15)

    @pytest.mark.parametrize("n", range(1, 11))
    def test_area_volume_relation(self, n):
        assert sphere_area(n) == pytest.approx(n * ball_volume(n), rel=1e-14)

    def test_rejects_nonpositive_dimension(self):
        with pytest.raises(ValueError):
            sphere_area(0)
        with pytest.raises(ValueError):
            ball_volume(-1)
