import math

import numpy as np
import pytest

from hebound import kernelmath as km
from hebound.hardy import (
    TrialFunction,
    check_hardy_convex,
    check_hardy_linear,
    default_trials,
    field_energy,
    gradient_energy,
    kernel_energy,
    pointwise_divergence_margin,
    relative_gradient_energy,
    sweep_checks,
)
from hebound.kernelmath import ValidationError, validate

from conftest import central_diff5


class _Scaled:
    """c * u, for homogeneity checks."""

    def __init__(self, base, c):
        self.base = base
        self.c = c

    def u(self, r):
        return self.c * self.base.u(r)

    def du(self, r):
        return self.c * self.base.du(r)


class _Parabola:
    # u = 1 - r**2 on [0, 1]; not in the vanishing family but fine for
    # the pure gradient integral
    def u(self, r):
        return 1.0 - np.asarray(r) ** 2

    def du(self, r):
        return -2.0 * np.asarray(r)


class TestTrialFunction:
    def test_vanishes_at_both_ends(self):
        u = TrialFunction(2.0, 2.0, 2.0, 1.5)
        assert u.u(0.0) == 0.0
        assert u.u(1.5) == 0.0
        r = np.linspace(1e-9, 1.5 - 1e-9, 300)
        assert np.all(u.u(r) > 0.0)

    def test_derivative_endpoint_limits(self):
        u = TrialFunction(1.0, 1.0, 1.0, 1.0)  # u = s(1-s)
        assert u.du(0.0) == pytest.approx(1.0, rel=1e-14)
        assert u.du(1.0) == pytest.approx(-1.0, rel=1e-14)

    def test_derivative_matches_finite_difference(self):
        u = TrialFunction(2.0, 2.0, 3.0, 1.0)
        for r in (0.2, 0.5, 0.9):
            fd = central_diff5(u.u, r, 1e-5)
            assert fd == pytest.approx(u.du(r), rel=1e-8)

    @pytest.mark.parametrize(
        "bad", [dict(gamma=0.5), dict(a=0.0), dict(m=0.5), dict(a=0.5, m=1.0), dict(R=0.0)]
    )
    def test_constructor_guards(self, bad):
        kw = dict(gamma=1.0, a=1.0, m=1.0, R=1.0)
        kw.update(bad)
        with pytest.raises(ValidationError):
            TrialFunction(**kw)

    def test_default_sweep_has_24_members(self):
        assert len(default_trials(1.0)) == 24


class TestFunctionals:
    def test_gradient_energy_parabola(self):
        # 2 pi * int_0^1 (2r)**p r dr = 2 pi for p = 2
        prm = validate(2.0, 2, 1.5, 1.0, -1.0)
        assert gradient_energy(_Parabola(), prm) == pytest.approx(2.0 * math.pi, rel=1e-10)

    def test_zero_function(self):
        prm = validate(3.0, 2, 1.5, 1.0, -1.0)
        zero = _Scaled(TrialFunction(2.0, 2.0, 2.0, 1.0), 0.0)
        assert gradient_energy(zero, prm) == 0.0
        assert kernel_energy(zero, prm) == 0.0
        rep = check_hardy_linear(zero, prm)
        assert rep["margin"] == 0.0 and rep["passed"]
        rep = check_hardy_convex(zero, prm)
        assert rep["degenerate"]

    def test_p_homogeneity(self):
        prm = validate(3.0, 2, 1.5, 1.0, -1.0)
        base = TrialFunction(2.0, 2.0, 2.0, 1.0)
        scaled = _Scaled(base, 2.0)
        factor = 2.0**prm.p
        for fn in (gradient_energy, relative_gradient_energy, field_energy, kernel_energy):
            assert fn(scaled, prm) == pytest.approx(factor * fn(base, prm), rel=1e-9)

    def test_kernel_energy_two_paths_agree(self):
        prm = validate(3.0, 2, 1.5, 1.0, km.b_threshold(3.0) - 0.1)
        u = TrialFunction(2.0, 2.0, 2.0, 1.0)
        direct = kernel_energy(u, prm, method="kernel")
        split = kernel_energy(u, prm, method="split")
        assert abs(direct - split) / direct <= 1e-10

    def test_field_energy_below_quotient_energy(self):
        # the supersolution factor w**p' < 1 pointwise
        prm = validate(3.0, 2, 1.5, 1.0, -1.0)
        u = TrialFunction(2.0, 2.0, 2.0, 1.0)
        assert field_energy(u, prm) < relative_gradient_energy(u, prm)


class TestInequalities:
    def test_pinned_instance_positive_margin(self):
        prm = validate(3.0, 2, 1.5, 1.0, -1.0)
        rep = check_hardy_linear(TrialFunction(2.0, 2.0, 2.0, 1.0), prm)
        assert rep["margin"] > 0.0 and rep["passed"]

    def test_sweep_all_pass(self):
        # both convex variants hold on this instance
        prm = validate(4.0, 3, 2.0, 1.0, -1.0)
        checks = sweep_checks(prm)
        assert all(c.passed_linear for c in checks)
        assert all(c.passed_convex for c in checks)
        assert all(c.passed_convex_field for c in checks)

    def test_field_convex_implies_linear(self):
        # Young at unit slope: rhs with the field middle dominates the kernel term
        for key in ((3.0, 2, 1.5, 1.0, -1.0), (6.0, 2, 1.5, 1.0, km.b_threshold(6.0) - 0.1)):
            prm = validate(*key)
            for c in sweep_checks(prm, trials=default_trials(prm.R)[:6]):
                assert c.convex_rhs_field >= c.kernel - 1e-9 * max(c.gradient, 1.0)
                if c.passed_convex_field:
                    assert c.passed_linear

    def test_pass_flags_scale_invariant(self):
        prm = validate(3.0, 2, 1.5, 1.0, -1.0)
        base = TrialFunction(2.0, 2.0, 2.0, 1.0)
        for c in (0.01, 1.0, 50.0):
            rep = check_hardy_linear(_Scaled(base, c), prm)
            assert rep["passed"]
            rep = check_hardy_convex(_Scaled(base, c), prm, middle="field")
            assert rep["passed"]


class TestDivergenceMargin:
    def test_positive_inside_window(self):
        # radius whose window variable sits at a tenth of the root
        prm = validate(3.0, 2, 1.5, 1.0, -1.0)
        x = 0.1 * prm.x_limit
        phi_target = math.exp(1.0 + prm.ln_s - 1.0 / x)
        r = (prm.phi_max - phi_target) ** (1.0 / prm.kappa)
        assert 0.0 < r < prm.R
        assert pointwise_divergence_margin(r, prm) > 0.0

    def test_matches_finite_difference_divergence(self):
        prm = validate(3.0, 2, 1.5, 1.0, -1.0)
        p = prm.p

        def g_r(r):
            phi = km.radial_profile(r, prm)
            dphi = km.radial_profile_deriv(r, prm)
            w = km.log_supersolution(np.log(phi), prm)
            q = dphi / phi
            return np.abs(q) ** (p - 2.0) * q * w

        def weighted(r):
            return r ** (prm.n - 1.0) * g_r(r)

        r = 0.5
        div_g = central_diff5(weighted, r, 1e-4) / r ** (prm.n - 1.0)
        fd_margin = -div_g - (p - 1.0) * abs(g_r(r)) ** prm.p_prime - km.hardy_kernel(r, prm)
        assert fd_margin == pytest.approx(pointwise_divergence_margin(r, prm), rel=1e-6)

    def test_finite_toward_boundary(self):
        prm = validate(3.0, 2, 1.5, 1.0, -1.0)
        val = pointwise_divergence_margin(1.0 - 1e-9, prm)
        assert math.isfinite(val)
