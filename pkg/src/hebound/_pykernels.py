"""Pure Python implementations of the hot numerical kernels.

This is the fallback backend: grid evaluation of the Hardy kernel and
of the supersolution residual are vectorized with numpy, while the
radial shooting integrator is a scalar adaptive Cash-Karp loop.  The
compiled extension (hebound._core) mirrors these signatures; see
hebound.backend for selection.
"""

from __future__ import annotations

import math

import numpy as np

NAME = "python"


def hardy_kernel_grid(r, params):
    """Hardy kernel on an array of radii strictly inside (0, R)."""
    p, n, beta = params.p, params.n, params.beta
    R, b, ln_s = params.R, params.b, params.ln_s
    kappa = (p - beta) / (p - 1.0)
    r = np.asarray(r, dtype=float)
    q = kappa * np.log(r / R)
    one_minus = -np.expm1(q)
    phi = R**kappa * one_minus
    log_phi = kappa * math.log(R) + np.log(one_minus)
    x = 1.0 / (1.0 + ln_s - log_phi)
    coef = (p - beta) / p
    first = (
        coef**p
        * r ** (-(beta - 1.0) * p / (p - 1.0))
        * phi ** (-p)
        * (1.0 + p / (2.0 * (p - 1.0)) * x * x)
    )
    second = (
        coef ** (p - 1.0)
        * (n - beta)
        * r ** (-beta)
        * phi ** (1.0 - p)
        * (1.0 - x - abs(b) * x * x)
    )
    return first + second


def supersolution_residual_x_grid(x, p, b):
    """ODE-inequality residual as a function of the window variable x."""
    x = np.asarray(x, dtype=float)
    pp = p / (p - 1.0)
    c1 = (1.0 / pp) ** (p - 1.0)
    C = (1.0 / pp) ** p
    bracket = 1.0 - x + b * x * x
    w = c1 * bracket
    neg_wprime = c1 * (1.0 - 2.0 * b * x) * x * x
    forcing = C * (1.0 + 0.5 * pp * x * x)
    return neg_wprime + (p - 1.0) * w - (p - 1.0) * C * bracket**pp - forcing


# Cash-Karp embedded Runge-Kutta 5(4) tableau.
_B21 = 1.0 / 5.0
_B31, _B32 = 3.0 / 40.0, 9.0 / 40.0
_B41, _B42, _B43 = 3.0 / 10.0, -9.0 / 10.0, 6.0 / 5.0
_B51, _B52, _B53, _B54 = -11.0 / 54.0, 5.0 / 2.0, -70.0 / 27.0, 35.0 / 27.0
_B61, _B62, _B63, _B64, _B65 = (
    1631.0 / 55296.0,
    175.0 / 512.0,
    575.0 / 13824.0,
    44275.0 / 110592.0,
    253.0 / 4096.0,
)
_C1, _C3, _C4, _C6 = 37.0 / 378.0, 250.0 / 621.0, 125.0 / 594.0, 512.0 / 1771.0
_D1, _D3, _D4, _D5, _D6 = (
    2825.0 / 27648.0,
    18575.0 / 48384.0,
    13525.0 / 55296.0,
    277.0 / 14336.0,
    1.0 / 4.0,
)


def _step(p, n, lam, r, u, rho, h):
    """One Cash-Karp step; returns (u5, rho5, err_u, err_rho)."""
    inv_pm1 = 1.0 / (p - 1.0)

    def rhs(ri, ui, rhoi):
        rn = ri ** (n - 1.0)
        du = math.copysign(abs(rhoi / rn) ** inv_pm1, rhoi)
        drho = -lam * rn * math.copysign(abs(ui) ** (p - 1.0), ui)
        return du, drho

    k1u, k1r = rhs(r, u, rho)
    k2u, k2r = rhs(r + 0.2 * h, u + h * _B21 * k1u, rho + h * _B21 * k1r)
    k3u, k3r = rhs(
        r + 0.3 * h,
        u + h * (_B31 * k1u + _B32 * k2u),
        rho + h * (_B31 * k1r + _B32 * k2r),
    )
    k4u, k4r = rhs(
        r + 0.6 * h,
        u + h * (_B41 * k1u + _B42 * k2u + _B43 * k3u),
        rho + h * (_B41 * k1r + _B42 * k2r + _B43 * k3r),
    )
    k5u, k5r = rhs(
        r + h,
        u + h * (_B51 * k1u + _B52 * k2u + _B53 * k3u + _B54 * k4u),
        rho + h * (_B51 * k1r + _B52 * k2r + _B53 * k3r + _B54 * k4r),
    )
    k6u, k6r = rhs(
        r + 0.875 * h,
        u + h * (_B61 * k1u + _B62 * k2u + _B63 * k3u + _B64 * k4u + _B65 * k5u),
        rho + h * (_B61 * k1r + _B62 * k2r + _B63 * k3r + _B64 * k4r + _B65 * k5r),
    )

    u5 = u + h * (_C1 * k1u + _C3 * k3u + _C4 * k4u + _C6 * k6u)
    rho5 = rho + h * (_C1 * k1r + _C3 * k3r + _C4 * k4r + _C6 * k6r)
    u4 = u + h * (_D1 * k1u + _D3 * k3u + _D4 * k4u + _D5 * k5u + _D6 * k6u)
    rho4 = rho + h * (_D1 * k1r + _D3 * k3r + _D4 * k4r + _D5 * k5r + _D6 * k6r)
    return u5, rho5, u5 - u4, rho5 - rho4


def shoot(p, n, lam, r0, r_stop, rtol, want_zero):
    """Integrate the radial eigen-ODE in flux form from r0 outward.

    State is (u, rho) with rho = r**(n-1) |u'|**(p-2) u', started from
    the leading asymptotics u = 1 - c r**p', rho = -(lam/n) r**n.  Stops
    at the first zero of u or at r_stop, whichever comes first, and u is
    strictly decreasing until that zero.

    Returns (crossed, r_zero, u_end, steps); r_zero is nan unless the
    zero was crossed and want_zero is true, in which case it is refined
    by bisection inside the bracketing step.
    """
    pp = p / (p - 1.0)
    c = (lam / n) ** (1.0 / (p - 1.0)) * (p - 1.0) / p
    u = 1.0 - c * r0**pp
    rho = -(lam / n) * r0**n

    atol_u = 1e-14
    atol_rho = 1e-14 * (lam / n) * r_stop**n

    r = r0
    h = 0.5 * r0
    steps = 0
    h_floor = 1e-14 * r_stop
    while r < r_stop:
        h = min(h, 0.25 * r + 1e-30, 0.05 * r_stop, r_stop - r)
        u5, rho5, eu, erho = _step(p, n, lam, r, u, rho, h)
        err = max(
            abs(eu) / (atol_u + rtol * abs(u)),
            abs(erho) / (atol_rho + rtol * abs(rho)),
        )
        if err <= 1.0:
            r_prev, u_prev, rho_prev = r, u, rho
            h_used = h
            r += h
            u, rho = u5, rho5
            steps += 1
            if u <= 0.0:
                r_zero = math.nan
                if want_zero:
                    lo_f, hi_f = 0.0, 1.0
                    for _ in range(60):
                        mid = 0.5 * (lo_f + hi_f)
                        um, _, _, _ = _step(
                            p, n, lam, r_prev, u_prev, rho_prev, mid * h_used
                        )
                        if um <= 0.0:
                            hi_f = mid
                        else:
                            lo_f = mid
                    r_zero = r_prev + 0.5 * (lo_f + hi_f) * h_used
                return True, r_zero, u, steps
        if err > 0.0:
            factor = 0.9 * err ** (-0.2)
        else:
            factor = 5.0
        h *= min(5.0, max(0.2, factor))
        if h < h_floor:
            raise RuntimeError(
                f"shooting step size underflow at r={r:.6g} (lam={lam:.6g})"
            )
        if steps > 2_000_000:
            raise RuntimeError("shooting step budget exhausted")
    return False, math.nan, u, steps
