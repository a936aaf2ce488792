"""Shared numerical oracles for the test suite.

These are deliberately independent of the library's own algorithms:
plain midpoint sums, textbook finite differences, dense grid scans, and
a Bessel-zero bisection built on scipy.special.
"""

import numpy as np


def riemann_midpoint(f, a, b, n):
    """Plain midpoint Riemann sum with n uniform cells."""
    x = a + (np.arange(n) + 0.5) * (b - a) / n
    return float(np.sum(f(x)) * (b - a) / n)


def central_diff5(f, x, h):
    """5-point central first derivative, O(h**4)."""
    return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h)


def bessel_first_zero(alpha):
    """First positive zero of the Bessel function J_alpha, by bisection."""
    from scipy.optimize import brentq
    from scipy.special import jv

    x = alpha + 1e-3
    step = 0.05
    prev = jv(alpha, x)
    while x < alpha + 20.0:
        nxt = x + step
        cur = jv(alpha, nxt)
        if prev > 0.0 >= cur:
            return float(brentq(lambda t: jv(alpha, t), x, nxt, xtol=1e-15, rtol=1e-15))
        prev, x = cur, nxt
    raise AssertionError("no Bessel zero found")


def brute_force_kernel_min(params, num=10**6):
    """Minimum of the Hardy kernel on a uniform interior grid."""
    from hebound import backend

    rs = (np.arange(num) + 0.5) * (params.R / num)
    return float(backend.hardy_kernel_grid(rs, params).min())


def brute_force_bound(p, n, R, b, grid=2048, levels=4):
    """sup-inf of the kernel by a nested (beta, r) grid scan.

    Each level lays a grid x grid net over the current window, takes the
    best cell and zooms into its neighborhood; no derivative or
    golden-section logic is involved.
    """
    from hebound import backend, validate

    lo_b, hi_b = 1.0 + 1e-6, n - 1e-6
    lo_r, hi_r = 0.0, R
    best = None
    for _ in range(levels):
        betas = np.linspace(lo_b, hi_b, grid)
        rr = np.linspace(lo_r, hi_r, grid + 2)[1:-1]
        mins = np.empty(grid)
        amins = np.empty(grid, dtype=int)
        for i, be in enumerate(betas):
            vals = backend.hardy_kernel_grid(rr, validate(p, n, be, R, b))
            j = int(np.argmin(vals))
            mins[i] = vals[j]
            amins[i] = j
        i = int(np.argmax(mins))
        j = int(amins[i])
        best = float(mins[i])
        lo_b, hi_b = betas[max(i - 1, 0)], betas[min(i + 1, grid - 1)]
        lo_r, hi_r = rr[max(j - 1, 0)], rr[min(j + 1, grid - 1)]
    return best
