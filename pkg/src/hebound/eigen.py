"""Eigenvalue lower bounds from the Hardy kernel, and a shooting reference.

The headline computation optimizes the kernel into a bound for the
first Dirichlet p-Laplacian eigenvalue of the ball:

    lambda >= sup over beta in (1, n) of  inf over r in (0, R) of  v(r)

The inner infimum is found on a log-symmetric bracketing grid followed
by golden-section refinement (the kernel diverges at both endpoints, so
the minimum is interior); the outer supremum is a coarse beta grid with
the same refinement.  Faber-Krahn reduces a general domain of given
volume to the ball of the same volume.

An independent reference eigenvalue comes from shooting: integrate the
radial eigen-ODE in flux form from the origin asymptotics and bisect on
lambda over the position of the first zero, which is monotone in
lambda.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import backend
from .kernelmath import (
    ProblemParams,
    ValidationError,
    b_threshold,
    classical_bound,
    eigen_1d_closed_form,
    validate,
)
from .quadrature import ball_volume

__all__ = [
    "OptimizerError",
    "ShootingError",
    "BoundResult",
    "EigenRefResult",
    "ComparisonReport",
    "min_kernel_over_radius",
    "bound_for_ball",
    "reference_eigenvalue_ball",
    "faber_krahn_bound",
    "compare_bounds",
]

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
_INVPHI2 = (3.0 - math.sqrt(5.0)) / 2.0
_BETA_MARGIN = 1e-6


class OptimizerError(RuntimeError):
    pass


class ShootingError(RuntimeError):
    pass


@dataclass(frozen=True)
class BoundResult:
    """Eigenvalue lower bound with the optimizing parameters."""

    lambda_lower: float
    beta_star: float
    r_star: float
    classical_eq6: float
    improvement_ratio: float
    params: ProblemParams


@dataclass(frozen=True)
class EigenRefResult:
    """Reference first eigenvalue from the shooting solver."""

    lambda_ref: float
    zero_radius_error: float
    bisection_iterations: int
    ode_steps: int


@dataclass(frozen=True)
class ComparisonReport:
    """All bounds for one instance, with the shooting reference."""

    bound: BoundResult
    classical_eq6: float
    beta_limit_value: float
    beta_limit_r: float
    reference: EigenRefResult | None
    ratios: dict = field(default_factory=dict)


def _golden_min(f, a, b, xtol):
    """Golden-section search for the minimum of a unimodal f on [a, b]."""
    h = b - a
    c = a + _INVPHI2 * h
    d = a + _INVPHI * h
    yc = f(c)
    yd = f(d)
    while h > xtol:
        if yc < yd:
            b, d, yd = d, c, yc
            h = b - a
            c = a + _INVPHI2 * h
            yc = f(c)
        else:
            a, c, yc = c, d, yd
            h = b - a
            d = a + _INVPHI * h
            yd = f(d)
    return (c, yc) if yc < yd else (d, yd)


def _kernel_at(params):
    def f(r):
        return float(backend.hardy_kernel_grid(np.array([r]), params)[0])

    return f


def min_kernel_over_radius(params: ProblemParams, grid_points: int = 512, xtol_rel: float = 3e-8):
    """Global minimum of the Hardy kernel over (0, R).

    Returns (r_star, value).  A log-symmetric grid (log-spaced distances
    from both endpoints) brackets every candidate basin; each basin is
    then refined by golden section, which guards against multimodality
    at grid scale.
    """
    R = params.R
    half = max(grid_points // 2, 8)
    xi = np.geomspace(1e-9, 0.5, half)
    rs = np.unique(np.concatenate([R * xi, R * (1.0 - xi)]))
    vals = backend.hardy_kernel_grid(rs, params)
    if not np.all(np.isfinite(vals)):
        raise OptimizerError("kernel evaluation produced non-finite values")

    interior_min = (vals[1:-1] <= vals[:-2]) & (vals[1:-1] <= vals[2:])
    basins = np.flatnonzero(interior_min) + 1
    if basins.size == 0:
        raise OptimizerError(
            "no interior bracket found; kernel should diverge at both endpoints"
        )
    f = _kernel_at(params)
    best_r, best_v = None, math.inf
    for i in basins:
        r_loc, v_loc = _golden_min(f, rs[i - 1], rs[i + 1], xtol_rel * R)
        if v_loc < best_v:
            best_r, best_v = r_loc, v_loc
    i0 = int(np.argmin(vals))
    if vals[i0] < best_v:
        best_r, best_v = float(rs[i0]), float(vals[i0])
    return float(best_r), float(best_v)


def default_b(p: float) -> float:
    """Default log-correction coefficient, threshold - 0.1."""
    return b_threshold(p) - 0.1


def bound_for_ball(
    p: float,
    n: int,
    R: float,
    b: float | None = None,
    s_norm: float | None = None,
    beta_grid: int = 64,
) -> BoundResult:
    """Optimized eigenvalue lower bound for the ball of radius R.

    Maximizes the inner kernel infimum over beta in the open interval
    (1, n), clipped by a small margin at both degenerate endpoints.
    Requires p > n >= 2.
    """
    p = float(p)
    n = int(n)
    if n < 2:
        raise ValidationError(f"requires n >= 2, got n={n}")
    if not p > n:
        raise ValidationError(f"requires p > n, got p={p}, n={n}")
    if b is None:
        b = default_b(p)

    def value_at(beta):
        prm = validate(p, n, beta, R, b, s_norm)
        return min_kernel_over_radius(prm)[1]

    lo = 1.0 + _BETA_MARGIN
    hi = n - _BETA_MARGIN
    betas = np.linspace(lo, hi, beta_grid)
    vals = np.array([value_at(be) for be in betas])

    is_max = (vals[1:-1] >= vals[:-2]) & (vals[1:-1] >= vals[2:])
    basins = list(np.flatnonzero(is_max) + 1)
    for edge in (0, beta_grid - 1):
        if vals[edge] >= vals.max() - abs(vals.max()) * 1e-12:
            basins.append(edge)

    best_beta, best_val = None, -math.inf
    for i in basins:
        a = betas[max(i - 1, 0)]
        c = betas[min(i + 1, beta_grid - 1)]
        beta_loc, neg = _golden_min(lambda be: -value_at(be), a, c, 1e-7)
        if -neg > best_val:
            best_beta, best_val = beta_loc, -neg
    i0 = int(np.argmax(vals))
    if vals[i0] > best_val:
        best_beta, best_val = float(betas[i0]), float(vals[i0])

    prm = validate(p, n, best_beta, R, b, s_norm)
    r_star, value = min_kernel_over_radius(prm)
    if value < best_val:  # keep the better of refit and scan
        value = best_val
    classical = classical_bound(p, n, R)
    return BoundResult(
        lambda_lower=float(value),
        beta_star=float(best_beta),
        r_star=float(r_star),
        classical_eq6=classical,
        improvement_ratio=float(value) / classical,
        params=prm,
    )


def _bracket_init(p: float, n: int, R: float):
    if n >= 2 and p > n:
        base = classical_bound(p, n, R)
        return 0.5 * base, 4.0 * base * (p / (p - n)) ** p
    if n == 1:
        base = eigen_1d_closed_form(p) / R**p
        return 0.5 * base, 2.0 * base
    base = (math.pi / (2.0 * R)) ** p * n ** (p / 2.0)
    return 0.5 * base, 8.0 * base


def reference_eigenvalue_ball(
    p: float,
    n: int,
    R: float,
    lam_rtol: float = 1e-10,
    ode_rtol: float = 1e-12,
    trace: list | None = None,
) -> EigenRefResult:
    """First Dirichlet eigenvalue of the ball by shooting and bisection.

    The radial problem is integrated in the flux variable
    rho = r**(n-1) |u'|**(p-2) u' from the origin asymptotics
    u = 1 - c r**p' (c fixed by the leading balance), avoiding the
    degenerate |u'|**(p-2) factor at the origin.  The first zero of u
    moves monotonically toward the origin as lambda grows; bisection
    pins the lambda whose first zero sits at R.

    ``trace``, when a list, collects (lambda, crossed, first_zero)
    triples from every shot.
    """
    p = float(p)
    n = int(n)
    if not p > 1.0:
        raise ValidationError(f"requires p > 1, got p={p}")
    if n < 1:
        raise ValidationError(f"requires n >= 1, got n={n}")
    if not R > 0.0:
        raise ValidationError(f"requires R > 0, got R={R}")

    eps = 1e-6 * R
    steps_total = 0
    want_zero = trace is not None

    def run(lam):
        nonlocal steps_total
        try:
            crossed, r_zero, u_end, steps = backend.shoot(
                p, float(n), lam, eps, R, ode_rtol, want_zero
            )
        except RuntimeError as exc:
            raise ShootingError(str(exc)) from exc
        steps_total += steps
        if trace is not None:
            trace.append((lam, bool(crossed), r_zero))
        return bool(crossed)

    lo, hi = _bracket_init(p, n, R)
    guard = 0
    while run(lo):
        lo *= 0.25
        guard += 1
        if guard > 60:
            raise ShootingError("no non-crossing lower lambda found; lambda range exhausted")
    guard = 0
    while not run(hi):
        hi *= 4.0
        guard += 1
        if guard > 60:
            raise ShootingError(
                "bisection bracket not found: first zero stays beyond R; increase lambda range"
            )

    iterations = 0
    while hi - lo > lam_rtol * hi:
        mid = 0.5 * (lo + hi)
        if run(mid):
            hi = mid
        else:
            lo = mid
        iterations += 1
        if iterations > 200:
            raise ShootingError("bisection failed to converge")

    crossed, r_zero, _, steps = backend.shoot(p, float(n), hi, eps, R, ode_rtol, True)
    steps_total += steps
    zero_err = abs(R - r_zero) / R if crossed and math.isfinite(r_zero) else math.nan
    return EigenRefResult(
        lambda_ref=0.5 * (lo + hi),
        zero_radius_error=float(zero_err),
        bisection_iterations=iterations,
        ode_steps=steps_total,
    )


def faber_krahn_bound(
    volume: float,
    p: float,
    n: int,
    b: float | None = None,
    s_norm: float | None = None,
) -> BoundResult:
    """Bound for any domain of the given volume, via symmetrization.

    Computes the radius of the ball of equal volume and returns the ball
    bound there; the result's params carry that radius.
    """
    volume = float(volume)
    if not volume > 0.0:
        raise ValidationError(f"requires volume > 0, got {volume}")
    r_star = (volume / ball_volume(n)) ** (1.0 / int(n))
    return bound_for_ball(p, n, r_star, b=b, s_norm=s_norm)


def compare_bounds(
    p: float,
    n: int,
    R: float,
    b: float | None = None,
    s_norm: float | None = None,
    with_reference: bool = True,
) -> ComparisonReport:
    """All lower bounds for one instance, plus the shooting reference.

    Contains the optimized kernel bound, the classical formula, the
    bound at the degenerate beta -> n edge (where the second kernel term
    vanishes with its n - beta factor), and pairwise ratios.  The
    improvement ratio over the classical formula is reported, not
    asserted.
    """
    bound = bound_for_ball(p, n, R, b=b, s_norm=s_norm)
    b_eff = default_b(float(p)) if b is None else b
    edge_params = validate(p, n, n - _BETA_MARGIN, R, b_eff, s_norm)
    r_lim, v_lim = min_kernel_over_radius(edge_params)
    ref = reference_eigenvalue_ball(p, n, R) if with_reference else None
    ratios = {
        "bound_over_classical": bound.lambda_lower / bound.classical_eq6,
        "beta_limit_over_classical": v_lim / bound.classical_eq6,
    }
    if ref is not None:
        ratios["bound_over_reference"] = bound.lambda_lower / ref.lambda_ref
        ratios["classical_over_reference"] = bound.classical_eq6 / ref.lambda_ref
        ratios["beta_limit_over_reference"] = v_lim / ref.lambda_ref
    return ComparisonReport(
        bound=bound,
        classical_eq6=bound.classical_eq6,
        beta_limit_value=float(v_lim),
        beta_limit_r=float(r_lim),
        reference=ref,
        ratios=ratios,
    )
