"""Closed-form ingredients of the doubly singular Hardy kernel.

Every function here is an explicit formula evaluated from a validated
parameter set: the radial profile ``R**kappa - r**kappa`` that solves a
p-Laplace Poisson problem, the logarithmically corrected supersolution
of a first-order ODE inequality, the forcing term it must dominate, the
singular source, the assembled Hardy kernel, and two classical
eigenvalue formulas used for comparison.  All functions are pure,
accept scalar or ndarray arguments where a radius or a log-variable is
expected, and raise on inputs outside their stated domain.

Numerical care: the profile is computed as ``-R**kappa * expm1(kappa *
log(r / R))`` so that its relative accuracy is uniform all the way to
the boundary, where the naive difference of powers cancels
catastrophically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ValidationError",
    "ProblemParams",
    "b_threshold",
    "validate",
    "radial_profile",
    "radial_profile_deriv",
    "log_supersolution",
    "log_supersolution_deriv",
    "ode_forcing",
    "supersolution_residual",
    "poisson_source",
    "hardy_kernel",
    "classical_bound",
    "eigen_1d_closed_form",
]


class ValidationError(ValueError):
    """An input violates one of the hypotheses of the construction."""


def b_threshold(p: float) -> float:
    """Admissibility threshold for the log-correction coefficient.

    The coefficient must satisfy ``b < -(p - 2) / (6 (p - 1))``; at or
    above this value the cubic term of the residual expansion changes
    sign and the supersolution inequality fails even for small x.
    """
    return -(p - 2.0) / (6.0 * (p - 1.0))


@dataclass(frozen=True)
class ProblemParams:
    """Validated parameter tuple with every derived constant.

    Single source of truth for the formulas below.  Use :func:`validate`
    to construct one; the constructor performs no checking.

    Derived fields:
      kappa      exponent (p - beta)/(p - 1) of the radial profile
      p_prime    conjugate exponent p/(p - 1)
      x_limit    positive root of 1 - x - |b| x**2, the upper end of the
                 window on which the log-corrected factor stays positive
      phi_max    profile value at the origin, R**kappa
      ln_s       log of the normalization s_norm
    """

    p: float
    n: int
    beta: float
    R: float
    b: float
    s_norm: float
    kappa: float
    p_prime: float
    x_limit: float
    phi_max: float
    ln_s: float

    @property
    def s_floor(self) -> float:
        """Smallest admissible normalization, phi_max * exp(1/x_limit - 1)."""
        return self.phi_max * math.exp(1.0 / self.x_limit - 1.0)

    @property
    def x_used_max(self) -> float:
        """Largest window variable actually reached, at r -> 0."""
        return 1.0 / (1.0 + self.ln_s - math.log(self.phi_max))

    @property
    def t_admissible_max(self) -> float:
        """Upper bound on t for the supersolution to stay positive."""
        return 1.0 + self.ln_s - 1.0 / self.x_limit


def validate(
    p: float,
    n: int,
    beta: float,
    R: float,
    b: float,
    s_norm: float | None = None,
) -> ProblemParams:
    """Check every hypothesis and return the parameter set with derived constants.

    ``s_norm=None`` selects the default normalization
    ``R**kappa * exp(1/x_limit)``, which keeps the log-corrected factor
    positive on the whole profile range for every R.
    """
    p = float(p)
    n_int = int(n)
    if n_int != n:
        raise ValidationError(f"requires integer dimension n, got {n!r}")
    beta = float(beta)
    R = float(R)
    b = float(b)

    if not p > 1.0:
        raise ValidationError(f"requires p > 1, got p={p}")
    if n_int < 2:
        raise ValidationError(f"requires n >= 2, got n={n_int}")
    if not (1.0 < beta < n_int):
        raise ValidationError(
            f"beta must lie in the open interval (1, n)=(1, {n_int}), got beta={beta}"
        )
    if not beta < p:
        raise ValidationError(
            f"requires beta < p so that kappa > 0, got beta={beta}, p={p}"
        )
    if not R > 0.0:
        raise ValidationError(f"requires R > 0, got R={R}")
    thr = b_threshold(p)
    if not b < thr:
        raise ValidationError(
            f"b above threshold: requires b < -(p-2)/(6(p-1)) = {thr:.9g}, got b={b}"
        )
    if not b < 0.0:
        # For p < 2 the threshold is positive; a nonnegative b would break
        # monotonicity of the log-corrected factor, so reject it as well.
        raise ValidationError(f"requires b < 0, got b={b}")

    kappa = (p - beta) / (p - 1.0)
    p_prime = p / (p - 1.0)
    ab = abs(b)
    x_limit = (math.sqrt(1.0 + 4.0 * ab) - 1.0) / (2.0 * ab)
    phi_max = R**kappa

    if s_norm is None:
        s_norm = phi_max * math.exp(1.0 / x_limit)
    else:
        s_norm = float(s_norm)
        s_floor = phi_max * math.exp(1.0 / x_limit - 1.0)
        if not s_norm > s_floor:
            raise ValidationError(
                "S too small: requires S > R**kappa * exp(1/x_limit - 1) "
                f"= {s_floor:.9g}, got S={s_norm}"
            )

    return ProblemParams(
        p=p,
        n=n_int,
        beta=beta,
        R=R,
        b=b,
        s_norm=s_norm,
        kappa=kappa,
        p_prime=p_prime,
        x_limit=x_limit,
        phi_max=phi_max,
        ln_s=math.log(s_norm),
    )


def _profile_pieces(r, params: ProblemParams):
    """Return (phi, log phi) evaluated stably, for r in (0, R]."""
    R, kappa = params.R, params.kappa
    with np.errstate(divide="ignore"):
        q = kappa * np.log(np.asarray(r, dtype=float) / R)
    one_minus = -np.expm1(q)  # 1 - (r/R)**kappa, exact to ulp
    phi = params.phi_max * one_minus
    with np.errstate(divide="ignore"):
        log_phi = kappa * math.log(R) + np.log(one_minus)
    return phi, log_phi


def radial_profile(r, params: ProblemParams):
    """Profile R**kappa - r**kappa on [0, R].

    Strictly decreasing, equal to phi_max at the origin and exactly 0 at
    the boundary.
    """
    r = np.asarray(r, dtype=float)
    if np.any(r < 0.0) or np.any(r > params.R):
        raise ValidationError(f"radius outside [0, R]=[0, {params.R}]")
    phi, _ = _profile_pieces(np.maximum(r, 0.0), params)
    out = np.where(r == 0.0, params.phi_max, phi)
    return out if out.ndim else float(out)


def radial_profile_deriv(r, params: ProblemParams):
    """Derivative -kappa * r**(kappa - 1); negative on (0, R], unbounded at 0."""
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0.0) or np.any(r > params.R):
        raise ValidationError(f"radius outside (0, R]=(0, {params.R}]")
    out = -params.kappa * r ** (params.kappa - 1.0)
    return out if out.ndim else float(out)


def _window_x(t, params: ProblemParams):
    """Window variable x = 1/(1 + ln S - t)."""
    return 1.0 / (1.0 + params.ln_s - np.asarray(t, dtype=float))


def log_supersolution(t, params: ProblemParams):
    """Log-corrected supersolution w(t) of the first-order ODE inequality.

    w(t) = (1/p')**(p-1) * (1 - x + b x**2) with x = 1/(1 + ln S - t).
    Positive and strictly decreasing on the admissible range
    t < 1 + ln S - 1/x_limit, with limit (1/p')**(p-1) as t -> -inf.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t >= params.t_admissible_max):
        raise ValidationError(
            "w nonpositive: S too small for this profile range "
            f"(requires t < {params.t_admissible_max:.9g})"
        )
    x = _window_x(t, params)
    c1 = (1.0 / params.p_prime) ** (params.p - 1.0)
    out = c1 * (1.0 - x + params.b * x * x)
    return out if out.ndim else float(out)


def log_supersolution_deriv(t, params: ProblemParams):
    """dw/dt = (1/p')**(p-1) * (-1 + 2 b x) * x**2; negative for b < 0."""
    t = np.asarray(t, dtype=float)
    if np.any(t >= params.t_admissible_max):
        raise ValidationError(
            "w nonpositive: S too small for this profile range "
            f"(requires t < {params.t_admissible_max:.9g})"
        )
    x = _window_x(t, params)
    c1 = (1.0 / params.p_prime) ** (params.p - 1.0)
    out = c1 * (-1.0 + 2.0 * params.b * x) * x * x
    return out if out.ndim else float(out)


def ode_forcing(t, params: ProblemParams):
    """Forcing term the supersolution must dominate.

    G(t) = (1/p')**p * (1 + p/(2(p-1)) * x**2); always above (1/p')**p.
    Defined for t < 1 + ln S.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t >= 1.0 + params.ln_s):
        raise ValidationError(f"requires t < 1 + ln S = {1.0 + params.ln_s:.9g}")
    x = _window_x(t, params)
    C = (1.0 / params.p_prime) ** params.p
    out = C * (1.0 + params.p / (2.0 * (params.p - 1.0)) * x * x)
    return out if out.ndim else float(out)


def supersolution_residual(t, params: ProblemParams):
    """Residual -w' + (p-1) w - (p-1) w**p' - G of the ODE inequality.

    Nonnegative residual certifies the inequality at t.  The Taylor
    expansion at x = 0 cancels through second order, so the residual
    behaves like const * x**3 with positive constant exactly when b is
    below its threshold; positivity for larger x is not guaranteed and
    must be checked numerically.

    Requires p >= 2 (the expansion argument needs it).
    """
    if params.p < 2.0:
        raise ValidationError(f"requires p >= 2, got p={params.p}")
    w = log_supersolution(t, params)
    wp = log_supersolution_deriv(t, params)
    g = ode_forcing(t, params)
    pm1 = params.p - 1.0
    out = -wp + pm1 * w - pm1 * np.asarray(w) ** params.p_prime - g
    return out if np.ndim(out) else float(out)


def poisson_source(r, params: ProblemParams):
    """Singular source kappa**(p-1) * (n - beta) * r**(-beta).

    This strength (and not the linear-in-kappa variant) is the one for
    which the radial profile solves the radial flux ODE for every p;
    the two coincide at p = 2.  Integrable against r**(n-1) since
    beta < n.
    """
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0.0):
        raise ValidationError("requires r > 0")
    out = params.kappa ** (params.p - 1.0) * (params.n - params.beta) * r ** (-params.beta)
    return out if out.ndim else float(out)


def hardy_kernel(r, params: ProblemParams):
    """Doubly singular Hardy kernel v(r) on (0, R), in closed radial form.

    v(r) = ((p-beta)/p)**p * r**(-(beta-1)p/(p-1)) * phi**(-p)
               * (1 + p/(2(p-1)) * x**2)
         + ((p-beta)/p)**(p-1) * (n-beta) * r**(-beta) * phi**(1-p)
               * (1 - x - |b| x**2)

    with x = 1/(1 + ln(S/phi)).  The first bracket is always >= 1 and the
    second lies in (0, 1); the kernel diverges at both endpoints.  Equal
    to the compositional form
    ``|phi'/phi|**p * G(ln phi) + source * phi**(1-p) * w(ln phi)``.
    """
    p, n, beta = params.p, params.n, params.beta
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0.0) or np.any(r >= params.R):
        raise ValidationError("kernel is singular at the endpoints; requires 0 < r < R")
    phi, log_phi = _profile_pieces(r, params)
    x = 1.0 / (1.0 + params.ln_s - log_phi)
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
        * (1.0 - x - abs(params.b) * x * x)
    )
    out = first + second
    return out if out.ndim else float(out)


def classical_bound(p: float, n: int, R: float) -> float:
    """Classical eigenvalue lower bound for the ball of radius R.

    (1/R**p) * (1/p)**p * [ (p-1)**(p-1) / (n-1)**(n-1) ]**(p/(p-n));
    requires p != n.
    """
    p = float(p)
    n = int(n)
    if not p > 1.0:
        raise ValidationError(f"requires p > 1, got p={p}")
    if n < 2:
        raise ValidationError(f"requires n >= 2, got n={n}")
    if p == n:
        raise ValidationError("classical bound is undefined at p = n")
    if not R > 0.0:
        raise ValidationError(f"requires R > 0, got R={R}")
    ratio = (p - 1.0) ** (p - 1.0) / (n - 1.0) ** (n - 1.0)
    return (1.0 / R**p) * (1.0 / p) ** p * ratio ** (p / (p - n))


def eigen_1d_closed_form(p: float) -> float:
    """First Dirichlet eigenvalue of the 1D p-Laplacian on (-1, 1).

    (p - 1) * (pi / (p * sin(pi/p)))**p.
    """
    p = float(p)
    if not p > 1.0:
        raise ValidationError(f"requires p > 1, got p={p}")
    return (p - 1.0) * (math.pi / (p * math.sin(math.pi / p))) ** p
