"""Energy functionals on radial trial functions and the inequality checks.

The trial family u(r) = (r/R)**gamma * (1 - (r/R)**a)**m vanishes at the
origin and at the boundary with tunable rates, which is what the doubly
singular kernel requires for integrability.  Three p-energies are
evaluated by singular-robust quadrature:

    gradient_energy           int |u'|**p             over the ball
    relative_gradient_energy  int |phi'/phi|**p |u|**p  (profile quotient)
    kernel_energy             int v |u|**p            (Hardy kernel v)

and two inequality checks compare them: the linear form
``gradient >= kernel`` and the convex strengthening
``gradient >= (1/p)**p [(p-1) K + N]**p / K**(p-1)``, whose Young
reduction at unit slope recovers the linear form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .kernelmath import (
    ProblemParams,
    ValidationError,
    hardy_kernel,
    log_supersolution,
    radial_profile,
    radial_profile_deriv,
    supersolution_residual,
)
from .quadrature import integrate, sphere_area

__all__ = [
    "TrialFunction",
    "default_trials",
    "gradient_energy",
    "relative_gradient_energy",
    "field_energy",
    "kernel_energy",
    "HardyCheck",
    "check_hardy_linear",
    "check_hardy_convex",
    "sweep_checks",
    "pointwise_divergence_margin",
    "SLACK_COEF",
]

SLACK_COEF = 1e-9  # inequality slack, relative to max(gradient energy, 1)


@dataclass(frozen=True)
class TrialFunction:
    """Radial trial u(r) = (r/R)**gamma * (1 - (r/R)**a)**m on [0, R].

    gamma >= 1 and a*m >= 1 keep u' continuous up to the endpoints; u
    vanishes at 0 and R and is positive in between.
    """

    gamma: float
    a: float
    m: float
    R: float = 1.0

    def __post_init__(self):
        if self.gamma < 1.0:
            raise ValidationError(f"requires gamma >= 1, got {self.gamma}")
        if self.a <= 0.0:
            raise ValidationError(f"requires a > 0, got {self.a}")
        if self.m < 1.0:
            raise ValidationError(f"requires m >= 1, got {self.m}")
        if self.a * self.m < 1.0:
            raise ValidationError("requires a*m >= 1 for a continuous derivative")
        if self.R <= 0.0:
            raise ValidationError(f"requires R > 0, got {self.R}")

    @property
    def label(self) -> str:
        return f"poly(gamma={self.gamma:g},a={self.a:g},m={self.m:g})"

    def u(self, r):
        s = np.asarray(r, dtype=float) / self.R
        with np.errstate(divide="ignore"):
            one_m = -np.expm1(self.a * np.log(s))
        return s**self.gamma * one_m**self.m

    def du(self, r):
        s = np.asarray(r, dtype=float) / self.R
        with np.errstate(divide="ignore"):
            one_m = -np.expm1(self.a * np.log(s))
        bracket = self.gamma * one_m - self.a * self.m * s**self.a
        return s ** (self.gamma - 1.0) * one_m ** (self.m - 1.0) * bracket / self.R


def default_trials(R: float = 1.0):
    """The standard 24-function sweep: gamma in {1,2,3}, a in {1,2}, m in {1,2,3,4}."""
    return tuple(
        TrialFunction(g, a, m, R)
        for g in (1.0, 2.0, 3.0)
        for a in (1.0, 2.0)
        for m in (1.0, 2.0, 3.0, 4.0)
    )


def _interior(fn, r, R):
    """Evaluate fn on the interior points of r, zero on/outside endpoints.

    Quadrature nodes can round onto an endpoint; the integrands here all
    carry a factor of |u|**p which vanishes there, so zero is the
    correct limiting contribution at resolution scale.
    """
    r = np.asarray(r, dtype=float)
    out = np.zeros_like(r)
    mask = (r > 0.0) & (r < R)
    if np.any(mask):
        out[mask] = fn(r[mask])
    return out


def gradient_energy(u, params: ProblemParams, tol: float = 1e-10) -> float:
    """Gradient p-energy of a radial function over the ball.

    For radial u this equals both the full gradient integral and its
    projection on the profile direction.  Scales like |c|**p under
    u -> c u.
    """
    p, n = params.p, params.n

    def f(r):
        return np.abs(u.du(r)) ** p * r ** (n - 1.0)

    res = integrate(f, 0.0, params.R, tol=tol)
    return sphere_area(n) * res.value


def relative_gradient_energy(u, params: ProblemParams, tol: float = 1e-10) -> float:
    """Energy int |phi'/phi|**p |u|**p over the ball."""
    p, n, kappa, R = params.p, params.n, params.kappa, params.R

    def f(r):
        def inner(ri):
            phi = radial_profile(ri, params)
            return (
                kappa**p
                * ri ** ((kappa - 1.0) * p)
                * phi ** (-p)
                * np.abs(u.u(ri)) ** p
                * ri ** (n - 1.0)
            )

        return _interior(inner, r, R)

    res = integrate(f, 0.0, R, tol=tol)
    return sphere_area(n) * res.value


def field_energy(u, params: ProblemParams, tol: float = 1e-10) -> float:
    """Energy int |g|**p' |u|**p for the log-corrected vector field g.

    |g|**p' = |phi'/phi|**p * w(ln phi)**p', i.e. the quotient weight
    carrying the supersolution factor.  This, not the bare quotient
    energy, is the middle term the divergence machinery produces in the
    convex inequality; since w < (1/p')**(p-1) it is strictly below
    relative_gradient_energy.
    """
    p, n, kappa, R = params.p, params.n, params.kappa, params.R

    def f(r):
        def inner(ri):
            phi = radial_profile(ri, params)
            w = log_supersolution(np.log(np.asarray(phi, dtype=float)), params)
            return (
                kappa**p
                * ri ** ((kappa - 1.0) * p)
                * phi ** (-p)
                * np.asarray(w) ** params.p_prime
                * np.abs(u.u(ri)) ** p
                * ri ** (n - 1.0)
            )

        return _interior(inner, r, R)

    res = integrate(f, 0.0, R, tol=tol)
    return sphere_area(n) * res.value


def kernel_energy(u, params: ProblemParams, tol: float = 1e-10, method: str = "kernel") -> float:
    """Energy int v |u|**p with the doubly singular kernel v.

    method="kernel" integrates hardy_kernel directly; method="split"
    evaluates the two power terms of the kernel independently and sums
    the integrals, providing a second code path for cross-checking.
    """
    p, n, beta, R = params.p, params.n, params.beta, params.R
    area = sphere_area(n)

    if method == "kernel":

        def f(r):
            def inner(ri):
                return hardy_kernel(ri, params) * np.abs(u.u(ri)) ** p * ri ** (n - 1.0)

            return _interior(inner, r, R)

        return area * integrate(f, 0.0, R, tol=tol).value

    if method == "split":
        coef = (p - beta) / p

        def term1(r):
            def inner(ri):
                phi = radial_profile(ri, params)
                x = 1.0 / (1.0 + params.ln_s - np.log(phi))
                return (
                    coef**p
                    * ri ** (-(beta - 1.0) * p / (p - 1.0))
                    * phi ** (-p)
                    * (1.0 + p / (2.0 * (p - 1.0)) * x * x)
                    * np.abs(u.u(ri)) ** p
                    * ri ** (n - 1.0)
                )

            return _interior(inner, r, R)

        def term2(r):
            def inner(ri):
                phi = radial_profile(ri, params)
                x = 1.0 / (1.0 + params.ln_s - np.log(phi))
                return (
                    coef ** (p - 1.0)
                    * (n - beta)
                    * ri ** (-beta)
                    * phi ** (1.0 - p)
                    * (1.0 - x - abs(params.b) * x * x)
                    * np.abs(u.u(ri)) ** p
                    * ri ** (n - 1.0)
                )

            return _interior(inner, r, R)

        v1 = integrate(term1, 0.0, R, tol=tol).value
        v2 = integrate(term2, 0.0, R, tol=tol).value
        return area * (v1 + v2)

    raise ValueError(f"unknown method {method!r}")


@dataclass(frozen=True)
class HardyCheck:
    """Result of the inequality checks for one trial function.

    ``convex_margin`` refers to the convex form with the bare quotient
    energy as the middle term (the printed form); ``convex_margin_field``
    uses the field energy, the variant the divergence machinery actually
    yields.  The field variant implies the linear inequality by the
    unit-slope Young step.
    """

    trial: str
    gradient: float
    quotient: float
    field: float
    kernel: float
    linear_margin: float
    convex_rhs: float
    convex_margin: float
    convex_rhs_field: float
    convex_margin_field: float
    passed_linear: bool
    passed_convex: bool
    passed_convex_field: bool
    degenerate: bool = False


def _convex_rhs(p: float, middle: float, kernel: float) -> float:
    return (1.0 / p) ** p * ((p - 1.0) * middle + kernel) ** p / middle ** (p - 1.0)


def check_hardy_linear(u, params: ProblemParams, tol: float = 1e-10):
    """Check gradient_energy >= kernel_energy with relative slack."""
    L = gradient_energy(u, params, tol=tol)
    N = kernel_energy(u, params, tol=tol)
    margin = L - N
    slack = SLACK_COEF * max(L, 1.0)
    return {"gradient": L, "kernel": N, "margin": margin, "passed": margin >= -slack}


def check_hardy_convex(u, params: ProblemParams, tol: float = 1e-10, middle: str = "quotient"):
    """Check the convex form of the inequality.

    gradient >= (1/p)**p * ((p-1) mid + N)**p / mid**(p-1), where mid is
    the quotient energy K (middle="quotient", the printed form) or the
    field energy M (middle="field", the derivation-backed form; this one
    implies the linear inequality with unit Young slope).  Degenerate
    when the middle term vanishes (only for the zero function).
    """
    p = params.p
    L = gradient_energy(u, params, tol=tol)
    mid = (
        relative_gradient_energy(u, params, tol=tol)
        if middle == "quotient"
        else field_energy(u, params, tol=tol)
    )
    N = kernel_energy(u, params, tol=tol)
    if mid <= 0.0:
        return {
            "gradient": L,
            "middle": mid,
            "kernel": N,
            "rhs": 0.0,
            "margin": 0.0,
            "passed": True,
            "degenerate": True,
        }
    rhs = _convex_rhs(p, mid, N)
    margin = L - rhs
    slack = SLACK_COEF * max(L, 1.0)
    return {
        "gradient": L,
        "middle": mid,
        "kernel": N,
        "rhs": rhs,
        "margin": margin,
        "passed": margin >= -slack,
        "degenerate": False,
    }


def sweep_checks(params: ProblemParams, trials=None, tol: float = 1e-10):
    """Run the linear and both convex inequality checks over a trial family."""
    if trials is None:
        trials = default_trials(params.R)
    out = []
    for u in trials:
        L = gradient_energy(u, params, tol=tol)
        K = relative_gradient_energy(u, params, tol=tol)
        M = field_energy(u, params, tol=tol)
        N = kernel_energy(u, params, tol=tol)
        slack = SLACK_COEF * max(L, 1.0)
        degenerate = K <= 0.0 or M <= 0.0
        rhs_q = 0.0 if degenerate else _convex_rhs(params.p, K, N)
        rhs_f = 0.0 if degenerate else _convex_rhs(params.p, M, N)
        out.append(
            HardyCheck(
                trial=getattr(u, "label", repr(u)),
                gradient=L,
                quotient=K,
                field=M,
                kernel=N,
                linear_margin=L - N,
                convex_rhs=rhs_q,
                convex_margin=L - rhs_q,
                convex_rhs_field=rhs_f,
                convex_margin_field=L - rhs_f,
                passed_linear=(L - N) >= -slack,
                passed_convex=degenerate or (L - rhs_q) >= -slack,
                passed_convex_field=degenerate or (L - rhs_f) >= -slack,
                degenerate=degenerate,
            )
        )
    return out


def pointwise_divergence_margin(r, params: ProblemParams):
    """Pointwise margin of the divergence inequality behind the kernel.

    Equals |phi'/phi|**p times the supersolution residual at ln(phi(r));
    nonnegative wherever the residual is, which is what makes the
    integral inequalities above hold.
    """
    phi = radial_profile(r, params)
    dphi = radial_profile_deriv(r, params)
    t = np.log(np.asarray(phi, dtype=float))
    out = np.abs(np.asarray(dphi) / phi) ** params.p * supersolution_residual(t, params)
    return out if np.ndim(out) else float(out)
