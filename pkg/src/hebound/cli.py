"""Command line surface: bounds, verification suites, sweeps.

Subcommands: bound, verify, sweep, eigen-ref, fk.  Output is JSON or
CSV (one header row, LF endings); JSON numbers carry 17 significant
digits so regression baselines round-trip exactly, and non-finite
numbers are an error rather than output.

Exit codes: 0 success / all checks pass, 1 verification failure,
2 invalid input, 3 numeric or infrastructure failure.  Environment
overrides: HEB_TOL (default tolerance), HEB_JOBS (sweep workers).
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import backend, eigen, hardy, kernelmath, poisson
from .kernelmath import ValidationError, b_threshold, validate
from .quadrature import QuadratureError

_SUITE_ALIASES = {"lemma2": "ode"}
_SUITES = ("ode", "hardy", "poisson")


class _NumericOutputError(RuntimeError):
    pass


def _fmt(x) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise _NumericOutputError(f"non-finite number in output: {x!r}")
    return format(x, ".17g")


def _to_json(obj, indent=0) -> str:
    pad = "  " * indent
    pad_in = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{pad_in}"{k}": {_to_json(v, indent + 1)}' for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{pad_in}{_to_json(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt(obj)
    if isinstance(obj, str):
        return '"' + obj.replace("\\", "\\\\").replace('"', '\\"') + '"'
    raise TypeError(f"cannot serialize {type(obj)!r}")


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def _emit(text: str, out_path: str | None):
    if not text.endswith("\n"):
        text += "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _int_dimension(value, name: str = "n") -> int:
    if float(value) != int(value):
        raise ValidationError(f"--{name} must be an integer dimension, got {value}")
    return int(value)


def _parse_range(text: str, name: str):
    """A scalar '3' or an inclusive range 'start:stop:count'."""
    parts = text.split(":")
    try:
        if len(parts) == 1:
            return [float(parts[0])]
        if len(parts) == 3:
            start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
            if count < 1:
                raise ValidationError(f"empty range for --{name}: {text!r}")
            if count == 1:
                return [start]
            return list(np.linspace(start, stop, count))
    except ValueError as exc:
        raise ValidationError(f"cannot parse --{name} {text!r}: {exc}") from exc
    raise ValidationError(f"--{name} expects SCALAR or START:STOP:COUNT, got {text!r}")


def _params_payload(prm) -> dict:
    return {
        "p": prm.p,
        "n": prm.n,
        "beta": prm.beta,
        "R": prm.R,
        "b": prm.b,
        "S": prm.s_norm,
        "kappa": prm.kappa,
        "x_limit": prm.x_limit,
    }


def _bessel_first_zero(alpha: float) -> float:
    from scipy.optimize import brentq
    from scipy.special import jv

    x = alpha + 1e-3
    step = 0.1
    prev = jv(alpha, x)
    while x < alpha + 20.0:
        x_next = x + step
        cur = jv(alpha, x_next)
        if prev > 0.0 >= cur or prev >= 0.0 > cur:
            return float(brentq(lambda t: jv(alpha, t), x, x_next, xtol=1e-14, rtol=1e-15))
        prev, x = cur, x_next
    raise QuadratureError(f"no Bessel zero located for order {alpha}")


# ----------------------------------------------------------------- bound


def cmd_bound(args) -> int:
    res = eigen.bound_for_ball(args.p, _int_dimension(args.n), args.R, b=args.b, s_norm=args.S)
    payload = {
        "lambda_lower": res.lambda_lower,
        "beta_star": res.beta_star,
        "r_star": res.r_star,
        "classical_eq6": res.classical_eq6,
        "improvement_ratio": res.improvement_ratio,
        "params": _params_payload(res.params),
    }
    if args.format == "json":
        _emit(_to_json(payload), args.out)
    else:
        header = [
            "lambda_lower",
            "beta_star",
            "r_star",
            "classical_eq6",
            "improvement_ratio",
            "p",
            "n",
            "R",
            "b",
            "S",
        ]
        prm = res.params
        row = [
            res.lambda_lower,
            res.beta_star,
            res.r_star,
            res.classical_eq6,
            res.improvement_ratio,
            prm.p,
            prm.n,
            prm.R,
            prm.b,
            prm.s_norm,
        ]
        _emit(_csv_text(header, [row]), args.out)
    return 0


# ----------------------------------------------------------------- eigen-ref


def cmd_eigen_ref(args) -> int:
    res = eigen.reference_eigenvalue_ball(args.p, _int_dimension(args.n), args.R, lam_rtol=args.tol)
    payload = {
        "lambda_ref": res.lambda_ref,
        "zero_radius_error": res.zero_radius_error,
        "bisection_iterations": res.bisection_iterations,
        "ode_steps": res.ode_steps,
        "p": args.p,
        "n": int(args.n),
        "R": args.R,
    }
    closed = None
    if args.p == 2.0:
        zero = _bessel_first_zero(args.n / 2.0 - 1.0)
        closed = (zero / args.R) ** 2
    elif int(args.n) == 1:
        closed = kernelmath.eigen_1d_closed_form(args.p) / args.R**args.p
    if closed is not None:
        payload["closed_form"] = closed
        payload["closed_form_rel_deviation"] = abs(res.lambda_ref - closed) / closed
    if args.format == "json":
        _emit(_to_json(payload), args.out)
    else:
        header = list(payload.keys())
        _emit(_csv_text(header, [list(payload.values())]), args.out)
    return 0


# ----------------------------------------------------------------- fk


def cmd_fk(args) -> int:
    res = eigen.faber_krahn_bound(args.volume, args.p, _int_dimension(args.n), b=args.b, s_norm=args.S)
    payload = {
        "volume": args.volume,
        "R_star": res.params.R,
        "lambda_lower": res.lambda_lower,
        "beta_star": res.beta_star,
        "r_star": res.r_star,
        "classical_eq6": res.classical_eq6,
        "improvement_ratio": res.improvement_ratio,
        "params": _params_payload(res.params),
    }
    if args.format == "json":
        _emit(_to_json(payload), args.out)
    else:
        flat = {k: v for k, v in payload.items() if k != "params"}
        _emit(_csv_text(list(flat.keys()), [list(flat.values())]), args.out)
    return 0


# ----------------------------------------------------------------- sweep

_SWEEP_BASE_COLS = [
    "p",
    "n",
    "R",
    "beta_star",
    "r_star",
    "lambda_lower",
    "classical_eq6",
    "beta_limit_bound",
    "improvement_ratio",
]


def _sweep_cell(cell):
    p, n, R, b, s_norm, with_ref = cell
    res = eigen.bound_for_ball(p, n, R, b=b, s_norm=s_norm)
    b_eff = eigen.default_b(p) if b is None else b
    edge = validate(p, n, n - 1e-6, R, b_eff, s_norm)
    _, v_lim = eigen.min_kernel_over_radius(edge)
    row = {
        "p": p,
        "n": n,
        "R": R,
        "beta_star": res.beta_star,
        "r_star": res.r_star,
        "lambda_lower": res.lambda_lower,
        "classical_eq6": res.classical_eq6,
        "beta_limit_bound": v_lim,
        "improvement_ratio": res.improvement_ratio,
    }
    if with_ref:
        ref = eigen.reference_eigenvalue_ball(p, n, R)
        row["lambda_ref"] = ref.lambda_ref
        row["lower_over_ref"] = res.lambda_lower / ref.lambda_ref
    return row


def cmd_sweep(args) -> int:
    ps = _parse_range(args.p, "p")
    Rs = _parse_range(args.R, "R")
    n = _int_dimension(args.n)
    if not ps or not Rs:
        raise ValidationError("empty parameter range")
    for p in ps:
        if not p > n:
            raise ValidationError(f"requires p > n for every grid point, got p={p}, n={n}")
    cells = [(p, n, R, args.b, args.S, args.with_ref) for p in ps for R in Rs]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_sweep_cell, cells))
    else:
        rows = [_sweep_cell(c) for c in cells]

    cols = _SWEEP_BASE_COLS + (["lambda_ref", "lower_over_ref"] if args.with_ref else [])
    if args.format == "json":
        payload = {
            "meta": {
                "subcommand": "sweep",
                "p": args.p,
                "R": args.R,
                "n": n,
                "with_ref": args.with_ref,
                "jobs": args.jobs,
                "tol": args.tol,
            },
            "rows": [{c: row[c] for c in cols} for row in rows],
        }
        _emit(_to_json(payload), args.out)
    else:
        _emit(_csv_text(cols, [[row[c] for c in cols] for row in rows]), args.out)
    return 0


# ----------------------------------------------------------------- verify


def _verify_ode(args, checks):
    # Default grid sticks to exponents whose residual is certified
    # nonnegative on the kernel window at the default coefficient; for
    # larger p that needs a more negative b (pass --p/--b explicitly).
    ps = _parse_range(args.p, "p") if args.p else [2.0, 2.5, 3.0, 4.0]
    grid_points = 2000
    for p in ps:
        if p < 2.0:
            raise ValidationError(f"the ODE-inequality suite requires p >= 2, got p={p}")
        b = args.b if args.b is not None else b_threshold(p) - 0.1
        if not b < b_threshold(p):
            raise ValidationError(
                f"b above threshold: requires b < {b_threshold(p):.9g}, got b={b}"
            )
        if not b < 0.0:
            raise ValidationError(f"requires b < 0, got b={b}")
        ab = abs(b)
        x_limit = (math.sqrt(1.0 + 4.0 * ab) - 1.0) / (2.0 * ab)
        x_used = x_limit / (1.0 + x_limit)  # top of the window under the default S policy
        xs_used = np.geomspace(1e-6, 0.999 * x_used, grid_points)
        res_used = backend.supersolution_residual_x_grid(xs_used, p, b)
        xs_full = np.geomspace(1e-6, 0.999 * x_limit, grid_points)
        res_full = backend.supersolution_residual_x_grid(xs_full, p, b)
        i_full = int(np.argmin(res_full))
        passed = bool(res_used.min() >= -1e-12)
        checks.append(
            {
                "suite": "ode",
                "label": f"p={p:g} b={b:.6g}",
                "passed": passed,
                "detail": (
                    f"min residual {res_used.min():+.3e} on the kernel window x<=({0.999 * x_used:.4f}); "
                    f"full window min {res_full.min():+.3e} at x={xs_full[i_full]:.4f} (reported)"
                ),
            }
        )


def _verify_poisson(args, checks):
    radii = np.arange(0.1, 0.95, 0.1)
    for p, n, beta in ((3.0, 2, 1.5), (4.0, 3, 2.0), (2.0, 2, 1.5)):
        prm = validate(p, n, beta, 1.0, -1.0)
        sol = poisson.RadialSolution(
            lambda s, _prm=prm: kernelmath.poisson_source(s, _prm), prm
        )
        approx = sol.evaluate(radii)
        exact = kernelmath.radial_profile(radii, prm)
        rel = float(np.max(np.abs(approx - exact) / np.abs(exact)))
        checks.append(
            {
                "suite": "poisson",
                "label": f"closed-form p={p:g} n={n} beta={beta:g}",
                "passed": rel <= 1e-8,
                "detail": f"max rel err {rel:.3e} over 9 radii",
            }
        )
    prm = validate(3.0, 2, 1.5, 1.0, -1.0)
    sol = poisson.wrap_solution(
        lambda r: kernelmath.radial_profile(r, prm),
        lambda s: kernelmath.poisson_source(s, prm),
        prm,
    )
    resid = poisson.ode_residual(sol, 0.5)
    scale = 0.5 ** (prm.n - 1.0) * kernelmath.poisson_source(0.5, prm)
    checks.append(
        {
            "suite": "poisson",
            "label": "flux ODE residual p=3 n=2 beta=1.5 at r=0.5",
            "passed": abs(resid) <= 1e-6 * scale,
            "detail": f"|residual|/(r^(n-1) h) = {abs(resid) / scale:.3e}",
        }
    )


def _verify_hardy(args, checks):
    ps = _parse_range(args.p, "p") if args.p else [2.5, 3.0, 4.0, 6.0]
    ns = [int(v) for v in (_parse_range(args.n, "n") if args.n else [2])]
    betas = _parse_range(args.beta, "beta") if args.beta else [1.5]
    Rs = _parse_range(args.R, "R") if args.R else [1.0]
    rng = np.random.default_rng(args.seed)
    for p in ps:
        for n in ns:
            if not p > n:
                continue
            for beta in betas:
                for R in Rs:
                    b = args.b if args.b is not None else b_threshold(p) - 0.1
                    prm = validate(p, n, beta, R, b, args.S)
                    trials = list(hardy.default_trials(R))
                    for _ in range(args.extra_trials):
                        trials.append(
                            hardy.TrialFunction(
                                gamma=float(rng.uniform(1.0, 3.0)),
                                a=float(rng.uniform(1.0, 2.0)),
                                m=float(rng.uniform(1.0, 4.0)),
                                R=R,
                            )
                        )
                    results = hardy.sweep_checks(prm, trials)
                    lin = min(c.linear_margin for c in results)
                    cvx_f = min(c.convex_margin_field for c in results if not c.degenerate)
                    cvx_q = min(c.convex_margin for c in results if not c.degenerate)
                    ok = all(c.passed_linear and c.passed_convex_field for c in results)
                    checks.append(
                        {
                            "suite": "hardy",
                            "label": f"p={p:g} n={n} beta={beta:g} R={R:g} trials={len(trials)}",
                            "passed": ok,
                            "detail": (
                                f"min linear margin {lin:.3e}, min convex margin {cvx_f:.3e}; "
                                f"quotient-middle variant min {cvx_q:.3e} (reported)"
                            ),
                        }
                    )


def cmd_verify(args) -> int:
    suite = _SUITE_ALIASES.get(args.suite, args.suite)
    if suite != "all" and suite not in _SUITES:
        raise ValidationError(f"unknown suite {args.suite!r}")
    wanted = _SUITES if suite == "all" else (suite,)
    checks: list[dict] = []
    if "ode" in wanted:
        _verify_ode(args, checks)
    if "poisson" in wanted:
        _verify_poisson(args, checks)
    if "hardy" in wanted:
        _verify_hardy(args, checks)

    n_pass = sum(1 for c in checks if c["passed"])
    all_pass = n_pass == len(checks)
    if args.report_format == "json":
        payload = {"checks": checks, "total": len(checks), "passed": n_pass, "all_pass": all_pass}
        _emit(_to_json(payload), args.out)
    else:
        lines = [
            f"[{c['suite']}] {c['label']}: {'PASS' if c['passed'] else 'FAIL'} ({c['detail']})"
            for c in checks
        ]
        lines.append(f"summary: {len(checks)} checks, {n_pass} PASS, {len(checks) - n_pass} FAIL")
        _emit("\n".join(lines), args.out)
    return 0 if all_pass else 1


# ----------------------------------------------------------------- parser


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="hebound",
        description="Eigenvalue lower bounds for the p-Laplacian from a doubly "
        "singular Hardy kernel, with verification suites.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--out", default=None, help="write output to PATH instead of stdout")
        sp.add_argument("--tol", type=float, default=None, help="tolerance (env HEB_TOL)")
        sp.add_argument("--jobs", type=int, default=None, help="worker processes (env HEB_JOBS)")

    sp = sub.add_parser("bound", help="optimized bound for a ball")
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--n", type=float, required=True)
    sp.add_argument("--R", type=float, required=True)
    sp.add_argument("--b", type=float, default=None)
    sp.add_argument("--S", type=float, default=None)
    common(sp)
    sp.set_defaults(func=cmd_bound)

    sp = sub.add_parser("verify", help="run verification suites")
    sp.add_argument(
        "--suite",
        default="all",
        help="all, ode (alias lemma2), hardy, or poisson",
    )
    sp.add_argument(
        "--report-format",
        choices=("text", "json"),
        default="text",
        dest="report_format",
        help="verification report style (default: per-check text lines)",
    )
    sp.add_argument("--p", default=None, help="scalar or START:STOP:COUNT")
    sp.add_argument("--n", default=None, help="scalar or range (hardy suite)")
    sp.add_argument("--beta", default=None, help="scalar or range (hardy suite)")
    sp.add_argument("--R", default=None, help="scalar or range (hardy suite)")
    sp.add_argument("--b", type=float, default=None)
    sp.add_argument("--S", type=float, default=None)
    sp.add_argument("--seed", type=int, default=0, help="seed for extra random trials")
    sp.add_argument("--extra-trials", type=int, default=0, dest="extra_trials")
    common(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("sweep", help="bound table over a (p, R) grid")
    sp.add_argument("--p", required=True, help="scalar or START:STOP:COUNT")
    sp.add_argument("--R", required=True, help="scalar or START:STOP:COUNT")
    sp.add_argument("--n", type=float, required=True)
    sp.add_argument("--b", type=float, default=None)
    sp.add_argument("--S", type=float, default=None)
    sp.add_argument("--with-ref", action="store_true", dest="with_ref",
                    help="include the shooting reference (slow)")
    common(sp)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("eigen-ref", help="reference eigenvalue by shooting")
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--n", type=float, required=True)
    sp.add_argument("--R", type=float, required=True)
    common(sp)
    sp.set_defaults(func=cmd_eigen_ref)

    sp = sub.add_parser("fk", help="bound for any domain of given volume")
    sp.add_argument("--volume", type=float, required=True)
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--n", type=float, required=True)
    sp.add_argument("--b", type=float, default=None)
    sp.add_argument("--S", type=float, default=None)
    common(sp)
    sp.set_defaults(func=cmd_fk)

    return ap


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.tol is None:
        args.tol = float(os.environ.get("HEB_TOL", "1e-10"))
    if args.jobs is None:
        args.jobs = int(os.environ.get("HEB_JOBS", "1"))
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (QuadratureError, _NumericOutputError, RuntimeError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
