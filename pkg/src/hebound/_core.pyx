# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled fast path for the hot kernels.

Mirrors hebound._pykernels exactly: Hardy kernel on a radius grid, the
ODE-inequality residual on a window grid, and the adaptive Cash-Karp
shooting loop for the radial eigenproblem in flux form.
"""

from libc.math cimport copysign, expm1, fabs, log, pow, sqrt, NAN

import numpy as np

NAME = "compiled"


def hardy_kernel_grid(r, params):
    cdef double p = params.p
    cdef double n = params.n
    cdef double beta = params.beta
    cdef double R = params.R
    cdef double b = params.b
    cdef double ln_s = params.ln_s
    cdef double kappa = (p - beta) / (p - 1.0)
    cdef double Rk = pow(R, kappa)
    cdef double lnRk = kappa * log(R)
    cdef double coef = (p - beta) / p
    cdef double cf = pow(coef, p)
    cdef double cs = pow(coef, p - 1.0) * (n - beta)
    cdef double e1 = -(beta - 1.0) * p / (p - 1.0)
    cdef double half_pp = p / (2.0 * (p - 1.0))
    cdef double ab = fabs(b)

    r_arr = np.ascontiguousarray(r, dtype=np.float64)
    out = np.empty(r_arr.shape[0], dtype=np.float64)
    cdef double[::1] rv = r_arr
    cdef double[::1] ov = out
    cdef Py_ssize_t i, m = rv.shape[0]
    cdef double q, one_minus, phi, log_phi, x, first, second
    with nogil:
        for i in range(m):
            q = kappa * log(rv[i] / R)
            one_minus = -expm1(q)
            phi = Rk * one_minus
            log_phi = lnRk + log(one_minus)
            x = 1.0 / (1.0 + ln_s - log_phi)
            first = cf * pow(rv[i], e1) * pow(phi, -p) * (1.0 + half_pp * x * x)
            second = cs * pow(rv[i], -beta) * pow(phi, 1.0 - p) * (1.0 - x - ab * x * x)
            ov[i] = first + second
    return out


def supersolution_residual_x_grid(x, double p, double b):
    cdef double pp = p / (p - 1.0)
    cdef double c1 = pow(1.0 / pp, p - 1.0)
    cdef double C = pow(1.0 / pp, p)

    x_arr = np.ascontiguousarray(x, dtype=np.float64)
    out = np.empty(x_arr.shape[0], dtype=np.float64)
    cdef double[::1] xv = x_arr
    cdef double[::1] ov = out
    cdef Py_ssize_t i, m = xv.shape[0]
    cdef double xi, bracket
    with nogil:
        for i in range(m):
            xi = xv[i]
            bracket = 1.0 - xi + b * xi * xi
            ov[i] = (
                c1 * (1.0 - 2.0 * b * xi) * xi * xi
                + (p - 1.0) * c1 * bracket
                - (p - 1.0) * C * pow(bracket, pp)
                - C * (1.0 + 0.5 * pp * xi * xi)
            )
    return out


# Cash-Karp tableau
cdef double B21 = 1.0 / 5.0
cdef double B31 = 3.0 / 40.0, B32 = 9.0 / 40.0
cdef double B41 = 3.0 / 10.0, B42 = -9.0 / 10.0, B43 = 6.0 / 5.0
cdef double B51 = -11.0 / 54.0, B52 = 5.0 / 2.0, B53 = -70.0 / 27.0, B54 = 35.0 / 27.0
cdef double B61 = 1631.0 / 55296.0, B62 = 175.0 / 512.0, B63 = 575.0 / 13824.0
cdef double B64 = 44275.0 / 110592.0, B65 = 253.0 / 4096.0
cdef double C1 = 37.0 / 378.0, C3 = 250.0 / 621.0, C4 = 125.0 / 594.0, C6 = 512.0 / 1771.0
cdef double D1 = 2825.0 / 27648.0, D3 = 18575.0 / 48384.0, D4 = 13525.0 / 55296.0
cdef double D5 = 277.0 / 14336.0, D6 = 1.0 / 4.0


cdef inline void _rhs(double p, double n, double lam, double r, double u,
                      double rho, double* du, double* drho) nogil:
    cdef double rn = pow(r, n - 1.0)
    du[0] = copysign(pow(fabs(rho / rn), 1.0 / (p - 1.0)), rho)
    drho[0] = -lam * rn * copysign(pow(fabs(u), p - 1.0), u)


cdef inline void _ck_step(double p, double n, double lam, double r, double u,
                          double rho, double h, double* u5, double* rho5,
                          double* eu, double* erho) nogil:
    cdef double k1u, k1r, k2u, k2r, k3u, k3r, k4u, k4r, k5u, k5r, k6u, k6r
    cdef double u4, rho4
    _rhs(p, n, lam, r, u, rho, &k1u, &k1r)
    _rhs(p, n, lam, r + 0.2 * h, u + h * B21 * k1u, rho + h * B21 * k1r, &k2u, &k2r)
    _rhs(p, n, lam, r + 0.3 * h,
         u + h * (B31 * k1u + B32 * k2u),
         rho + h * (B31 * k1r + B32 * k2r), &k3u, &k3r)
    _rhs(p, n, lam, r + 0.6 * h,
         u + h * (B41 * k1u + B42 * k2u + B43 * k3u),
         rho + h * (B41 * k1r + B42 * k2r + B43 * k3r), &k4u, &k4r)
    _rhs(p, n, lam, r + h,
         u + h * (B51 * k1u + B52 * k2u + B53 * k3u + B54 * k4u),
         rho + h * (B51 * k1r + B52 * k2r + B53 * k3r + B54 * k4r), &k5u, &k5r)
    _rhs(p, n, lam, r + 0.875 * h,
         u + h * (B61 * k1u + B62 * k2u + B63 * k3u + B64 * k4u + B65 * k5u),
         rho + h * (B61 * k1r + B62 * k2r + B63 * k3r + B64 * k4r + B65 * k5r),
         &k6u, &k6r)
    u5[0] = u + h * (C1 * k1u + C3 * k3u + C4 * k4u + C6 * k6u)
    rho5[0] = rho + h * (C1 * k1r + C3 * k3r + C4 * k4r + C6 * k6r)
    u4 = u + h * (D1 * k1u + D3 * k3u + D4 * k4u + D5 * k5u + D6 * k6u)
    rho4 = rho + h * (D1 * k1r + D3 * k3r + D4 * k4r + D5 * k5r + D6 * k6r)
    eu[0] = u5[0] - u4
    erho[0] = rho5[0] - rho4


def shoot(double p, double n, double lam, double r0, double r_stop,
          double rtol, bint want_zero):
    """Same contract as hebound._pykernels.shoot."""
    cdef double pp = p / (p - 1.0)
    cdef double c = pow(lam / n, 1.0 / (p - 1.0)) * (p - 1.0) / p
    cdef double u = 1.0 - c * pow(r0, pp)
    cdef double rho = -(lam / n) * pow(r0, n)
    cdef double atol_u = 1e-14
    cdef double atol_rho = 1e-14 * (lam / n) * pow(r_stop, n)
    cdef double r = r0
    cdef double h = 0.5 * r0
    cdef double h_floor = 1e-14 * r_stop
    cdef long steps = 0
    cdef double u5, rho5, eu, erho, err, err_u, err_rho, factor
    cdef double r_prev, u_prev, rho_prev, h_used, r_zero
    cdef double lo_f, hi_f, mid, um, d1, d2, d3
    cdef int underflow = 0, budget = 0
    cdef bint crossed = False
    cdef int j

    with nogil:
        while r < r_stop:
            if h > 0.25 * r + 1e-30:
                h = 0.25 * r + 1e-30
            if h > 0.05 * r_stop:
                h = 0.05 * r_stop
            if h > r_stop - r:
                h = r_stop - r
            _ck_step(p, n, lam, r, u, rho, h, &u5, &rho5, &eu, &erho)
            err_u = fabs(eu) / (atol_u + rtol * fabs(u))
            err_rho = fabs(erho) / (atol_rho + rtol * fabs(rho))
            err = err_u if err_u > err_rho else err_rho
            if err <= 1.0:
                r_prev = r
                u_prev = u
                rho_prev = rho
                h_used = h
                r += h
                u = u5
                rho = rho5
                steps += 1
                if u <= 0.0:
                    crossed = True
                    r_zero = NAN
                    if want_zero:
                        lo_f = 0.0
                        hi_f = 1.0
                        for j in range(60):
                            mid = 0.5 * (lo_f + hi_f)
                            _ck_step(p, n, lam, r_prev, u_prev, rho_prev,
                                     mid * h_used, &um, &d1, &d2, &d3)
                            if um <= 0.0:
                                hi_f = mid
                            else:
                                lo_f = mid
                        r_zero = r_prev + 0.5 * (lo_f + hi_f) * h_used
                    break
            if err > 0.0:
                factor = 0.9 * pow(err, -0.2)
            else:
                factor = 5.0
            if factor > 5.0:
                factor = 5.0
            if factor < 0.2:
                factor = 0.2
            h *= factor
            if h < h_floor:
                underflow = 1
                break
            if steps > 2000000:
                budget = 1
                break

    if underflow:
        raise RuntimeError(f"shooting step size underflow at r={r:.6g} (lam={lam:.6g})")
    if budget:
        raise RuntimeError("shooting step budget exhausted")
    if crossed:
        return True, r_zero, u, steps
    return False, NAN, u, steps
