# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled numerical kernels; see ``_kernels_py`` for the reference version."""

import numpy as np
cimport numpy as cnp
from libc.math cimport exp, cos, sin, log, fabs, floor, ceil, sqrt, atan2, isfinite, M_PI, copysign

cnp.import_array()

BACKEND = "cython"

cdef double TWO_PI = 2.0 * M_PI
cdef double EPS = 2.220446049250313e-16


cdef inline void _kin(const double[:] times, const double[:] amps, double z0, double v0,
                      double a0, double t, double* out) noexcept nogil:
    cdef Py_ssize_t i, n = times.shape[0]
    cdef double z = z0 + v0 * t + 0.5 * a0 * t * t
    cdef double v = v0 + a0 * t
    cdef double a = a0
    cdef double j = 0.0
    cdef double d
    for i in range(n):
        if times[i] > t:
            break
        d = t - times[i]
        j += amps[i]
        a += amps[i] * d
        v += 0.5 * amps[i] * d * d
        z += amps[i] * d * d * d / 6.0
    out[0] = z
    out[1] = v
    out[2] = a
    out[3] = j


def kin_eval(const double[:] times, const double[:] amps, double z0, double v0, double a0,
             double t):
    cdef double out[4]
    _kin(times, amps, z0, v0, a0, t, out)
    return out[0], out[1], out[2], out[3]


def kin_eval_many(const double[:] times, const double[:] amps, double z0, double v0,
                  double a0, const double[:] tq):
    cdef Py_ssize_t k, m = tq.shape[0]
    res = np.empty((m, 4))
    cdef double[:, ::1] r = res
    cdef double out[4]
    with nogil:
        for k in range(m):
            _kin(times, amps, z0, v0, a0, tq[k], out)
            r[k, 0] = out[0]
            r[k, 1] = out[1]
            r[k, 2] = out[2]
            r[k, 3] = out[3]
    return res


cdef inline void _osc_interval(double* x, double* xd, double acc, double jerk, double w0,
                               double delta, double wd, double m_star, double dt) noexcept nogil:
    cdef double w02 = w0 * w0
    cdef double beta = -m_star * jerk / w02
    cdef double alpha = -m_star * acc / w02 - 2.0 * delta * beta / w02
    cdef double y = x[0] - alpha
    cdef double yd = xd[0] - beta
    cdef double e = exp(-delta * dt)
    cdef double c = cos(wd * dt)
    cdef double s = sin(wd * dt)
    cdef double y1 = e * (y * c + (yd + delta * y) / wd * s)
    cdef double yd1 = e * (yd * c - (delta * yd + w02 * y) / wd * s)
    x[0] = y1 + alpha + beta * dt
    xd[0] = yd1 + beta


cdef inline void _osc(const double[:] times, const double[:] amps, double acc0, double w0,
                      double delta, double wd, double m_star, double x0, double xd0, double t,
                      double* out) noexcept nogil:
    cdef Py_ssize_t i, n = times.shape[0]
    cdef double x = x0, xd = xd0, acc = acc0, jerk = 0.0, tc = 0.0
    for i in range(n):
        if times[i] > t:
            break
        if times[i] > tc:
            _osc_interval(&x, &xd, acc, jerk, w0, delta, wd, m_star, times[i] - tc)
            acc += jerk * (times[i] - tc)
            tc = times[i]
        jerk += amps[i]
    if t > tc:
        _osc_interval(&x, &xd, acc, jerk, w0, delta, wd, m_star, t - tc)
    out[0] = x
    out[1] = xd


def osc_propagate(const double[:] times, const double[:] amps, double acc0, double w0,
                  double delta, double wd, double m_star, double x0, double xd0, double t):
    cdef double out[2]
    _osc(times, amps, acc0, w0, delta, wd, m_star, x0, xd0, t, out)
    return out[0], out[1]


def osc_propagate_many(const double[:] times, const double[:] amps, double acc0, double w0,
                       double delta, double wd, double m_star, double x0, double xd0,
                       const double[:] tq):
    cdef Py_ssize_t k, m = tq.shape[0]
    res = np.empty((m, 2))
    cdef double[:, ::1] r = res
    cdef double out[2]
    with nogil:
        for k in range(m):
            _osc(times, amps, acc0, w0, delta, wd, m_star, x0, xd0, tq[k], out)
            r[k, 0] = out[0]
            r[k, 1] = out[1]
    return res


def modal_residual(const double[:] times, const double[:] amps, double delta, double wd):
    cdef Py_ssize_t i, n = times.shape[0]
    cdef double re = 0.0, im = 0.0, m
    for i in range(n):
        m = amps[i] * exp(delta * times[i])
        re += m * cos(wd * times[i])
        im -= m * sin(wd * times[i])
    return re, im


def profile_peaks(const double[:] times, const double[:] amps, double v0, double a0):
    cdef Py_ssize_t i, n = times.shape[0]
    cdef double v_peak = fabs(v0), a_peak = fabs(a0), j_peak = 0.0
    cdef double v = v0, a = a0, j = 0.0, tc = 0.0, dt, tau
    for i in range(n):
        dt = times[i] - tc
        if dt > 0.0:
            if j != 0.0:
                tau = -a / j
                if 0.0 < tau < dt:
                    v_peak = max(v_peak, fabs(v + a * tau + 0.5 * j * tau * tau))
            v += a * dt + 0.5 * j * dt * dt
            a += j * dt
            tc = times[i]
            v_peak = max(v_peak, fabs(v))
            a_peak = max(a_peak, fabs(a))
        j += amps[i]
        j_peak = max(j_peak, fabs(j))
    return v_peak, a_peak, j_peak


cdef inline double complex _cexp_neg(double delta, double wd, double t) noexcept nogil:
    # exp(-p t) with p = -delta + i wd
    cdef double m = exp(delta * t)
    return m * cos(wd * t) - 1j * m * sin(wd * t)


cdef inline double complex _q(int kind, double T, double D, double delta, double wd) noexcept nogil:
    cdef double complex a = 1.0 - _cexp_neg(delta, wd, T)
    cdef double complex b
    if kind == 2:
        b = 1.0 - _cexp_neg(delta, wd, T - D)
    else:
        b = 2.0 * (1.0 - _cexp_neg(delta, wd, 0.5 * (T - D)))
    return a / b


cdef inline double _wrap(double phi) noexcept nogil:
    return phi - TWO_PI * floor((phi + M_PI) / TWO_PI)


cdef inline double _cabs(double complex z) noexcept nogil:
    return sqrt(z.real * z.real + z.imag * z.imag)


cdef inline double _carg(double complex z) noexcept nogil:
    return atan2(z.imag, z.real)


cdef struct HCtx:
    int kind
    double D, delta, wd, ref
    long k


cdef inline double _xof(HCtx* c, double T, double* lnq) noexcept nogil:
    cdef double complex q = _q(c.kind, T, c.D, c.delta, c.wd)
    cdef double ph = c.ref + _wrap(_carg(q) - c.ref)
    lnq[0] = log(_cabs(q))
    return (TWO_PI * c.k - ph) / c.wd


cdef inline double _hf(HCtx* c, double T) noexcept nogil:
    cdef double lnq
    cdef double x = _xof(c, T, &lnq)
    return lnq - c.delta * x


cdef double _brent(HCtx* ctx, double a, double b, double fa, double fb) noexcept nogil:
    cdef double c, fc, d, e, tol, m, s, pp, qq, qa, r
    cdef int it
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    c = a
    fc = fa
    d = b - a
    e = d
    for it in range(200):
        if fb * fc > 0.0:
            c = a
            fc = fa
            d = b - a
            e = d
        if fabs(fc) < fabs(fb):
            a = b
            b = c
            c = a
            fa = fb
            fb = fc
            fc = fa
        tol = 4.0 * EPS * fabs(b) + 1e-300
        m = 0.5 * (c - b)
        if fabs(m) <= tol or fb == 0.0:
            return b
        if fabs(e) >= tol and fabs(fa) > fabs(fb):
            s = fb / fa
            if a == c:
                pp = 2.0 * m * s
                qq = 1.0 - s
            else:
                qa = fa / fc
                r = fb / fc
                pp = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0))
                qq = (qa - 1.0) * (r - 1.0) * (s - 1.0)
            if pp > 0.0:
                qq = -qq
            else:
                pp = -pp
            if 2.0 * pp < min(3.0 * m * qq - fabs(tol * qq), fabs(e * qq)):
                e = d
                d = pp / qq
            else:
                d = m
                e = m
        else:
            d = m
            e = m
        a = b
        fa = fb
        if fabs(d) > tol:
            b = b + d
        else:
            b = b + copysign(tol, m)
        fb = _hf(ctx, b)
    return b


def segment_roots(int kind, double D, double delta, double wd, double t_hi, int n_grid):
    cdef Py_ssize_t i
    cdef long k, k_lo, k_hi
    cdef double T, ph, prev = 0.0, h0, h1, x0, x1, x_hi = t_hi, lnq
    cdef bint have_prev = False
    cdef double complex q
    Ts_a = np.empty(n_grid)
    lnq_a = np.empty(n_grid)
    phi_a = np.empty(n_grid)
    cdef double[::1] Ts = Ts_a
    cdef double[::1] LQ = lnq_a
    cdef double[::1] PH = phi_a
    cdef double ph_min = 1e300, ph_max = -1e300
    cdef HCtx ctx
    roots = []
    for i in range(n_grid):
        T = D + (t_hi - D) * (i + 1) / n_grid
        Ts[i] = T
        q = _q(kind, T, D, delta, wd)
        if not (isfinite(q.real) and isfinite(q.imag)) or (q.real == 0.0 and q.imag == 0.0):
            LQ[i] = float("nan")
            PH[i] = prev if have_prev else float("nan")
            continue
        ph = _carg(q)
        if have_prev:
            ph = prev + _wrap(ph - prev)
        prev = ph
        have_prev = True
        LQ[i] = log(_cabs(q))
        PH[i] = ph
        ph_min = min(ph_min, ph)
        ph_max = max(ph_max, ph)
    if not have_prev:
        return roots
    k_lo = <long>floor(ph_min / TWO_PI) - 1
    k_hi = <long>ceil((ph_max + wd * x_hi) / TWO_PI) + 1
    ctx.kind = kind
    ctx.D = D
    ctx.delta = delta
    ctx.wd = wd
    for k in range(k_lo, k_hi + 1):
        ctx.k = k
        for i in range(n_grid - 1):
            h0 = LQ[i] - delta * (TWO_PI * k - PH[i]) / wd
            h1 = LQ[i + 1] - delta * (TWO_PI * k - PH[i + 1]) / wd
            if not (isfinite(h0) and isfinite(h1)) or h0 * h1 > 0.0:
                continue
            if h0 == 0.0 and i > 0:
                continue
            x0 = (TWO_PI * k - PH[i]) / wd
            x1 = (TWO_PI * k - PH[i + 1]) / wd
            if max(x0, x1) < -1e-3 * x_hi or min(x0, x1) > x_hi * 1.001:
                continue
            ctx.ref = PH[i]
            T = _brent(&ctx, Ts[i], Ts[i + 1], h0, h1)
            roots.append((T, _xof(&ctx, T, &lnq)))
    return roots
