"""Pure-Python implementation of the numerical kernels.

Mirrors ``_kernels.pyx`` function by function. Step lists are passed as two
equal-length float sequences ``times`` (sorted) and ``amps``.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

BACKEND = "python"

_TWO_PI = 2.0 * math.pi


def kin_eval(times, amps, z0, v0, a0, t):
    """Closed-form position, velocity, acceleration and jerk at ``t``."""
    z = z0 + v0 * t + 0.5 * a0 * t * t
    v = v0 + a0 * t
    a = a0
    j = 0.0
    for ti, ai in zip(times, amps):
        if ti > t:
            break
        d = t - ti
        j += ai
        a += ai * d
        v += 0.5 * ai * d * d
        z += ai * d * d * d / 6.0
    return z, v, a, j


def kin_eval_many(times, amps, z0, v0, a0, tq):
    out = np.empty((len(tq), 4))
    for k, t in enumerate(tq):
        out[k] = kin_eval(times, amps, z0, v0, a0, float(t))
    return out


def _osc_interval(x, xd, acc, jerk, w0, delta, wd, m_star, dt):
    # affine particular solution of x'' + 2 delta x' + w0^2 x = -m*(acc + jerk*tau)
    w02 = w0 * w0
    beta = -m_star * jerk / w02
    alpha = -m_star * acc / w02 - 2.0 * delta * beta / w02
    y = x - alpha
    yd = xd - beta
    e = math.exp(-delta * dt)
    c = math.cos(wd * dt)
    s = math.sin(wd * dt)
    y1 = e * (y * c + (yd + delta * y) / wd * s)
    yd1 = e * (yd * c - (delta * yd + w02 * y) / wd * s)
    return y1 + alpha + beta * dt, yd1 + beta


def osc_propagate(times, amps, acc0, w0, delta, wd, m_star, x0, xd0, t):
    """Exact oscillator state at ``t`` under the piecewise-linear acceleration."""
    x, xd = x0, xd0
    acc = acc0
    jerk = 0.0
    tc = 0.0
    for ti, ai in zip(times, amps):
        if ti > t:
            break
        if ti > tc:
            x, xd = _osc_interval(x, xd, acc, jerk, w0, delta, wd, m_star, ti - tc)
            acc += jerk * (ti - tc)
            tc = ti
        jerk += ai
    if t > tc:
        x, xd = _osc_interval(x, xd, acc, jerk, w0, delta, wd, m_star, t - tc)
    return x, xd


def osc_propagate_many(times, amps, acc0, w0, delta, wd, m_star, x0, xd0, tq):
    out = np.empty((len(tq), 2))
    for k, t in enumerate(tq):
        out[k] = osc_propagate(times, amps, acc0, w0, delta, wd, m_star, x0, xd0, float(t))
    return out


def modal_residual(times, amps, delta, wd):
    """Sum of a_i * exp(-p t_i) for the pole p = -delta + i wd, as (re, im)."""
    re = 0.0
    im = 0.0
    for ti, ai in zip(times, amps):
        m = ai * math.exp(delta * ti)
        re += m * math.cos(wd * ti)
        im -= m * math.sin(wd * ti)
    return re, im


def profile_peaks(times, amps, v0, a0):
    """Exact peaks of |v|, |acc| and |jerk| over [0, last step]."""
    v_peak = abs(v0)
    a_peak = abs(a0)
    j_peak = 0.0
    v, a, j = v0, a0, 0.0
    tc = 0.0
    for ti, ai in zip(times, amps):
        dt = ti - tc
        if dt > 0.0:
            if j != 0.0:
                tau = -a / j
                if 0.0 < tau < dt:
                    v_peak = max(v_peak, abs(v + a * tau + 0.5 * j * tau * tau))
            v += a * dt + 0.5 * j * dt * dt
            a += j * dt
            tc = ti
            v_peak = max(v_peak, abs(v))
            a_peak = max(a_peak, abs(a))
        j += ai
        j_peak = max(j_peak, abs(j))
    return v_peak, a_peak, j_peak


def _q(kind, T, D, p):
    a = 1.0 - cmath.exp(-p * T)
    if kind == 2:
        b = 1.0 - cmath.exp(-p * (T - D))
    else:
        b = 2.0 * (1.0 - cmath.exp(-p * (0.5 * (T - D))))
    return a / b


def _wrap(phi):
    return phi - _TWO_PI * math.floor((phi + math.pi) / _TWO_PI)


def _brent(f, a, b, fa, fb, maxiter=200):
    """Brent's method on a bracketing interval; returns the root location."""
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    c, fc = a, fa
    d = e = b - a
    for _ in range(maxiter):
        if fb * fc > 0.0:
            c, fc = a, fa
            d = e = b - a
        if abs(fc) < abs(fb):
            a, b, c = b, c, b
            fa, fb, fc = fb, fc, fb
        tol = 4.0 * 2.220446049250313e-16 * abs(b) + 1e-300
        m = 0.5 * (c - b)
        if abs(m) <= tol or fb == 0.0:
            return b
        if abs(e) >= tol and abs(fa) > abs(fb):
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
            if 2.0 * pp < min(3.0 * m * qq - abs(tol * qq), abs(e * qq)):
                e = d
                d = pp / qq
            else:
                d = m
                e = m
        else:
            d = m
            e = m
        a, fa = b, fb
        b = b + d if abs(d) > tol else b + math.copysign(tol, m)
        fb = f(b)
    return b


def segment_roots(kind, D, delta, wd, t_hi, n_grid):
    """Candidate (T, x) pairs solving exp(-p x) = Q(T) for a pulse structure.

    ``kind`` 2 is two positive pulses separated by a gap (x = first width),
    ``kind`` 3 is the contiguous +/-/+ bang-bang structure (x = first width).
    Roots are located on a grid over (D, t_hi] and refined with Brent's
    method; the caller validates durations and bounds.
    """
    p = complex(-delta, wd)
    Ts = [D + (t_hi - D) * (i + 1) / n_grid for i in range(n_grid)]
    lnq = []
    phi = []
    prev = None
    for T in Ts:
        q = _q(kind, T, D, p)
        if q == 0.0 or not cmath.isfinite(q):
            lnq.append(math.nan)
            phi.append(math.nan if prev is None else prev)
            continue
        ph = cmath.phase(q)
        if prev is not None:
            ph = prev + _wrap(ph - prev)
        prev = ph
        lnq.append(math.log(abs(q)))
        phi.append(ph)
    finite = [ph for ph in phi if not math.isnan(ph)]
    if not finite:
        return []
    x_hi = t_hi
    k_lo = math.floor(min(finite) / _TWO_PI) - 1
    k_hi = math.ceil((max(finite) + wd * x_hi) / _TWO_PI) + 1

    roots = []
    for k in range(k_lo, k_hi + 1):
        h = [lq - delta * (_TWO_PI * k - ph) / wd for lq, ph in zip(lnq, phi)]
        for i in range(n_grid - 1):
            h0, h1 = h[i], h[i + 1]
            if not (math.isfinite(h0) and math.isfinite(h1)) or h0 * h1 > 0.0:
                continue
            if h0 == 0.0 and i > 0:
                continue
            x0 = (_TWO_PI * k - phi[i]) / wd
            x1 = (_TWO_PI * k - phi[i + 1]) / wd
            if max(x0, x1) < -1e-3 * x_hi or min(x0, x1) > x_hi * 1.001:
                continue
            ref = phi[i]

            def xof(T, ref=ref, k=k):
                q = _q(kind, T, D, p)
                ph = ref + _wrap(cmath.phase(q) - ref)
                return (_TWO_PI * k - ph) / wd, q

            def hf(T):
                x, q = xof(T)
                return math.log(abs(q)) - delta * x

            T = _brent(hf, Ts[i], Ts[i + 1], h0, h1)
            x, _ = xof(T)
            roots.append((T, x))
    return roots
