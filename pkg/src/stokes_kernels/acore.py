"""Horizontal convolutions of the fundamental solution with the heat
kernel, the composite kernel A built from them, and the Gaussian
principal-value integral.

core(x', w, t, r, p) = int_{R^(n-1)} d_w^r E(v, w) d^p Gamma_{n-1}(x'-v, t) dv

is the workhorse: the composite kernel factorizes exactly as
A(x', w, z, t) = Gamma_1(z, t) * core(x', w, t, 0, 0), and every I/J/K
kernel reduces to a single outer quadrature against core values.

n = 2 evaluates by composite Gauss-Legendre panels (geometric ladder
around the E singularity plus a window around the Gaussian peak); the
w = 0 log singularity is handled by analytic subtraction. n = 3 reduces
to a radial integral with scaled Bessel factors.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import i0e, i1e

from .backend import USE_NUMBA, njit, prange
from .elliptic import e_w_deriv
from .gauss import g1, g1_deriv
from .heat import DomainError
from .quadrature import (DEFAULT_SPEC, QuadratureSpec, adaptive_quad,
                         gauss_panels, geometric_ladder, pv_richardson)

_GL12_X, _GL12_W = np.polynomial.legendre.leggauss(12)
_NEAR_EDGES = np.array([0.0, 1.0 / 256.0, 1.0 / 32.0, 1.0 / 4.0, 1.0])


def _edge_matrix(x1s: np.ndarray, w: float, t: float, gap: float = 0.0):
    """Per-x1 sorted panel edges: shared E ladder + Gaussian window.

    With gap > 0 every edge inside (-gap, gap) is collapsed onto +-gap,
    so the interval is covered by exactly one (skippable) panel.
    """
    s = math.sqrt(t)
    win = 10.0 * s
    wa = max(abs(w), 1e-8 * s)
    outer = max(float(np.max(np.abs(x1s))) + win, 64.0 * wa)
    lad = geometric_ladder(min(wa, outer / 2.0), outer)
    shared = np.array(sorted({-e for e in lad} | {0.0} | set(lad)))
    offs = np.array([-win, -win / 3.0, 0.0, win / 3.0, win])
    per = np.clip(x1s[:, None] + offs[None, :], -outer, outer)
    edges = np.concatenate(
        [np.broadcast_to(shared, (x1s.size, shared.size)), per], axis=1)
    if gap > 0.0:
        edges = np.where(np.abs(edges) < gap,
                         np.where(edges < 0.0, -gap, gap), edges)
        pad = np.tile(np.array([-gap, gap]), (x1s.size, 1))
        edges = np.concatenate([edges, pad], axis=1)
    return np.sort(edges, axis=1)


def _panels_from_edges(edges: np.ndarray):
    mid = 0.5 * (edges[:, 1:] + edges[:, :-1])
    half = 0.5 * (edges[:, 1:] - edges[:, :-1])
    nodes = half[:, :, None] * _GL12_X + mid[:, :, None]
    weights = half[:, :, None] * _GL12_W
    m = edges.shape[0]
    return nodes.reshape(m, -1), weights.reshape(m, -1)


def _core2_numpy(x1s, w: float, t: float, r: int, p: int):
    x1s = np.atleast_1d(np.asarray(x1s, dtype=float))
    if r == 0 and w == 0.0:
        d = min(math.sqrt(t) / 100.0, 1e-2)
        edges = _edge_matrix(x1s, w, t, gap=d)
        v, vw = _panels_from_edges(edges)
        inside = np.abs(v) < d * (1.0 - 1e-12)
        vw = np.where(inside, 0.0, vw)
        out = np.sum(e_w_deriv(np.where(inside, d, v), 0.0, 0)
                     * g1_deriv(x1s[:, None] - v, t, p) * vw, axis=1)
        # near part: -(1/2pi)[2 d (log d - 1) phi(0) + int_0^d log u (phi(u)+phi(-u)-2 phi(0)) du]
        u, uw = gauss_panels(d * _NEAR_EDGES, 12)
        phi0 = g1_deriv(x1s, t, p)
        sym = (g1_deriv(x1s[:, None] - u, t, p)
               + g1_deriv(x1s[:, None] + u, t, p) - 2.0 * phi0[:, None])
        corr = np.sum(np.log(u) * sym * uw, axis=1)
        out += -(0.5 / math.pi) * (phi0 * 2.0 * d * (math.log(d) - 1.0) + corr)
        return out
    edges = _edge_matrix(x1s, w, t)
    v, vw = _panels_from_edges(edges)
    return np.sum(e_w_deriv(v, w, r) * g1_deriv(x1s[:, None] - v, t, p) * vw,
                  axis=1)


@njit(cache=True)
def _core2_kernel(x1s, w, t, r, p, edges, dnear, unodes, uweights):  # pragma: no cover - numba path
    m = x1s.size
    npan = edges.shape[1] - 1
    out = np.zeros(m)
    rt = math.sqrt(t)
    gn = math.sqrt(4.0 * math.pi * t)
    logbranch = (r == 0) and (w == 0.0)
    for ix in prange(m):
        x1 = x1s[ix]
        acc = 0.0
        for ip in range(npan):
            a = edges[ix, ip]
            b = edges[ix, ip + 1]
            half = 0.5 * (b - a)
            mid = 0.5 * (a + b)
            if half <= 0.0:
                continue
            for k in range(12):
                v = half * _NB_GLX[k] + mid
                wt = half * _NB_GLW[k]
                if logbranch and abs(v) < dnear:
                    continue
                # e_r(v, w): n = 2 closed forms
                r2 = v * v + w * w
                if r == 0:
                    ev = -math.log(r2) / (4.0 * math.pi)
                elif r == 1:
                    ev = -(0.5 / math.pi) * w / r2
                elif r == 2:
                    ev = -(0.5 / math.pi) * (v * v - w * w) / (r2 * r2)
                elif r == 3:
                    ev = (1.0 / math.pi) * w * (3.0 * v * v - w * w) / (r2 * r2 * r2)
                else:
                    ev = (3.0 / math.pi) * (v ** 4 - 6.0 * v * v * w * w + w ** 4) / (r2 ** 4)
                xi = x1 - v
                g = math.exp(-xi * xi / (4.0 * t)) / gn
                if p > 0:
                    z = xi / (2.0 * rt)
                    hkm = 1.0
                    hk = 2.0 * z
                    if p == 1:
                        h = hk
                    else:
                        for kk in range(1, p):
                            hkp = 2.0 * z * hk - 2.0 * kk * hkm
                            hkm = hk
                            hk = hkp
                        h = hk
                    sign = -1.0 if p % 2 else 1.0
                    g = g * sign * (2.0 * rt) ** (-p) * h
                acc += ev * g * wt
        if logbranch:
            # analytic near-part (subtraction against phi(0))
            phi0 = _g1d(x1, t, p)
            corr = 0.0
            for k in range(unodes.size):
                u = unodes[k]
                corr += math.log(u) * (_g1d(x1 - u, t, p) + _g1d(x1 + u, t, p)
                                       - 2.0 * phi0) * uweights[k]
            acc += -(0.5 / math.pi) * (
                phi0 * 2.0 * dnear * (math.log(dnear) - 1.0) + corr)
        out[ix] = acc
    return out


if USE_NUMBA:
    from numba import float64  # noqa: F401

    _NB_GLX = _GL12_X.copy()
    _NB_GLW = _GL12_W.copy()

    @njit(cache=True, inline="always")
    def _g1d(xi, t, p):
        rt = math.sqrt(t)
        g = math.exp(-xi * xi / (4.0 * t)) / math.sqrt(4.0 * math.pi * t)
        if p == 0:
            return g
        z = xi / (2.0 * rt)
        hkm = 1.0
        hk = 2.0 * z
        if p == 1:
            h = hk
        else:
            for kk in range(1, p):
                hkp = 2.0 * z * hk - 2.0 * kk * hkm
                hkm = hk
                hk = hkp
            h = hk
        sign = -1.0 if p % 2 else 1.0
        return g * sign * (2.0 * rt) ** (-p) * h

    def core2(x1s, w: float, t: float, r: int = 0, p: int = 0):
        x1s = np.atleast_1d(np.asarray(x1s, dtype=float))
        if r == 0 and w == 0.0:
            d = min(math.sqrt(t) / 100.0, 1e-2)
            edges = _edge_matrix(x1s, w, t, gap=d)
            u, uw = gauss_panels(d * _NEAR_EDGES, 12)
        else:
            edges = _edge_matrix(x1s, w, t)
            d, u, uw = 0.0, np.empty(0), np.empty(0)
        return _core2_kernel(x1s, float(w), float(t), int(r), int(p),
                             edges, d, u, uw)
else:
    core2 = _core2_numpy


def core2_taylor(x1s, w, t: float, r: int = 0, p: int = 0, order: int = 4):
    """Far-field short-time expansion: core = sum_k t^k/k! d_v^(2k) terms.

    Valid when the Gaussian window stays away from the E singularity
    (|x1| >> sqrt(t) + w); error O((c t / x1^2)^order).
    """
    x1s = np.asarray(x1s, dtype=float)
    out = np.zeros(np.broadcast(x1s, np.asarray(w)).shape)
    fact = 1.0
    for k in range(order):
        if k:
            fact *= k
        out = out + (t ** k / fact) * _e_uderiv(x1s, w, 2 * k + p, r)
    return out


def _e_uderiv(u, w, pu: int, r: int):
    """d_u^pu d_w^r E at (u, w), n = 2 (term algebra via elliptic)."""
    from .elliptic import e_deriv
    pts = np.stack(np.broadcast_arrays(u, w), axis=-1)
    return e_deriv(pts, (pu, r), 2)


def core3_radial(R, w: float, t: float, r: int = 0, dr: int = 0,
                 nper: int = 12):
    """n = 3 core and radial derivatives d_R^dr, dr <= 2 (vectorized in R).

    Radial reduction: the angular integral of the shifted Gaussian gives
    scaled Bessel factors i0e/i1e.
    """
    if dr > 2:
        raise DomainError("n = 3 radial derivatives supported up to order 2")
    R = np.atleast_1d(np.asarray(R, dtype=float))
    s = math.sqrt(t)
    wa = max(abs(w), 1e-8 * s)
    outer = float(np.max(R)) + 12.0 * s
    edges = {0.0, outer}
    edges |= set(geometric_ladder(min(wa, outer / 2), outer))
    for Rv in np.unique(np.round(R, 12)):
        for off in (-10 * s, -3 * s, 0.0, 3 * s, 10 * s):
            v = Rv + off
            if 0.0 < v < outer:
                edges.add(v)
    rho, rw = gauss_panels(np.array(sorted(edges)), nper)
    ew = e_w_deriv(rho, w, r, n=3)
    a = R[:, None] * rho[None, :] / (2.0 * t)
    gauss = np.exp(-np.square(R[:, None] - rho[None, :]) / (4.0 * t))
    b0 = i0e(a)
    pref = rho * ew * rw / (2.0 * t)
    if dr == 0:
        return np.sum(pref * gauss * b0, axis=1)
    b1 = i1e(a)
    if dr == 1:
        fac = (-R[:, None] / (2.0 * t)) * b0 + (rho[None, :] / (2.0 * t)) * b1
        return np.sum(pref * gauss * fac, axis=1)
    Rr = np.where(R == 0.0, 1e-300, R)[:, None]
    fac = ((np.square(R[:, None]) / (4 * t * t) - 1.0 / (2 * t)
            + np.square(rho[None, :]) / (4 * t * t)) * b0
           - (R[:, None] * rho[None, :] / (2 * t * t)
              + rho[None, :] / (2 * t * Rr)) * b1)
    return np.sum(pref * gauss * fac, axis=1)


def a_function(xprime, w: float, z: float, t: float, n: int | None = None,
               spec: QuadratureSpec = DEFAULT_SPEC):
    """Composite kernel A(x', w, z, t) = Gamma_1(z, t) core(x', w, t).

    The z dependence is the exact factor e^(-z^2/4t); the horizontal
    integral is computed once at z = 0 scale. Returns (value, err_est).
    """
    if t <= 0.0:
        raise DomainError("A requires t > 0")
    xprime = np.asarray(xprime, dtype=float).ravel()
    if n is None:
        n = xprime.size + 1
    if n not in (2, 3):
        raise DomainError("A supported for n in {2, 3}")
    if w == 0.0 and not np.any(xprime):
        raise DomainError("A requires (|x'|, w) != (0, 0)")
    if n == 2:
        c = float(core2(xprime[:1], w, t, 0, 0)[0])
        cref = float(_core2_numpy(xprime[:1], w, t, 0, 0)[0]) if USE_NUMBA \
            else float(core2(np.asarray(xprime[:1]) * (1 + 1e-14), w, t, 0, 0)[0])
        err = abs(c - cref) + 1e-14 * abs(c)
    else:
        Rv = float(np.sqrt(np.sum(np.square(xprime))))
        c = float(core3_radial(np.array([Rv]), w, t, 0, 0, nper=12)[0])
        c16 = float(core3_radial(np.array([Rv]), w, t, 0, 0, nper=16)[0])
        err = abs(c - c16)
        c = c16
    tol = max(spec.abs_tol, spec.rel_tol * abs(c))
    if err > 100 * tol and err > 1e-6 * abs(c):
        from .quadrature import ToleranceError
        raise ToleranceError("A quadrature did not converge", achieved=err)
    return c * float(g1(z, t)), err


def gaussian_singular_conv(xprime, t: float, n: int | None = None,
                           spec: QuadratureSpec = DEFAULT_SPEC):
    """p.v. int y1/|y'|^n e^(-|x'-y'|^2/4t) dy' over R^(n-1).

    Symmetric exclusion balls, Richardson-extrapolated over the spec's
    epsilon sequence. Returns (value, err_est).
    """
    xprime = np.asarray(xprime, dtype=float).ravel()
    if n is None:
        n = xprime.size + 1
    if t <= 0.0 or not np.any(xprime):
        raise DomainError("requires t > 0 and |x'| > 0")
    if n == 2:
        x1 = float(xprime[0])

        def evaluator(eps):
            return _pv_n2_fixed(x1, t, eps)
    elif n == 3:
        def evaluator(eps):
            return _pv_n3_fixed(xprime, t, eps)
    else:
        raise DomainError("supported for n in {2, 3}")
    return pv_richardson(evaluator, spec)


def _pv_n2_fixed(x1: float, t: float, eps: float) -> float:
    # folded: int_eps^inf (1/y)[G(x1-y) - G(x1+y)] dy, smooth integrand
    s = math.sqrt(t)
    hi = abs(x1) + 14.0 * s
    edges = {eps, hi}
    edges |= set(np.clip([abs(x1) - 10 * s, abs(x1) - 3 * s, abs(x1),
                          abs(x1) + 3 * s, abs(x1) + 10 * s], eps, hi).tolist())
    edges |= {min(10 * eps, hi), min(100 * eps, hi)}
    y, wgt = gauss_panels(np.array(sorted(edges)), 14)
    vals = (g1(x1 - y, t) - g1(x1 + y, t)) / y
    return float(math.sqrt(4.0 * math.pi * t) * np.sum(vals * wgt))


def _pv_n3_fixed(xprime, t: float, eps: float) -> float:
    # fold y' -> -y': integrate over the half plane y1 > 0 outside the ball
    R = float(np.sqrt(np.sum(np.square(xprime))))
    s = math.sqrt(t)
    # angular panels refined near the direction of x' (Gaussian width s/R)
    phi0 = math.atan2(float(xprime[1]), float(xprime[0]))
    aw = min(s / max(R, s), math.pi / 4.0)
    aedges = {-math.pi / 2.0, math.pi / 2.0}
    for k in (-12.0, -4.0, -1.0, 0.0, 1.0, 4.0, 12.0):
        for cand in (phi0 + k * aw, -phi0 + k * aw):
            v = ((cand + math.pi / 2.0) % math.pi) - math.pi / 2.0
            aedges.add(min(max(v, -math.pi / 2.0), math.pi / 2.0))
    phi, wphi = gauss_panels(np.array(sorted(aedges)), 12)
    hi = R + 14.0 * s
    edges = {eps, hi}
    edges |= set(np.clip([R - 10 * s, R - 3 * s, R, R + 3 * s, R + 10 * s],
                         eps, hi).tolist())
    edges |= {min(10 * eps, hi), min(100 * eps, hi)}
    rho, wrho = gauss_panels(np.array(sorted(edges)), 14)
    c, sn = np.cos(phi), np.sin(phi)
    y1 = rho[:, None] * c[None, :]
    y2 = rho[:, None] * sn[None, :]
    d_minus = (xprime[0] - y1) ** 2 + (xprime[1] - y2) ** 2
    d_plus = (xprime[0] + y1) ** 2 + (xprime[1] + y2) ** 2
    kern = (np.exp(-d_minus / (4.0 * t)) - np.exp(-d_plus / (4.0 * t)))
    integ = np.sum((c[None, :] / rho[:, None]) * kern * wphi[None, :]
                   * wrho[:, None])
    return float(integ)


def gaussian_singular_conv_brute(xprime, t: float, n: int | None = None,
                                 eps: float = 1e-6) -> float:
    """Fixed-exclusion-ball evaluation (no extrapolation); oracle path."""
    xprime = np.asarray(xprime, dtype=float).ravel()
    if n is None:
        n = xprime.size + 1
    if n == 2:
        f = lambda y: (g1(xprime[0] - y, t) - g1(xprime[0] + y, t)) / y
        hi = abs(xprime[0]) + 14.0 * math.sqrt(t)
        val, _ = adaptive_quad(
            f, eps, hi,
            points=[abs(xprime[0]) - 3 * math.sqrt(t), abs(xprime[0]),
                    abs(xprime[0]) + 3 * math.sqrt(t), 10 * eps, 100 * eps])
        return float(math.sqrt(4.0 * math.pi * t) * val)
    if n == 3:
        return _pv_n3_fixed(xprime, t, eps)
    raise DomainError("supported for n in {2, 3}")
