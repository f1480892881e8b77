"""Exponentially tilted Gaussian integrals.

phi_semi(c, beta, t, i) = int_0^inf e^(-beta z) g1^(i)(c + z, t) dz
phi_finite(b, c, beta, t, i) = int_0^b  e^(-beta z) g1^(i)(c + z, t) dz

The i = 0 case has the stable closed form
    phi_semi = (1/2) e^(-c^2/4t) erfcx((c + 2 beta t) / (2 sqrt t))
(valid for nonnegative argument; the general branch is handled too) and
higher i follow from integration by parts:
    phi_{i} = -g1^(i-1)(c, t) + beta * phi_{i-1}            (semi-infinite)
    phi_{i} = e^(-beta b) g1^(i-1)(c+b, t) - g1^(i-1)(c, t)
              + beta * phi_{i-1}                            (finite)

For intervals short relative to the kernel scale the erf forms cancel
catastrophically, so a direct Gauss-Legendre rule takes over there.
"""

from __future__ import annotations

import numpy as np
from scipy.special import erf, erfcx

from .gauss import g1_deriv

_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)


def phi_semi(c, beta: float, t: float, i: int = 0):
    """int_0^inf e^(-beta z) g1^(i)(c+z, t) dz, vectorized in c."""
    c = np.asarray(c, dtype=float)
    if i == 0:
        rt = np.sqrt(t)
        arg = (c + 2.0 * beta * t) / (2.0 * rt)
        pos = 0.5 * np.exp(-np.square(c) / (4.0 * t)) * erfcx(np.maximum(arg, 0.0))
        if np.any(arg < 0.0):
            k = beta * c + beta * beta * t
            neg = 0.5 * np.exp(k) * (1.0 - erf(arg))
            return np.where(arg >= 0.0, pos, neg)
        return pos
    return -g1_deriv(c, t, i - 1) + beta * phi_semi(c, beta, t, i - 1)


def _phi_finite_erf(b, c, beta, t):
    # (1/2)[e^{-(c)^2/4t} erfcx(A) - e^{-beta b -(b+c)^2/4t} erfcx(B)]
    rt = np.sqrt(t)
    a_arg = (c + 2.0 * beta * t) / (2.0 * rt)
    b_arg = (b + c + 2.0 * beta * t) / (2.0 * rt)
    both_pos = (a_arg >= 0.0) & (b_arg >= 0.0)
    ea = np.exp(-np.square(c) / (4.0 * t))
    eb = np.exp(-beta * b - np.square(b + c) / (4.0 * t))
    stable = 0.5 * (ea * erfcx(np.maximum(a_arg, 0.0))
                    - eb * erfcx(np.maximum(b_arg, 0.0)))
    if np.all(both_pos):
        return stable
    k = beta * c + beta * beta * t
    general = 0.5 * np.exp(k) * (erf(b_arg) - erf(a_arg))
    return np.where(both_pos, stable, general)


def _phi_finite_gl(b, c, beta, t):
    z = 0.5 * b[..., None] * (_GL_X + 1.0)
    w = 0.5 * b[..., None] * _GL_W
    return np.sum(np.exp(-beta * z) * g1_deriv(c[..., None] + z, t, 0) * w, axis=-1)


def phi_finite(b, c, beta: float, t: float, i: int = 0):
    """int_0^b e^(-beta z) g1^(i)(c+z, t) dz, vectorized over (b, c)."""
    b, c = np.broadcast_arrays(np.asarray(b, dtype=float), np.asarray(c, dtype=float))
    if i == 0:
        scale = np.sqrt(t) if beta == 0.0 else min(np.sqrt(t), 1.0 / beta)
        short = b <= 0.25 * scale
        out = _phi_finite_erf(b, c, beta, t)
        if np.any(short):
            out = np.where(short, _phi_finite_gl(b, c, beta, t), out)
        return out
    return (np.exp(-beta * b) * g1_deriv(c + b, t, i - 1)
            - g1_deriv(c, t, i - 1) + beta * phi_finite(b, c, beta, t, i - 1))
