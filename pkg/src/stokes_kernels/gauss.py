"""1D heat kernel and its spatial derivatives.

g1(xi, t) = (4 pi t)^(-1/2) exp(-xi^2 / 4t) for t > 0.

Derivatives follow the Hermite identity
    d^r/dxi^r exp(-z^2) = (-1)^r H_r(z) exp(-z^2),   z = xi / (2 sqrt(t)),
so g1^(r) = g1 * (-1)^r (2 sqrt(t))^(-r) H_r(z) with physicists' H_r.
"""

from __future__ import annotations

import math

import numpy as np

from .backend import USE_NUMBA, njit


def g1(xi, t):
    """1D heat kernel; xi may be an array, t > 0 scalar or array."""
    return np.exp(-np.square(xi) / (4.0 * t)) / np.sqrt(4.0 * np.pi * t)


def hermite(z, r: int):
    """Physicists' Hermite polynomial H_r evaluated elementwise."""
    hkm = np.ones_like(np.asarray(z, dtype=float))
    if r == 0:
        return hkm
    hk = 2.0 * z
    for k in range(1, r):
        hkm, hk = hk, 2.0 * z * hk - 2.0 * k * hkm
    return hk

def g1_deriv(xi, t, r: int):
    """r-th spatial derivative of the 1D heat kernel (vectorized)."""
    if r == 0:
        return g1(xi, t)
    rt = np.sqrt(t)
    z = xi / (2.0 * rt)
    sign = -1.0 if r % 2 else 1.0
    return g1(xi, t) * sign * (2.0 * rt) ** (-float(r)) * hermite(z, r)


@njit(cache=True)
def g1_deriv_scalar(xi: float, t: float, r: int) -> float:
    rt = math.sqrt(t)
    g = math.exp(-xi * xi / (4.0 * t)) / math.sqrt(4.0 * math.pi * t)
    if r == 0:
        return g
    z = xi / (2.0 * rt)
    hkm = 1.0
    hk = 2.0 * z
    if r == 1:
        h = hk
    else:
        for k in range(1, r):
            hkp = 2.0 * z * hk - 2.0 * k * hkm
            hkm = hk
            hk = hkp
        h = hk
    sign = -1.0 if r % 2 else 1.0
    return g * sign * (2.0 * rt) ** (-r) * h


if not USE_NUMBA:
    def g1_deriv_scalar(xi, t, r):  # noqa: F811  (numpy twin)
        return float(g1_deriv(xi, t, r))
