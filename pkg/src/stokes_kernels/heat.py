"""Heat kernel in n dimensions with exact mixed derivatives.

The kernel factorizes across coordinates, so any spatial multi-index
derivative is a product of 1D Hermite derivatives. Time derivatives use
the heat equation: d_t^m Gamma = Laplacian^m Gamma, expanded over
coordinates by the multinomial theorem. Everything is closed form; no
finite differences.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .gauss import g1_deriv


class DomainError(ValueError):
    """Evaluation requested outside an operation's domain."""


@dataclass(frozen=True)
class SpaceTimePoint:
    """Evaluation point (x', x_n, t) in dimension n >= 2."""

    xprime: tuple
    xn: float
    t: float

    def __post_init__(self):
        object.__setattr__(self, "xprime", tuple(float(v) for v in self.xprime))
        if self.n < 2:
            raise DomainError("dimension n must be >= 2")
        if self.xn < 0:
            raise DomainError("xn must be >= 0")

    @property
    def n(self) -> int:
        return len(self.xprime) + 1

    @property
    def x(self) -> np.ndarray:
        return np.array(self.xprime + (self.xn,), dtype=float)


@dataclass(frozen=True)
class MultiIndexDeriv:
    """Time order m and per-coordinate spatial orders l."""

    m: int = 0
    l: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "l", tuple(int(v) for v in self.l))
        if self.m < 0 or any(v < 0 for v in self.l):
            raise DomainError("derivative orders must be >= 0")

    @property
    def total_spatial(self) -> int:
        return sum(self.l)


def _as_x_t(p, t=None):
    if isinstance(p, SpaceTimePoint):
        return p.x, p.t
    return np.asarray(p, dtype=float).ravel(), float(t)


def heat_kernel(p, t=None):
    """Gamma(x, t); accepts a SpaceTimePoint or (x array, t).

    Zero for t <= 0 by definition.
    """
    x, t = _as_x_t(p, t)
    if t <= 0.0:
        return 0.0
    n = x.size
    return float(np.exp(-np.dot(x, x) / (4.0 * t)) / (4.0 * np.pi * t) ** (n / 2.0))


def _laplacian_multinomial(m: int, n: int):
    """Terms (coef, orders) of (sum_i d_i^2)^m over n coordinates."""
    if m == 0:
        return [(1.0, (0,) * n)]
    terms = {}
    for combo in product(range(n), repeat=m):
        orders = [0] * n
        for i in combo:
            orders[i] += 2
        key = tuple(orders)
        terms[key] = terms.get(key, 0.0) + 1.0
    return [(c, k) for k, c in terms.items()]


def heat_kernel_deriv(p, t=None, d: MultiIndexDeriv | None = None):
    """Exact d_t^m d_x^l Gamma(x, t) for t > 0."""
    if d is None:
        raise DomainError("derivative multi-index required")
    x, t = _as_x_t(p, t)
    if t <= 0.0:
        raise DomainError("heat_kernel_deriv requires t > 0")
    n = x.size
    l = d.l if d.l else (0,) * n
    if len(l) != n:
        raise DomainError(f"spatial multi-index length {len(l)} != dimension {n}")
    total = 0.0
    for coef, extra in _laplacian_multinomial(d.m, n):
        term = coef
        for i in range(n):
            term *= g1_deriv(x[i], t, l[i] + extra[i])
        total += term
    return float(total)


def heat_kernel_grid(x_sq, t, n: int):
    """Gamma on arrays of |x|^2 (vectorized); zero where t <= 0."""
    x_sq = np.asarray(x_sq, dtype=float)
    t = np.asarray(t, dtype=float)
    out = np.zeros(np.broadcast(x_sq, t).shape)
    pos = t > 0
    tp = np.where(pos, t, 1.0)
    vals = np.exp(-x_sq / (4.0 * tp)) / (4.0 * np.pi * tp) ** (n / 2.0)
    out[...] = np.where(pos, vals, 0.0)
    return out
