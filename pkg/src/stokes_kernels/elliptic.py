"""Fundamental solution of -Laplace and its exact derivatives.

E(x) = 1/(n(n-2)|B1|) |x|^(2-n) for n >= 3, -(1/2 pi) log|x| for n = 2.

Every mixed partial of E lies in the span of monomial-times-power terms
c * x^beta * |x|^a (the n = 2 log appears only at derivative order zero),
so derivatives are generated symbolically once per multi-index and then
evaluated vectorized. Term lists are cached.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .heat import DomainError


class SingularityError(DomainError):
    """Kernel evaluated at its singular point."""


def unit_ball_volume(n: int) -> float:
    return math.pi ** (n / 2.0) / math.gamma(n / 2.0 + 1.0)


def e_constant(n: int) -> float:
    """Prefactor of |x|^(2-n) for n >= 3."""
    return 1.0 / (n * (n - 2) * unit_ball_volume(n))


def grad_constant(n: int) -> float:
    """grad E = -grad_constant(n) * x / |x|^n, any n >= 2."""
    return 1.0 / (n * unit_ball_volume(n))


def fundamental_solution(x, n: int | None = None) -> float:
    x = np.asarray(x, dtype=float).ravel()
    if n is None:
        n = x.size
    if x.size != n:
        raise DomainError("point dimension mismatch")
    r = float(np.sqrt(np.dot(x, x)))
    if r == 0.0:
        raise SingularityError("E is singular at the origin")
    if n == 2:
        return -math.log(r) / (2.0 * math.pi)
    return e_constant(n) * r ** (2.0 - n)


# term: (coef, beta, a, is_log). Value = coef * x^beta * r^a, or coef*log r.
def _diff_terms(terms, i: int):
    out: dict = {}

    def add(coef, beta, a):
        if coef == 0.0:
            return
        key = (beta, a)
        out[key] = out.get(key, 0.0) + coef

    for coef, beta, a, is_log in terms:
        if is_log:
            beta2 = [0] * len(beta)
            beta2[i] = 1
            add(coef, tuple(beta2), -2.0)
            continue
        if beta[i] > 0:
            bdown = list(beta)
            bdown[i] -= 1
            add(coef * beta[i], tuple(bdown), a)
        if a != 0.0:
            bup = list(beta)
            bup[i] += 1
            add(coef * a, tuple(bup), a - 2.0)
    return [(c, b, a, False) for (b, a), c in out.items()]


@lru_cache(maxsize=None)
def e_deriv_terms(gamma: tuple, n: int):
    """Term list of D^gamma E for spatial multi-index gamma (length n)."""
    if len(gamma) != n:
        raise DomainError("multi-index length must equal n")
    if n == 2:
        terms = [(-1.0 / (2.0 * math.pi), (0, 0), 0.0, True)]
    elif n >= 3:
        terms = [(e_constant(n), (0,) * n, 2.0 - n, False)]
    else:
        raise DomainError("n must be >= 2")
    for i, gi in enumerate(gamma):
        for _ in range(gi):
            terms = _diff_terms(terms, i)
    return tuple(terms)


def e_deriv(x, gamma, n: int | None = None):
    """D^gamma E evaluated at points x (shape (..., n)); vectorized."""
    x = np.asarray(x, dtype=float)
    if n is None:
        n = x.shape[-1]
    gamma = tuple(int(g) for g in gamma)
    terms = e_deriv_terms(gamma, n)
    r2 = np.sum(np.square(x), axis=-1)
    if np.any(r2 == 0.0):
        raise SingularityError("E derivative evaluated at the origin")
    out = np.zeros_like(r2)
    for coef, beta, a, is_log in terms:
        if is_log:
            out += coef * 0.5 * np.log(r2)
            continue
        term = np.full_like(r2, coef)
        for i, bi in enumerate(beta):
            if bi:
                term = term * x[..., i] ** bi
        out += term * r2 ** (a / 2.0)
    return out


def e_w_deriv(u, w, r: int, n: int = 2):
    """d^r/dw^r E at points (u, w) -- u horizontal, w the last slot.

    Fast closed forms for n = 2, r <= 4; falls back to the term algebra.
    For r = 0, n = 2 this is the log branch.
    """
    u = np.asarray(u, dtype=float)
    w = np.asarray(w, dtype=float)
    if n == 2:
        r2 = u * u + w * w
        if r == 0:
            return -np.log(r2) / (4.0 * math.pi)
        if r == 1:
            return -(1.0 / (2.0 * math.pi)) * w / r2
        if r == 2:
            return -(1.0 / (2.0 * math.pi)) * (u * u - w * w) / r2 ** 2
        if r == 3:
            return (1.0 / math.pi) * w * (3.0 * u * u - w * w) / r2 ** 3
        if r == 4:
            return (3.0 / math.pi) * (u ** 4 - 6.0 * u * u * w * w + w ** 4) / r2 ** 4
    pts = np.stack(np.broadcast_arrays(*([u] * (n - 1) + [w])), axis=-1)
    if n > 2:
        pts[..., 1:n - 1] = 0.0
    gamma = (0,) * (n - 1) + (r,)
    return e_deriv(pts, gamma, n)
