"""Time tail of the heat kernel: T(x, t) = int_t^inf Gamma(x, s) ds.

Closed form through the lower incomplete gamma function: substituting
u = |x|^2 / 4s,

    T = (4 pi)^(-n/2) (|x|^2/4)^(1 - n/2) gamma_low(n/2 - 1, |x|^2 / 4t)

valid for n >= 3; for n = 2 the integral itself diverges, but every
spatial derivative is finite (it equals d E - int_0^t d Gamma) and is
reached here because each x-derivative raises the radial index by two.
Mixed derivatives live in the span of c * x^beta * (d/d rho)^k F_n with
(d/d rho)^k F_n = (-pi)^k F_{n+2k}, generated symbolically and cached.

Time derivatives use d_t T = -Gamma.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy.special import gammainc

from .elliptic import SingularityError
from .heat import DomainError, MultiIndexDeriv, heat_kernel_deriv


def radial_profile(rho, t, m: int):
    """F_m(rho, t) = int_t^inf (4 pi s)^(-m/2) e^(-rho/4s) ds, m >= 3."""
    if m < 3:
        raise DomainError("radial profile diverges for m < 3")
    rho = np.asarray(rho, dtype=float)
    a = m / 2.0 - 1.0
    pref = (4.0 * math.pi) ** (-m / 2.0) * math.gamma(a)
    return pref * (rho / 4.0) ** (1.0 - m / 2.0) * gammainc(a, rho / (4.0 * t))


# term: (coef, beta, k) valued coef * x^beta * (-pi)^k F_{n+2k}(|x|^2, t)
@lru_cache(maxsize=None)
def tail_terms(gamma: tuple, n: int):
    if len(gamma) != n:
        raise DomainError("multi-index length must equal n")
    terms = {((0,) * n, 0): 1.0}
    for i, gi in enumerate(gamma):
        for _ in range(gi):
            nxt: dict = {}

            def add(coef, beta, k):
                if coef:
                    nxt[(beta, k)] = nxt.get((beta, k), 0.0) + coef

            for (beta, k), coef in terms.items():
                if beta[i] > 0:
                    b = list(beta)
                    b[i] -= 1
                    add(coef * beta[i], tuple(b), k)
                b = list(beta)
                b[i] += 1
                add(2.0 * coef, tuple(b), k + 1)
            terms = nxt
    if n == 2 and any(k == 0 for (_, k) in terms):
        raise DomainError(
            "int_t^inf Gamma diverges at n = 2; take at least one spatial "
            "derivative (constraint 2m + l + n >= 3)"
        )
    return tuple(((beta, k), coef) for (beta, k), coef in terms.items())


def tail_deriv(x, t, gamma, n: int | None = None):
    """D^gamma_x T(x, t) for t > 0, vectorized over points x (..., n)."""
    x = np.asarray(x, dtype=float)
    if n is None:
        n = x.shape[-1]
    gamma = tuple(int(g) for g in gamma)
    if n + sum(gamma) < 3:
        raise DomainError("requires 2m + l + n >= 3")
    terms = tail_terms(gamma, n)
    r2 = np.sum(np.square(x), axis=-1)
    if np.any(r2 == 0.0):
        raise SingularityError("time tail evaluated at x = 0")
    out = np.zeros_like(r2)
    for (beta, k), coef in terms:
        term = np.full_like(r2, coef * (-math.pi) ** k)
        for i, bi in enumerate(beta):
            if bi:
                term = term * x[..., i] ** bi
        out += term * radial_profile(r2, t, n + 2 * k)
    return out


def heat_time_tail(x, t: float, d: MultiIndexDeriv, n: int | None = None) -> float:
    """d_t^m d_x^l int_t^inf Gamma(x, s) ds at a single point.

    Requires t > 0, x != 0 and 2m + l + n >= 3. For m >= 1 the time
    derivative collapses to -d_t^(m-1) d_x^l Gamma.
    """
    x = np.asarray(x, dtype=float).ravel()
    if n is None:
        n = x.size
    if t <= 0.0:
        raise DomainError("heat_time_tail requires t > 0")
    l = d.l if d.l else (0,) * n
    if len(l) != n:
        raise DomainError("spatial multi-index length mismatch")
    if 2 * d.m + sum(l) + n < 3:
        raise DomainError("constraint 2m + l + n >= 3 violated")
    if d.m >= 1:
        dd = MultiIndexDeriv(d.m - 1, l)
        return -heat_kernel_deriv(x, t, dd)
    return float(tail_deriv(x, t, l, n))
