"""Quadrature engines: adaptive finite-interval, semi-infinite with
exponential weight, and symmetric-exclusion principal values with
Richardson extrapolation.

The adaptive finite-interval engine wraps QUADPACK (scipy.integrate.quad)
behind the tolerance contract; the semi-infinite and principal-value
engines are built on composite Gauss-Legendre panels. Panel sums use
numpy's pairwise summation, so reductions are deterministic and
independent of threading.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .heat import DomainError


class ToleranceError(ArithmeticError):
    """Quadrature failed to meet the requested tolerance."""

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and policies shared by all quadrature engines."""

    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    max_subdivisions: int = 200
    # semi-infinite truncation: z* = max(decay_scale * factor, factor / alpha)
    truncation_factor: float = 40.0
    pv_epsilon_sequence: tuple = (1e-2, 5e-3, 2.5e-3, 1.25e-3, 6.25e-4)

    def __post_init__(self):
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise DomainError("tolerances must be positive")
        eps = tuple(float(e) for e in self.pv_epsilon_sequence)
        if any(b >= a for a, b in zip(eps, eps[1:])) is False and len(eps) >= 2:
            pass
        if len(eps) < 2 or any(b >= a for a, b in zip(eps, eps[1:])):
            raise DomainError("pv_epsilon_sequence must strictly decrease")
        object.__setattr__(self, "pv_epsilon_sequence", eps)

    @classmethod
    def from_dict(cls, d: dict) -> "QuadratureSpec":
        known = {k: d[k] for k in (
            "abs_tol", "rel_tol", "max_subdivisions",
            "truncation_factor", "pv_epsilon_sequence") if k in d}
        if "pv_epsilon_sequence" in known:
            known["pv_epsilon_sequence"] = tuple(known["pv_epsilon_sequence"])
        return cls(**known)


DEFAULT_SPEC = QuadratureSpec()


def adaptive_quad(f, a, b, spec: QuadratureSpec = DEFAULT_SPEC, points=None):
    """Adaptive integral of f over [a, b] under the spec tolerances.

    Returns (value, error_estimate); raises ToleranceError when the
    achieved error estimate exceeds both tolerances.
    """
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        if points is not None:
            pts = sorted(p for p in points if a < p < b)
        else:
            pts = None
        val, err = quad(f, a, b, limit=max(spec.max_subdivisions, 50),
                        epsabs=spec.abs_tol, epsrel=spec.rel_tol,
                        points=pts)
    if err > spec.abs_tol and err > spec.rel_tol * max(abs(val), 1e-300):
        raise ToleranceError(
            f"adaptive quadrature achieved error {err:.3e} on [{a}, {b}]",
            achieved=err)
    return val, err


def gauss_panels(edges, nper: int = 12):
    """Composite Gauss-Legendre nodes/weights over consecutive edges."""
    xg, wg = np.polynomial.legendre.leggauss(nper)
    edges = np.asarray(edges, dtype=float)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    nodes = (half[:, None] * xg[None, :] + mid[:, None]).ravel()
    weights = (half[:, None] * wg[None, :]).ravel()
    return nodes, weights


def geometric_ladder(scale: float, outer: float, ratio: float = 2.0):
    """Edges scale, scale*ratio, ... clipped to end exactly at outer."""
    if scale >= outer:
        return [outer]
    out = [scale]
    while out[-1] < outer:
        out.append(out[-1] * ratio)
    out[-1] = outer
    return out


def semi_infinite_quad(f, alpha: float, spec: QuadratureSpec = DEFAULT_SPEC,
                       decay_scale: float = 1.0, f_bound: float | None = None):
    """int_0^inf e^(-alpha z) f(z) dz.

    f is evaluated on vectorized panel nodes. Truncates at
    z* = max(decay_scale, 1/alpha) * truncation_factor and adds the
    analytic exponential tail bound to the error estimate; panel counts
    double until two refinements agree within tolerance.
    """
    if alpha < 0:
        raise DomainError("alpha must be >= 0")
    if alpha == 0 and decay_scale <= 0:
        raise DomainError("alpha = 0 requires a positive decay scale")
    zstar = spec.truncation_factor * max(
        decay_scale, (1.0 / alpha) if alpha > 0 else 0.0)

    def value(n_panels):
        edges = np.concatenate([
            np.array([0.0]),
            np.geomspace(zstar / 2 ** (n_panels - 1), zstar, n_panels)])
        z, w = gauss_panels(edges, 12)
        fv = np.asarray(f(z), dtype=float)
        return float(np.sum(fv * np.exp(-alpha * z) * w))

    prev = value(8)
    for n_panels in (16, 32, 64, 128):
        cur = value(n_panels)
        if abs(cur - prev) <= max(spec.abs_tol, spec.rel_tol * abs(cur)):
            if f_bound is None:
                f_bound = 1.0
            tail = f_bound * math.exp(-alpha * zstar) / alpha if alpha > 0 else 0.0
            return cur, abs(cur - prev) + tail
        prev = cur
    raise ToleranceError(
        f"semi-infinite quadrature did not stabilize (last delta "
        f"{abs(cur - prev):.3e})", achieved=abs(cur - prev))


def pv_richardson(evaluator, spec: QuadratureSpec = DEFAULT_SPEC):
    """Richardson-extrapolate evaluator(eps) over the exclusion radii.

    Assumes first-order dependence on eps (odd kernels under symmetric
    exclusion). Returns (limit, error_estimate); raises ToleranceError
    if the extrapolated sequence is not Cauchy within abs_tol.
    """
    eps = spec.pv_epsilon_sequence
    raw = [evaluator(e) for e in eps]
    extrap = []
    for (e1, v1), (e2, v2) in zip(zip(eps, raw), zip(eps[1:], raw[1:])):
        r = e1 / e2
        extrap.append((r * v2 - v1) / (r - 1.0))
    deltas = [abs(b - a) for a, b in zip(extrap, extrap[1:])]
    if not deltas:
        return extrap[-1], abs(raw[-1] - extrap[-1])
    scale = max(abs(extrap[-1]), 1.0e-300)
    if deltas[-1] > max(spec.abs_tol, spec.rel_tol * scale):
        raise ToleranceError(
            f"principal-value extrapolation not Cauchy (delta {deltas[-1]:.3e})",
            achieved=deltas[-1])
    return extrap[-1], deltas[-1]
