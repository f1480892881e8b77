import math
import warnings

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import dawsn, ive

from stokes_kernels.acore import (a_function, core2, core2_taylor,
                                  core3_radial, gaussian_singular_conv,
                                  gaussian_singular_conv_brute)
from stokes_kernels.elliptic import e_w_deriv
from stokes_kernels.gauss import g1, g1_deriv
from stokes_kernels.heat import DomainError
from stokes_kernels.quadrature import QuadratureSpec
from stokes_kernels.tilted import phi_finite, phi_semi


def core_oracle_n2(x1, w, t, r, p):
    """Adaptive-quadrature oracle for the n = 2 core convolution."""
    def f(v):
        return e_w_deriv(v, w, r) * g1_deriv(x1 - v, t, p)

    wa = max(abs(w), 1e-9)
    pts = sorted({-60.0, -1.0, -8 * wa, 0.0, 8 * wa, 1.0,
                  x1 - 10, x1, x1 + 10, 60.0})
    tot, lo = 0.0, -80.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for pnt in pts:
            v, _ = quad(f, lo, pnt, limit=400, epsabs=1e-15, epsrel=1e-13)
            tot += v
            lo = pnt
        v, _ = quad(f, lo, 80.0, limit=400, epsabs=1e-15, epsrel=1e-13)
        tot += v
    return tot


CASES = [
    (2.0, 1.0, 0.5, 0, 0),
    (2.0, 0.3, 0.1, 1, 1),
    (0.7, 0.05, 0.2, 2, 0),
    (1.5, 0.0, 0.05, 0, 1),
    (0.4, 1e-6, 0.3, 1, 0),
    (3.5, 0.02, 0.02, 2, 1),
    (-1.2, 0.6, 0.8, 3, 0),
    (2.5, 1e-4, 0.15, 2, 2),
    (0.0, 0.0, 0.3, 0, 0),
]


@pytest.mark.parametrize("x1,w,t,r,p", CASES)
def test_core2_against_adaptive_oracle(x1, w, t, r, p):
    got = float(core2(np.array([x1]), w, t, r, p)[0])
    ref = core_oracle_n2(x1, w, t, r, p)
    assert got == pytest.approx(ref, rel=2e-7, abs=1e-12)


def test_core2_poisson_kernel_limit():
    # w -> 0 limit of the r = 1 core is -Gamma_{n-1}/2 (Poisson kernel)
    val = float(core2(np.array([0.4]), 1e-9, 0.3, 1, 0)[0])
    assert val == pytest.approx(-0.5 * float(g1(0.4, 0.3)), rel=1e-6)


def test_core2_taylor_matches_core_far_field():
    # at the production switching time scale t <= 1e-3 * dist^2
    x1s = np.linspace(2.5, 5.5, 7)
    for r, p in [(0, 1), (1, 0), (2, 1), (3, 1)]:
        full = core2(x1s, 0.05, 0.004, r, p)
        tay = core2_taylor(x1s, 0.05, 0.004, r, p)
        assert np.allclose(tay, full, rtol=5e-7, atol=1e-14)


def test_core3_against_tensor_oracle():
    from scipy.integrate import dblquad
    for (R, w, t, r) in [(1.0, 0.5, 0.3, 0), (2.0, 0.1, 0.2, 1), (0.5, 0.3, 0.1, 2)]:
        def f(u2, u1):
            return (e_w_deriv(math.hypot(u1, u2), w, r, n=3)
                    * math.exp(-((R - u1) ** 2 + u2 ** 2) / (4 * t)) / (4 * math.pi * t))

        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            ref, _ = dblquad(f, -12, 12, -12, 12, epsabs=1e-11, epsrel=1e-9)
        got = float(core3_radial(np.array([R]), w, t, r, 0)[0])
        assert got == pytest.approx(ref, rel=1e-8)


def test_core3_radial_derivative_consistent():
    h = 1e-5
    R = 1.3
    d1 = float(core3_radial(np.array([R]), 0.4, 0.2, 0, 1)[0])
    fd = (float(core3_radial(np.array([R + h]), 0.4, 0.2, 0, 0)[0])
          - float(core3_radial(np.array([R - h]), 0.4, 0.2, 0, 0)[0])) / (2 * h)
    assert d1 == pytest.approx(fd, rel=1e-8)


# --- composite kernel A ------------------------------------------------------

def test_a_factorization_identity():
    rng = np.random.default_rng(2)
    for _ in range(5):
        x1, w, t = rng.uniform(0.5, 3), rng.uniform(0.1, 2), rng.uniform(0.05, 1)
        z = rng.uniform(0.0, 2)
        a0, _ = a_function([x1], w, 0.0, t, 2)
        az, _ = a_function([x1], w, z, t, 2)
        assert az == pytest.approx(a0 * math.exp(-z * z / (4 * t)), rel=1e-12)


def test_a_against_dense_trapezoid():
    # A(x', w, 0, t) = int E(x'-y, w) Gamma_2((y, 0), t) dy at n = 2
    va, _ = a_function([2.0], 1.0, 0.0, 0.5, 2)
    yg = np.linspace(-40, 40, 400_001)
    dense = np.trapezoid(
        e_w_deriv(2.0 - yg, 1.0, 0) * g1(yg, 0.5) * g1(0.0, 0.5), yg)
    assert va == pytest.approx(dense, rel=1e-6)


def test_a_rejects_joint_singularity():
    with pytest.raises(DomainError):
        a_function([0.0], 0.0, 0.5, 0.3, 2)


# --- tilted Gaussian integrals ----------------------------------------------

@pytest.mark.parametrize("c,beta,t,i", [
    (0.5, 1.0, 0.2, 0), (0.0, 2.0, 0.05, 1), (0.2, 0.5, 1.0, 3),
    (1.0, 2.0, 0.05, 1), (0.5, 1.0, 0.2, 2)])
def test_phi_semi_against_quadrature(c, beta, t, i):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        ref, _ = quad(lambda z: math.exp(-beta * z) * g1_deriv(c + z, t, i),
                      0, 80, limit=400, epsabs=1e-14, epsrel=1e-12)
    assert float(phi_semi(c, beta, t, i)) == pytest.approx(ref, rel=1e-12)


@pytest.mark.parametrize("b,c,beta,t,i", [
    (0.4, 0.1, 0.5, 0.2, 0), (1e-4, 2.0, 0.5, 0.01, 0),
    (2.0, -1.0, 0.5, 0.1, 1), (0.03, 0.5, 1.0, 0.3, 2)])
def test_phi_finite_against_quadrature(b, c, beta, t, i):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        ref, _ = quad(lambda z: math.exp(-beta * z) * g1_deriv(c + z, t, i),
                      0, b, limit=400, epsabs=1e-16, epsrel=1e-13)
    assert float(phi_finite(b, c, beta, t, i)) == pytest.approx(ref, rel=1e-10)


# --- Gaussian principal value (Lemma on the singular convolution) ------------

def closed_form_pv(xprime, t, n):
    """Independent closed forms: Dawson (n=2) and Bessel (n=3)."""
    if n == 2:
        x1 = xprime[0]
        return 2.0 * math.sqrt(math.pi) * float(dawsn(x1 / (2 * math.sqrt(t)))) \
            * math.copysign(1.0, 1.0)
    R = math.hypot(*xprime)
    z = R * R / (8.0 * t)
    mag = 2 * math.pi * math.sqrt(math.pi * t) * (R / (4 * t)) \
        * float(ive(0, z) - ive(1, z))
    return (xprime[0] / R) * mag


@pytest.mark.parametrize("t", [1e-4, 1e-3, 1e-2])
def test_pv_n2_closed_form(t):
    val, _ = gaussian_singular_conv([1.0], t, 2)
    assert val == pytest.approx(closed_form_pv([1.0], t, 2), rel=1e-10)


@pytest.mark.parametrize("t", [1e-4, 1e-3, 1e-2])
def test_pv_n3_closed_form(t):
    val, _ = gaussian_singular_conv([0.8, 0.6], t, 3)
    assert val == pytest.approx(closed_form_pv([0.8, 0.6], t, 3), rel=1e-9)


def test_pv_matches_brute_oracle():
    for n, xp in ((2, [1.0]), (3, [1.0, 0.0])):
        v, _ = gaussian_singular_conv(xp, 0.01, n)
        b = gaussian_singular_conv_brute(xp, 0.01, n, eps=1e-6)
        assert v == pytest.approx(b, rel=1e-4)


def test_pv_odd_symmetry_zero():
    v, _ = gaussian_singular_conv([0.0, 1.0], 0.01, 3)
    assert abs(v) <= 10.0 * 0.01 ** 1.5


@pytest.mark.parametrize("n", [2, 3])
def test_pv_leading_term_and_error_scaling(n):
    # residual * |x'|^n / t^(n/2) stays within 10x of its median over t
    xp = [1.0] if n == 2 else [1.0, 0.0]
    errs = []
    for t in (1e-4, 1e-3, 1e-2):
        v, _ = gaussian_singular_conv(xp, t, n)
        lead = (4 * math.pi * t) ** ((n - 1) / 2.0)
        errs.append(abs(v - lead) / t ** (n / 2.0))
    med = float(np.median(errs))
    assert max(errs) <= 10.0 * med


def test_pv_small_time_dominated_by_leading_term():
    t = 1e-4
    v, _ = gaussian_singular_conv([1.0], t, 2)
    lead = (4 * math.pi * t) ** 0.5
    assert abs(v - lead) / lead <= 10.0 * math.sqrt(t)
