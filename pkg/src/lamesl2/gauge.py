"""Coordinate map xi = sn/cn, gauge function A(x) and the closed-form gauge factor mu.

The integrand (B4' - 2B3)/(4 B4) is split over the two quadratic factors of
B4 = (1 + xi^2)(1 + k'^2 xi^2):

    (B4' - 2B3) = (alpha xi + beta)(1 + k'^2 xi^2) + (gamma xi + delta)(1 + xi^2)

and integrates to logs of cn, dn plus the arctangents of xi and k' xi. The
second arctangent is the angle theta with cos theta = cn/dn,
sin theta = k' sn/dn, kept continuous in x.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize

from .algebraize import AlgebraizationParams
from .elliptic import EllipticModulus, as_real_array, jacobi_sn_cn_dn, jacobi_sn_cn_dn_am
from .sl2core import b_coefficients, poly_derivative, poly_eval


class PoleError(ValueError):
    pass


class PoleProximityWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class GaugeFactorSpec:
    alpha: complex
    beta: complex
    gamma: complex
    delta: complex
    sigma: complex  # cn exponent
    tau: complex  # dn exponent
    phase_coeff: complex  # multiplies theta
    arctan_coeff: complex  # multiplies arctan(xi)
    modulus: EllipticModulus


def xi_of_x(x, modulus: EllipticModulus):
    sn, cn, _ = jacobi_sn_cn_dn(x, modulus)
    cn_arr = np.asarray(cn)
    tol = 1e-15 * modulus.quarter_period
    if np.any(np.abs(cn_arr) <= tol):
        raise PoleError("xi = sn/cn has a pole at odd multiples of K")
    return np.asarray(sn) / cn_arr if cn_arr.ndim else sn / cn


def x_of_xi(xi: float, modulus: EllipticModulus, tol: float = 1e-13) -> float:
    """Integral of 1/sqrt(B4) from 0 to xi by adaptive quadrature."""
    xi = float(xi)
    if not math.isfinite(xi):
        raise ValueError("xi must be finite")
    if xi == 0.0:
        return 0.0
    k2 = modulus.k2
    sign = 1.0 if xi > 0 else -1.0
    # xi = tan(u) turns the integral into int_0^atan(xi) du / sqrt(1 - k^2 sin^2 u)
    g = lambda u: 1.0 / math.sqrt(1.0 - k2 * math.sin(u) ** 2)
    val, err = integrate.quad(g, 0.0, math.atan(abs(xi)), epsabs=tol, epsrel=tol, limit=200)
    if err > 1e3 * tol:
        raise ArithmeticError(f"quadrature did not converge (error estimate {err:.3g})")
    return sign * val


def gauge_spec(ap: AlgebraizationParams) -> GaugeFactorSpec:
    """Partial-fraction coefficients of B4' - 2B3 and the exponents derived from them."""
    kp2 = ap.modulus.kprime2
    kp = ap.modulus.kprime
    b = b_coefficients(ap.n, ap.quad, ap.c_plus, ap.c_zero, ap.c_minus, ap.d)
    d4 = poly_derivative(b.b4)
    target = np.zeros(4, dtype=complex)
    for p, c in enumerate(d4):
        target[p] += c
    for p, c in enumerate(b.b3):
        target[p] -= 2 * c
    # columns: alpha, beta, gamma, delta; rows: powers 0..3 of xi
    system = np.array([
        [0.0, 1.0, 0.0, 1.0],
        [1.0, 0.0, 1.0, 0.0],
        [0.0, kp2, 0.0, 1.0],
        [kp2, 0.0, 1.0, 0.0],
    ])
    assert abs(np.linalg.det(system)) > 0, "singular partial-fraction system (k'^2 = 1)"
    alpha, beta, gamma, delta = np.linalg.solve(system, target)
    sigma = alpha / 4 + gamma / (4 * kp2)
    tau = -gamma / (4 * kp2)
    return GaugeFactorSpec(
        alpha=complex(alpha), beta=complex(beta), gamma=complex(gamma), delta=complex(delta),
        sigma=complex(sigma), tau=complex(tau), phase_coeff=complex(-delta / (4 * kp)),
        arctan_coeff=complex(-beta / 4), modulus=ap.modulus)


def unwrapped_theta(x, modulus: EllipticModulus, sn=None, cn=None):
    """Continuous angle with cos = cn/dn, sin = k' sn/dn and theta(0) = 0.

    Equals am(x + K) - pi/2; the amplitude only selects the 2 pi branch of the
    two-argument arctangent, which keeps theta(0) exactly zero. Pass sn, cn at
    x when they are already known.
    """
    x = as_real_array(x)
    if sn is None or cn is None:
        sn, cn, _ = jacobi_sn_cn_dn(x, modulus)
    two_pi = 8 * np.arctan(np.ones((), dtype=x.dtype))  # pi at the working precision
    principal = np.arctan2(modulus.kprime * np.asarray(sn), np.asarray(cn))
    guide = np.asarray(jacobi_sn_cn_dn_am(x + modulus.quarter_period, modulus)[3]) - two_pi / 4
    turns = np.round((guide - principal) / two_pi)
    out = principal + two_pi * turns
    return out.item() if out.ndim == 0 else out


def gauge_function(x, ap: AlgebraizationParams):
    """A(x) = (B4' - 2B3) / (4 sqrt(B4)) at xi = sn/cn, with sqrt(B4) = dn/cn^2."""
    b = b_coefficients(ap.n, ap.quad, ap.c_plus, ap.c_zero, ap.c_minus, ap.d)
    sn, cn, dn = jacobi_sn_cn_dn(x, ap.modulus)
    sn, cn, dn = np.asarray(sn), np.asarray(cn), np.asarray(dn)
    xi = sn / cn
    num = poly_eval(poly_derivative(b.b4), xi) - 2 * poly_eval(b.b3, xi)
    return num * cn * cn / (4 * dn)


def _is_integer(z: complex, tol: float = 1e-9) -> bool:
    return abs(z.imag) < tol and abs(z.real - round(z.real)) < tol


def gauge_factor(x, spec: GaugeFactorSpec):
    """mu(x) = cn^sigma dn^tau exp(arctan_coeff atan(xi)) exp(phase_coeff theta).

    Raw form, valid on (-K, K). Non-integer cn powers use |cn|; a warning is
    issued within 1e-6 K of a pole of xi.
    """
    mod = spec.modulus
    x = np.asarray(x, dtype=float)
    sn, cn, dn = (np.asarray(v) for v in jacobi_sn_cn_dn(x, mod))
    K = mod.quarter_period
    offset = np.mod(x - K, 2 * K)
    if np.any(np.minimum(offset, 2 * K - offset) < 1e-6 * K):
        warnings.warn("gauge factor evaluated within 1e-6 K of a pole of xi",
                      PoleProximityWarning, stacklevel=2)
    if _is_integer(spec.sigma):
        cn_part = cn.astype(complex) ** int(round(spec.sigma.real))
    else:
        cn_part = np.exp(spec.sigma * np.log(np.abs(cn)))
    out = cn_part * np.exp(spec.tau * np.log(dn))
    if spec.arctan_coeff != 0:
        with np.errstate(divide="ignore"):
            out = out * np.exp(spec.arctan_coeff * np.arctan(sn / cn))
    if spec.phase_coeff != 0:
        out = out * np.exp(spec.phase_coeff * unwrapped_theta(x, mod))
    return out.item() if out.ndim == 0 else out


def gauge_factor_by_quadrature(x: float, ap: AlgebraizationParams, tol: float = 1e-12) -> complex:
    """exp(-integral_0^x A(t) dt) by adaptive quadrature; needs |x| < K."""
    if abs(x) >= ap.modulus.quarter_period:
        raise PoleError("quadrature route only covers (-K, K)")
    re = lambda t: float(np.real(gauge_function(t, ap)))
    im = lambda t: float(np.imag(gauge_function(t, ap)))
    ir, _ = integrate.quad(re, 0.0, x, epsabs=tol, epsrel=tol, limit=200)
    ii, _ = integrate.quad(im, 0.0, x, epsabs=tol, epsrel=tol, limit=200)
    return complex(np.exp(-(ir + 1j * ii)))


def invert_x_of_xi(x: float, modulus: EllipticModulus) -> float:
    """xi with x_of_xi(xi) = x for |x| < K, by bracketing root search (oracle helper)."""
    K = modulus.quarter_period
    if abs(x) >= K:
        raise PoleError("inversion only covers (-K, K)")
    hi = 1.0
    while x_of_xi(hi, modulus) < abs(x):
        hi *= 2.0
    root = optimize.brentq(lambda s: x_of_xi(s, modulus) - abs(x), 0.0, hi, xtol=1e-15, rtol=1e-15)
    return math.copysign(root, x)
