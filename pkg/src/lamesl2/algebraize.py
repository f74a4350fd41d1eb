"""Matching the algebraic potential to the associated Lame potential.

The four families (A, B, C, D) of linear coefficients make the sl(2) potential
equal m(m+1) k^2 sn^2 + l(l+1) k^2 cn^2/dn^2. Indices m, l are exact
``Fraction`` values with denominator 1 or 2.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

import numpy as np

from .elliptic import EllipticModulus, jacobi_sn_cn_dn
from .sl2core import QUAD_KEYS, b_coefficients, poly_derivative, poly_eval

FAMILIES = ("A", "B", "C", "D")


class InadmissibleError(ValueError):
    """(m, l) or (m, l, family) outside the supported algebraizations."""


def parse_index(text) -> Fraction:
    """Parse "3/2", "2" or an int/Fraction; floats are refused."""
    if isinstance(text, bool):
        raise InadmissibleError(f"not a rational index: {text!r}")
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if isinstance(text, float):
        raise InadmissibleError(f"give m and l as integers or p/q strings, not floats ({text!r})")
    s = str(text).strip()
    if "." in s or "e" in s.lower():
        raise InadmissibleError(f"give m and l as integers or p/q strings, not floats ({s!r})")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise InadmissibleError(f"cannot parse index {s!r}") from None


@dataclass(frozen=True)
class LameParameters:
    m: Fraction
    l: Fraction

    def __post_init__(self):
        m, l = parse_index(self.m), parse_index(self.l)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "l", l)
        if m.denominator not in (1, 2) or l.denominator not in (1, 2):
            raise InadmissibleError(f"m and l must be integers or half-integers, got m={m}, l={l}")
        if m < 0 or l < 0:
            raise InadmissibleError(f"m and l must be non-negative, got m={m}, l={l}")
        if l > m:
            raise InadmissibleError(
                f"l={l} exceeds m={m}; the potential is symmetric under m <-> l, use m >= l")
        if m.denominator == 1 and l.denominator != 1:
            raise InadmissibleError(f"integer m={m} requires integer l, got l={l}")

    @property
    def case(self) -> int:
        """1 for integer m (families A, B), 2 for half-odd m (families C, D)."""
        return 1 if self.m.denominator == 1 else 2

    @property
    def state_count(self) -> int:
        return int(2 * self.m + 1)

    def __str__(self):
        return f"(m={self.m}, l={self.l})"


def family_size(params: LameParameters, family: str) -> int:
    """n for the family; may be negative (then the family is inadmissible)."""
    m, l = params.m, params.l
    if family == "A":
        n = m + l
    elif family == "B":
        n = m - l - 1
    elif family in ("C", "D"):
        n = m - Fraction(1, 2)
    else:
        raise InadmissibleError(f"unknown family {family!r}")
    if n.denominator != 1:
        return -1
    return int(n)


def admissible_families(params: LameParameters) -> list[str]:
    candidates = ("A", "B") if params.case == 1 else ("C", "D")
    return [f for f in candidates if family_size(params, f) >= 0]


def lame_quadratic(modulus: EllipticModulus) -> dict:
    """C_ab fixed by B4 = (1 + xi^2)(1 + k'^2 xi^2)."""
    return {"++": modulus.kprime2, "+0": 0.0, "00": 2.0 - modulus.k2, "0-": 0.0, "--": 1.0}


def constant_d(n: int, c_plus, c_zero, c_minus, modulus: EllipticModulus):
    k2, kp2 = modulus.k2, modulus.kprime2
    return (c_minus ** 2 - (c_zero ** 2 + 2 * c_plus * c_minus) + c_plus ** 2 / kp2) / (4 * k2) \
        - n * (n + 2) / 2


@dataclass(frozen=True)
class AlgebraizationParams:
    family: str
    n: int
    c_plus: complex
    c_minus: complex
    c_zero: complex
    quad: Mapping[str, float]
    d: complex
    modulus: EllipticModulus
    lame: LameParameters | None = None


def solve_family(params: LameParameters, family: str,
                 modulus: EllipticModulus) -> AlgebraizationParams:
    if family not in admissible_families(params):
        raise InadmissibleError(f"family {family} is not admissible for {params}")
    n = family_size(params, family)
    m, l = float(params.m), float(params.l)
    k2, kp = modulus.k2, modulus.kprime
    if family == "A":
        cp = cm = 0.0
        c0 = k2 * (l - m)
    elif family == "B":
        cp = cm = 0.0
        c0 = -k2 * (l + m + 1)
    else:
        sign = 1.0 if family == "C" else -1.0
        cp = cm = sign * 1j * kp * (2 * l + 1)
        c0 = -k2 * (m + 0.5)
    d = constant_d(n, cp, c0, cm, modulus)
    return AlgebraizationParams(family, n, cp, cm, c0, lame_quadratic(modulus), d, modulus, params)


@dataclass(frozen=True)
class PotentialCoefficients:
    p: complex
    q: complex
    r: complex
    s: complex


def potential_coefficients(ap: AlgebraizationParams) -> PotentialCoefficients:
    n = ap.n
    k2, kp2 = ap.modulus.k2, ap.modulus.kprime2
    cp, cm, c0 = ap.c_plus, ap.c_minus, ap.c_zero
    p = k2 / 4 * n * (n + 2) - c0 / 2 * (n + 1) + (c0 ** 2 - (cp - cm) ** 2) / (4 * k2)
    q = (cp - cm) * (k2 * (n + 1) - c0) / (2 * k2)
    r = (cp - kp2 * cm) * (k2 * (n + 1) + c0) / (2 * k2)
    s = (k2 / 4 * n * (n + 2) + c0 / 2 * (n + 1)
         + (c0 ** 2 - (cp - kp2 * cm) ** 2 / kp2) / (4 * k2))
    return PotentialCoefficients(p, q, r, s)


def lame_potential(x, params: LameParameters, modulus: EllipticModulus):
    """m(m+1) k^2 sn^2 x + l(l+1) k^2 cn^2 x / dn^2 x."""
    sn, cn, dn = jacobi_sn_cn_dn(x, modulus)
    m, l = float(params.m), float(params.l)
    return modulus.k2 * (m * (m + 1) * sn * sn + l * (l + 1) * cn * cn / (dn * dn))


def algebraic_potential(x, ap: AlgebraizationParams):
    """P sn^2 + Q sn cn + R sn cn/dn^2 + S cn^2/dn^2; real part when Im is negligible."""
    c = potential_coefficients(ap)
    sn, cn, dn = jacobi_sn_cn_dn(x, ap.modulus)
    v = c.p * sn * sn + c.q * sn * cn + c.r * sn * cn / (dn * dn) + c.s * cn * cn / (dn * dn)
    return _realify(v)


def potential_from_b(x, ap: AlgebraizationParams):
    """V = (B4' - 2B3)(3B4' - 2B3)/(16 B4) - (B4'' - 2B3' + 4B2)/4 at xi = sn/cn.

    Only defined where cn x != 0.
    """
    b = b_coefficients(ap.n, ap.quad, ap.c_plus, ap.c_zero, ap.c_minus, ap.d)
    sn, cn, _ = jacobi_sn_cn_dn(x, ap.modulus)
    xi = np.asarray(sn) / np.asarray(cn)
    d4 = poly_derivative(b.b4)
    dd4 = poly_derivative(d4)
    d3 = poly_derivative(b.b3)
    b4 = poly_eval(b.b4, xi)
    u = poly_eval(d4, xi) - 2 * poly_eval(b.b3, xi)
    w = 3 * poly_eval(d4, xi) - 2 * poly_eval(b.b3, xi)
    v = u * w / (16 * b4) - (poly_eval(dd4, xi) - 2 * poly_eval(d3, xi)
                             + 4 * poly_eval(b.b2, xi)) / 4
    return _realify(v)


def _realify(v):
    arr = np.asarray(v)
    if np.iscomplexobj(arr):
        scale = max(1.0, float(np.max(np.abs(arr)))) if arr.size else 1.0
        if np.max(np.abs(arr.imag), initial=0.0) <= 1e-10 * scale:
            arr = arr.real
    return arr.item() if arr.ndim == 0 else arr


def all_families(params: LameParameters, modulus: EllipticModulus) -> list[AlgebraizationParams]:
    return [solve_family(params, f, modulus) for f in admissible_families(params)]


def half_integer_grid(max_m: Fraction | int = 4):
    """Every admissible (m, l) with m <= max_m, in increasing order."""
    out = []
    two_max = int(2 * Fraction(max_m))
    for two_m in range(0, two_max + 1):
        m = Fraction(two_m, 2)
        if m.denominator == 1:
            ls = [Fraction(j) for j in range(0, int(m) + 1)]
        else:
            ls = [Fraction(j, 2) for j in range(0, two_m + 1)]
        out.extend(LameParameters(m, l) for l in ls)
    return out


__all__ = [
    "FAMILIES", "InadmissibleError", "LameParameters", "AlgebraizationParams",
    "PotentialCoefficients", "parse_index", "family_size", "admissible_families",
    "solve_family", "potential_coefficients", "lame_potential", "algebraic_potential",
    "potential_from_b", "constant_d", "lame_quadratic", "all_families", "half_integer_grid",
    "QUAD_KEYS",
]
