"""Closed-form band-edge energies and eigenfunctions for small (m, l).

Each fixture lists levels in order r = 0, 1, ...; a level holds
one energy and one or two eigenfunctions (two for a degenerate pair). These
evaluators use only sn, cn, dn and never touch the sl(2) engine.

Square roots of dn +/- cn are written through the half angle theta/2 with
cos theta = cn/dn, which continues them analytically through x = 2K (mod 4K).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .algebraize import LameParameters
from .elliptic import EllipticModulus, as_real_array, jacobi_sn_cn_dn, jacobi_sn_cn_dn_am


class FixtureNotFound(KeyError):
    pass


@dataclass(frozen=True)
class FixtureLevel:
    r: int
    energy: Callable[[float], float]
    functions: tuple  # callables (x, modulus) -> array


@dataclass(frozen=True)
class Fixture:
    params: LameParameters
    levels: tuple
    source_tag: str

    @property
    def energy_formulas(self) -> list:
        return [lvl.energy for lvl in self.levels]

    @property
    def eigenfunction_formulas(self) -> list:
        return [f for lvl in self.levels for f in lvl.functions]

    def energies(self, k2: float) -> np.ndarray:
        return np.array([lvl.energy(k2) for lvl in self.levels])


def _ell(x, mod: EllipticModulus):
    x = as_real_array(x)
    sn, cn, dn = (np.asarray(v) for v in jacobi_sn_cn_dn(x, mod))
    return x, sn, cn, dn


def _half_angle(x, mod: EllipticModulus):
    """cos and sin of theta/2, theta = am(x + K) - pi/2, plus sqrt(2 dn)."""
    x = as_real_array(x)
    am = np.asarray(jacobi_sn_cn_dn_am(x + mod.quarter_period, mod)[3])
    pi = 4 * np.arctan(np.ones((), dtype=x.dtype))
    half = (am - pi / 2) / 2
    dn = _ell(x, mod)[3]
    return np.cos(half), np.sin(half), np.sqrt(2 * dn)


def sqrt_dn_plus_cn(x, mod):
    """sqrt(dn + cn), continued smoothly through its zeros at x = 2K (mod 4K)."""
    c, _, r = _half_angle(x, mod)
    return r * c


def sqrt_dn_minus_cn(x, mod):
    """sgn(sn) sqrt(dn - cn), continued smoothly past x = 2K (mod 4K)."""
    _, s, r = _half_angle(x, mod)
    return r * s


def _kp(k2):
    return np.sqrt(1.0 - k2)


def _lame_m1_l0():
    def dn(x, mod):
        return _ell(x, mod)[3]

    def cn(x, mod):
        return _ell(x, mod)[2]

    def sn(x, mod):
        return _ell(x, mod)[1]

    return (FixtureLevel(0, lambda k2: k2, (dn,)),
            FixtureLevel(1, lambda k2: 1.0, (cn,)),
            FixtureLevel(2, lambda k2: 1.0 + k2, (sn,)))


def _lame_m1_l1():
    def pm(sign):
        def f(x, mod):
            _, sn, cn, dn = _ell(x, mod)
            return dn + sign * mod.kprime / dn
        return f

    def f2(x, mod):
        _, sn, cn, dn = _ell(x, mod)
        return sn * cn / dn

    return (FixtureLevel(0, lambda k2: 2 + k2 - 2 * _kp(k2), (pm(+1),)),
            FixtureLevel(1, lambda k2: 2 + k2 + 2 * _kp(k2), (pm(-1),)),
            FixtureLevel(2, lambda k2: 4.0, (f2,)))


def _lame_m2_l0():
    root = lambda k2: np.sqrt(k2 * k2 - k2 + 1)

    def edge(sign):
        def f(x, mod):
            _, sn, cn, dn = _ell(x, mod)
            return 3 * dn ** 2 + mod.k2 - 2 + sign * root(mod.k2)
        return f

    def prod(a, b):
        def f(x, mod):
            parts = dict(zip(("sn", "cn", "dn"), _ell(x, mod)[1:]))
            return parts[a] * parts[b]
        return f

    return (FixtureLevel(0, lambda k2: 2 * (1 + k2 - root(k2)), (edge(+1),)),
            FixtureLevel(1, lambda k2: 1 + k2, (prod("cn", "dn"),)),
            FixtureLevel(2, lambda k2: 1 + 4 * k2, (prod("sn", "dn"),)),
            FixtureLevel(3, lambda k2: 4 + k2, (prod("sn", "cn"),)),
            FixtureLevel(4, lambda k2: 2 * (1 + k2 + root(k2)), (edge(-1),)))


def _lame_m2_l1():
    r1 = lambda k2: np.sqrt(4 - 3 * k2)
    r2 = lambda k2: np.sqrt(k2 * k2 - 5 * k2 + 4)

    def f0(x, mod):
        return _ell(x, mod)[3] ** 2

    def odd_cn(sign):
        def f(x, mod):
            _, sn, cn, dn = _ell(x, mod)
            return cn * (3 * dn ** 2 - 1 + sign * r1(mod.k2)) / dn
        return f

    def odd_sn(sign):
        def f(x, mod):
            _, sn, cn, dn = _ell(x, mod)
            return sn * (3 * dn ** 2 - mod.kprime2 + sign * r2(mod.k2)) / dn
        return f

    return (FixtureLevel(0, lambda k2: 4 * k2, (f0,)),
            FixtureLevel(1, lambda k2: 5 + k2 - 2 * r1(k2), (odd_cn(+1),)),
            FixtureLevel(2, lambda k2: 5 + 2 * k2 - 2 * r2(k2), (odd_sn(+1),)),
            FixtureLevel(3, lambda k2: 5 + k2 + 2 * r1(k2), (odd_cn(-1),)),
            FixtureLevel(4, lambda k2: 5 + 2 * k2 + 2 * r2(k2), (odd_sn(-1),)))


def eta(k2, sign):
    return 4 - k2 + sign * np.sqrt(k2 * k2 - 16 * k2 + 16)


def _lame_m2_l2():
    def even(sign):
        def f(x, mod):
            _, sn, cn, dn = _ell(x, mod)
            e = eta(mod.k2, sign)
            return (1 - e * sn ** 2 + (e - mod.k2) * sn ** 4) / dn ** 2
        return f

    def f1(x, mod):
        _, sn, cn, dn = _ell(x, mod)
        return (1 - 2 * sn ** 2 + mod.k2 * sn ** 4) / dn ** 2

    def odd(sign):
        def f(x, mod):
            _, sn, cn, dn = _ell(x, mod)
            return sn * cn * (1 + (sign * mod.kprime - 1) * sn ** 2) / dn ** 2
        return f

    return (FixtureLevel(0, lambda k2: 2 * eta(k2, -1) + 4 * k2, (even(-1),)),
            FixtureLevel(1, lambda k2: 4 * (1 + k2), (f1,)),
            FixtureLevel(2, lambda k2: 10 + k2 - 6 * _kp(k2), (odd(+1),)),
            FixtureLevel(3, lambda k2: 10 + k2 + 6 * _kp(k2), (odd(-1),)),
            FixtureLevel(4, lambda k2: 2 * eta(k2, +1) + 4 * k2, (even(+1),)))


def _lame_half_l0():
    return (FixtureLevel(0, lambda k2: (1 + k2) / 4, (sqrt_dn_plus_cn, sqrt_dn_minus_cn)),)


def _lame_half_half():
    def f1(x, mod):
        _, sn, cn, dn = _ell(x, mod)
        return cn / np.sqrt(dn)

    def f2(x, mod):
        _, sn, cn, dn = _ell(x, mod)
        return sn / np.sqrt(dn)

    return (FixtureLevel(0, lambda k2: 1 + k2 / 4, (f1, f2)),)


def alpha(k2, sign):
    return (1 - k2) + sign * np.sqrt(k2 * k2 - k2 + 1)


def _lame_3half_l0():
    # the linear factor multiplies the root; under the root it fails the ODE
    def pair(sign):
        def f1(x, mod):
            _, sn, cn, dn = _ell(x, mod)
            return sqrt_dn_plus_cn(x, mod) * (mod.k2 * cn + alpha(mod.k2, sign) * dn)

        def f2(x, mod):
            _, sn, cn, dn = _ell(x, mod)
            return sqrt_dn_minus_cn(x, mod) * (mod.k2 * cn - alpha(mod.k2, sign) * dn)

        return f1, f2

    root = lambda k2: np.sqrt(k2 * k2 - k2 + 1)
    return (FixtureLevel(0, lambda k2: 5 * (1 + k2) / 4 - root(k2), pair(+1)),
            FixtureLevel(1, lambda k2: 5 * (1 + k2) / 4 + root(k2), pair(-1)))


def _lame_3half_half():
    def f0(x, mod):
        return _ell(x, mod)[3] ** 1.5

    def f1a(x, mod):
        _, sn, cn, dn = _ell(x, mod)
        return (2 * sn ** 2 - 1) / np.sqrt(dn)

    def f1b(x, mod):
        _, sn, cn, dn = _ell(x, mod)
        return sn * cn / np.sqrt(dn)

    return (FixtureLevel(0, lambda k2: 9 * k2 / 4, (f0,)),
            FixtureLevel(1, lambda k2: 4 + k2 / 4, (f1a, f1b)))


def _r34(k2):
    return np.sqrt(k2 * k2 + 9 * (1 - k2))


def beta(k2, sign, quartic=8.0):
    """Coefficient of dn^2; ``quartic`` is the k^4 coefficient (8 solves the ODE)."""
    return quartic * k2 * k2 + 72 * k2 - 96 + sign * 8 * (k2 - 4) * _r34(k2)


def gamma(k2, sign):
    return 8 * k2 * (-3 * k2 + 6 + sign * 2 * _r34(k2))


def delta(k2, sign):
    return 48 * k2 * k2 - 144 * k2 + 96 + sign * 32 * (1 - k2) * _r34(k2)


def _lame_3half_l1(quartic=8.0):
    def pair(sign):
        def f1(x, mod):
            _, sn, cn, dn = _ell(x, mod)
            k2 = mod.k2
            poly = beta(k2, sign, quartic) * dn ** 2 + gamma(k2, sign) * cn * dn + delta(k2, sign)
            return sqrt_dn_plus_cn(x, mod) * poly / dn

        def f2(x, mod):
            _, sn, cn, dn = _ell(x, mod)
            k2 = mod.k2
            poly = beta(k2, sign, quartic) * dn ** 2 - gamma(k2, sign) * cn * dn + delta(k2, sign)
            return sqrt_dn_minus_cn(x, mod) * poly / dn

        return f1, f2

    # k^2 coefficient 5/4; 3/2 misses the eigenvalue by k^2/4
    e = lambda k2, s: 1.25 * k2 + 13 / 4 + s * _r34(k2)
    return (FixtureLevel(0, lambda k2: e(k2, -1), pair(-1)),
            FixtureLevel(1, lambda k2: e(k2, +1), pair(+1)))


def _r35(k2):
    return np.sqrt(k2 * k2 - 16 * k2 + 16)


def phi_coef(k2, sign):
    return 3 * k2 * k2 - 20 * k2 + 16 + sign * (3 * k2 - 4) * _r35(k2)


def rho(k2, sign):
    return 2 * k2 * k2 - 12 * k2 + 16 + sign * (k2 - 4) * _r35(k2)


def epsilon(k2, sign):
    return 3 * k2 - 4 + sign * _r35(k2)


def sn_constant(k2, sign):
    """Constant term next to rho in the sn-type function (3 eps does not solve the ODE)."""
    return 0.75 * (4 - k2) * (k2 - 4 + sign * _r35(k2))


def _lame_3half_3half():
    def pair(sign):
        def f1(x, mod):
            _, sn, cn, dn = _ell(x, mod)
            k2 = mod.k2
            return cn * (phi_coef(k2, sign) * sn ** 2 + 2 * k2 + epsilon(k2, sign)) / dn ** 1.5

        def f2(x, mod):
            _, sn, cn, dn = _ell(x, mod)
            k2 = mod.k2
            return sn * (rho(k2, sign) * sn ** 2 + sn_constant(k2, sign)) / dn ** 1.5

        return f1, f2

    e = lambda k2, s: 5 + 1.25 * k2 + s * _r35(k2)
    return (FixtureLevel(0, lambda k2: e(k2, -1), pair(+1)),
            FixtureLevel(1, lambda k2: e(k2, +1), pair(-1)))


_H = Fraction(1, 2)
_TABLE = {
    (1, 0): (_lame_m1_l0, "25"),
    (1, 1): (_lame_m1_l1, "26"),
    (2, 0): (_lame_m2_l0, "27"),
    (2, 1): (_lame_m2_l1, "28"),
    (2, 2): (_lame_m2_l2, "29"),
    (_H, 0): (_lame_half_l0, "30"),
    (_H, _H): (_lame_half_half, "31"),
    (3 * _H, 0): (_lame_3half_l0, "32"),
    (3 * _H, _H): (_lame_3half_half, "33"),
    (3 * _H, 1): (_lame_3half_l1, "34"),
    (3 * _H, 3 * _H): (_lame_3half_3half, "35"),
}

CASE1_KEYS = [(1, 0), (1, 1), (2, 0), (2, 1), (2, 2)]
CASE2_KEYS = [(_H, 0), (_H, _H), (3 * _H, 0), (3 * _H, _H), (3 * _H, 1), (3 * _H, 3 * _H)]


def available() -> list[LameParameters]:
    return [LameParameters(m, l) for m, l in _TABLE]


def fixture_for(params: LameParameters) -> Fixture:
    key = (params.m, params.l)
    if key not in _TABLE:
        raise FixtureNotFound(f"no closed-form fixture for {params}")
    build, tag = _TABLE[key]
    return Fixture(params, build(), tag)


def beta_minus7_variant() -> Fixture:
    """(3/2, 1) with the k^4 coefficient of beta set to -7; kept as a negative control."""
    return Fixture(LameParameters(3 * _H, 1), _lame_3half_l1(quartic=-7.0), "34")
