"""Jacobi elliptic functions of real argument and the complete integral K(k).

Production path: AGM table + descending Landen recursion for the amplitude,
with the argument reduced modulo 4K first. ``k2`` is the parameter k^2
throughout. Long double inputs stay long double (numpy path), which the
finite-difference residual checks rely on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from ._accel import USE_NUMBA


# above this many points numpy's vectorized ufuncs beat the scalar numba loop
NUMBA_ARRAY_CUTOFF = 2048


class EllipticDomainError(ValueError):
    pass


def complete_elliptic_K(k2: float) -> float:
    """K(k) = pi / (2 AGM(1, k')), valid for 0 <= k2 < 1."""
    k2 = float(k2)
    if not (0.0 <= k2 < 1.0) or math.isnan(k2):
        raise EllipticDomainError(f"K(k) needs 0 <= k^2 < 1, got {k2!r}")
    if k2 == 0.0:
        return math.pi / 2
    return float(_kernels.quarter_period(k2))


@dataclass(frozen=True)
class EllipticModulus:
    """Validated modulus: k^2 in (0, 1), k'^2 = 1 - k^2 and K(k)."""

    k2: float
    kprime2: float = field(init=False)
    quarter_period: float = field(init=False)

    def __post_init__(self):
        k2 = float(self.k2)
        if not (0.0 < k2 < 1.0):
            raise EllipticDomainError(f"modulus needs 0 < k^2 < 1, got {self.k2!r}")
        object.__setattr__(self, "k2", k2)
        object.__setattr__(self, "kprime2", 1.0 - k2)
        object.__setattr__(self, "quarter_period", complete_elliptic_K(k2))

    @property
    def k(self) -> float:
        return math.sqrt(self.k2)

    @property
    def kprime(self) -> float:
        return math.sqrt(self.kprime2)

    @property
    def period(self) -> float:
        """Period 2K of sn^2 and of the Lame potential."""
        return 2.0 * self.quarter_period


def _agm_table_numpy(k2: float, dtype):
    one = dtype(1)
    a, c = [one], [np.sqrt(dtype(k2))]
    b = np.sqrt(one - dtype(k2))
    eps = np.finfo(dtype).eps
    while c[-1] > eps * a[-1] and len(a) < _kernels.MAX_LEVELS:
        a_prev = a[-1]
        a.append((a_prev + b) / 2)
        c.append((a_prev - b) / 2)
        b = np.sqrt(a_prev * b)
    return a, c, len(a) - 1


def _landen_numpy(x: np.ndarray, k2: float):
    dtype = np.longdouble if x.dtype == np.longdouble else np.float64
    a, c, n = _agm_table_numpy(k2, dtype)
    pi = np.arctan(dtype(1)) * 4
    period = 2 * pi / a[n]
    j = np.floor(x / period + dtype(0.5))
    xr = x - j * period
    phi = dtype(2) ** n * a[n] * xr
    for i in range(n, 0, -1):
        phi = (phi + np.arcsin(c[i] / a[i] * np.sin(phi))) / 2
    sn = np.sin(phi)
    cn = np.cos(phi)
    dn = np.sqrt((1 - dtype(k2)) + dtype(k2) * cn * cn)
    return sn, cn, dn, phi + 2 * pi * j


def as_real_array(x) -> np.ndarray:
    """float64 array, or long double when the input already is long double."""
    arr = np.asarray(x)
    if arr.dtype != np.longdouble:
        arr = arr.astype(float)
    return arr


def _evaluate(x, k2: float):
    arr = as_real_array(x)
    if not np.all(np.isfinite(arr)):
        raise EllipticDomainError("Jacobi functions need a finite argument")
    flat = np.ascontiguousarray(arr.reshape(-1))
    if USE_NUMBA and arr.dtype == np.float64 and flat.size < NUMBA_ARRAY_CUTOFF:
        out = _kernels.sncndn_array(flat, k2)
    else:
        out = _landen_numpy(flat, k2)
    if arr.ndim == 0:
        return tuple(v[0] if arr.dtype == np.longdouble else float(v[0]) for v in out)
    return tuple(v.reshape(arr.shape) for v in out)


def jacobi_sn_cn_dn(x, modulus: EllipticModulus):
    """Return ``(sn, cn, dn)`` at ``x`` (scalar or array)."""
    sn, cn, dn, _ = _evaluate(x, modulus.k2)
    return sn, cn, dn


def jacobi_sn_cn_dn_am(x, modulus: EllipticModulus):
    """Like :func:`jacobi_sn_cn_dn` plus the continuous amplitude am(x)."""
    return _evaluate(x, modulus.k2)


def jacobi_am(x, modulus: EllipticModulus):
    return _evaluate(x, modulus.k2)[3]
