"""sl(2,R) on polynomials of degree <= n, the gauged Hamiltonian and its B-polynomials.

Polynomials are coefficient vectors in the monomial basis {1, xi, ..., xi^n};
an operator is the matrix whose column j is the image of xi^j.

The low-level builders (``generators``, ``gauged_matrix``, ``b_coefficients``,
``operator_matrix``) accept any scalar type. Passing ``exact=True`` makes them
use object arrays, so ``fractions.Fraction`` or sympy values stay exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Mapping, Sequence

import numpy as np

# keys of the symmetric quadratic coefficients C_ab; C_{+-} = C_{-+} = 0
QUAD_KEYS = ("++", "+0", "00", "0-", "--")


class ParameterMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class GeneratorSet:
    n: int
    t_plus: np.ndarray
    t_zero: np.ndarray
    t_minus: np.ndarray


@dataclass(frozen=True)
class GaugedHamiltonian:
    n: int
    matrix: np.ndarray
    params: Any = None


@dataclass(frozen=True)
class BPolynomials:
    """Ascending coefficient lists of B4, B3, B2."""

    b4: tuple
    b3: tuple
    b2: tuple


def build_generators(n: int, exact: bool = False) -> GeneratorSet:
    """Matrices of T+ = xi^2 d - n xi, T0 = xi d - n/2, T- = d on degree <= n."""
    if int(n) != n or n < 0:
        raise ValueError(f"representation label must be a non-negative integer, got {n!r}")
    n = int(n)
    size = n + 1
    if exact:
        zero, half = Fraction(0), Fraction(1, 2)
        tp = np.full((size, size), zero, dtype=object)
        t0 = np.full((size, size), zero, dtype=object)
        tm = np.full((size, size), zero, dtype=object)
    else:
        half = 0.5
        tp = np.zeros((size, size))
        t0 = np.zeros((size, size))
        tm = np.zeros((size, size))
    for j in range(size):
        t0[j, j] = j - half * n
        if j >= 1:
            tm[j - 1, j] = j
        if j + 1 <= n:
            tp[j + 1, j] = j - n
    return GeneratorSet(n, tp, t0, tm)


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a.dot(b) - b.dot(a)


def gauged_matrix(n: int, quad: Mapping[str, Any], c_plus, c_zero, c_minus, d,
                  exact: bool = False) -> np.ndarray:
    """-sum C_ab T^a T^b - sum C_a T^a - d on the (n+1)-dim representation."""
    g = build_generators(n, exact=exact)
    tp, t0, tm = g.t_plus, g.t_zero, g.t_minus
    quadratic = (quad["++"] * tp.dot(tp)
                 + quad["+0"] * (tp.dot(t0) + t0.dot(tp))
                 + quad["00"] * t0.dot(t0)
                 + quad["0-"] * (t0.dot(tm) + tm.dot(t0))
                 + quad["--"] * tm.dot(tm))
    linear = c_plus * tp + c_zero * t0 + c_minus * tm
    if exact:
        ident = np.full((n + 1, n + 1), 0, dtype=object)
        for i in range(n + 1):
            ident[i, i] = 1
    else:
        ident = np.eye(n + 1)
    out = -quadratic - linear - d * ident
    if not exact and np.iscomplexobj(out) and not np.any(out.imag):
        out = out.real
    return out


def b_coefficients(n: int, quad: Mapping[str, Any], c_plus, c_zero, c_minus, d) -> BPolynomials:
    cpp, cp0, c00, c0m, cmm = (quad[k] for k in QUAD_KEYS)
    one_n = 1 - n
    b4 = (cmm, 2 * c0m, c00, 2 * cp0, cpp)
    b3 = (one_n * c0m + c_minus,
          one_n * c00 + c_zero,
          3 * one_n * cp0 + c_plus,
          2 * one_n * cpp)
    b2 = (Fraction(n * n, 4) * c00 - Fraction(n, 2) * c_zero + d,
          n * ((n - 1) * cp0 - c_plus),
          n * (n - 1) * cpp)
    return BPolynomials(b4, b3, b2)


def operator_matrix(b: BPolynomials, n: int, exact: bool = False,
                    keep_spill: bool = False) -> np.ndarray:
    """Matrix of -(B4 d^2 + B3 d + B2) applied to each monomial xi^j, j <= n.

    With ``keep_spill`` the result has n+3 rows so that degree overflow (which
    must vanish) can be inspected.
    """
    rows = n + 3
    if exact:
        out = np.full((rows, n + 1), 0, dtype=object)
    else:
        kinds = [complex(v) for v in (*b.b4, *b.b3, *b.b2)]
        dtype = complex if any(v.imag for v in kinds) else float
        out = np.zeros((rows, n + 1), dtype=dtype)
    for j in range(n + 1):
        # B4 * j(j-1) xi^(j-2)
        if j >= 2:
            for p, coef in enumerate(b.b4):
                out[p + j - 2, j] -= j * (j - 1) * coef
        if j >= 1:
            for p, coef in enumerate(b.b3):
                out[p + j - 1, j] -= j * coef
        for p, coef in enumerate(b.b2):
            out[p + j, j] -= coef
    return out if keep_spill else out[: n + 1]


def _unpack(params):
    return params.n, params.quad, params.c_plus, params.c_zero, params.c_minus, params.d


def build_gauged_hamiltonian(params) -> GaugedHamiltonian:
    n, quad, cp, c0, cm, d = _unpack(params)
    if quad is None or set(quad) != set(QUAD_KEYS):
        raise ParameterMismatchError("quadratic coefficients incomplete")
    mat = gauged_matrix(n, quad, cp, c0, cm, d)
    if mat.shape != (n + 1, n + 1):
        raise ParameterMismatchError(f"matrix shape {mat.shape} does not match n={n}")
    if not np.all(np.isfinite(mat)):
        raise ParameterMismatchError("non-finite Hamiltonian entries")
    return GaugedHamiltonian(n, mat, params)


def build_b_polynomials(params) -> BPolynomials:
    return b_coefficients(*_unpack(params))


def poly_eval(coeffs: Sequence, xi):
    """Horner evaluation of an ascending coefficient list."""
    out = 0 * xi + coeffs[-1]
    for c in reversed(coeffs[:-1]):
        out = out * xi + c
    return out


def poly_derivative(coeffs: Sequence) -> tuple:
    return tuple(p * coeffs[p] for p in range(1, len(coeffs))) or (0,)
