import dataclasses
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from lamesl2 import EllipticModulus, LameParameters, solve_family
from lamesl2.algebraize import half_integer_grid, all_families
from lamesl2.sl2core import (QUAD_KEYS, ParameterMismatchError, b_coefficients,
                             build_b_polynomials, build_gauged_hamiltonian, build_generators,
                             commutator, gauged_matrix, operator_matrix)

xi = sp.Symbol("xi")
C = dict(zip(QUAD_KEYS, sp.symbols("cpp cp0 c00 c0m cmm")))
cp, c0, cm, d = sp.symbols("cp c0 cm d")


def sym_generators(n):
    """Differential generators acting on sympy expressions (independent of the matrices)."""
    return (lambda f: sp.expand(xi ** 2 * sp.diff(f, xi) - n * xi * f),
            lambda f: sp.expand(xi * sp.diff(f, xi) - sp.Rational(n, 2) * f),
            lambda f: sp.expand(sp.diff(f, xi)))


def sym_hamiltonian(n, f):
    tp, t0, tm = sym_generators(n)
    quad = (C["++"] * tp(tp(f)) + C["+0"] * (tp(t0(f)) + t0(tp(f))) + C["00"] * t0(t0(f))
            + C["0-"] * (t0(tm(f)) + tm(t0(f))) + C["--"] * tm(tm(f)))
    return sp.expand(-quad - cp * tp(f) - c0 * t0(f) - cm * tm(f) - d * f)


def coeff_column(expr, size):
    poly = sp.Poly(expr, xi)
    out = [sp.Integer(0)] * size
    for (power,), c in poly.terms():
        assert power < size, "degree spill"
        out[power] = c
    return out


def test_n0_scalar():
    g = build_generators(0)
    assert g.t_plus.shape == (1, 1)
    assert g.t_plus[0, 0] == g.t_zero[0, 0] == g.t_minus[0, 0] == 0


def test_n1_action():
    g = build_generators(1)
    # columns are images of 1 and xi
    assert g.t_plus[:, 0].tolist() == [0, -1] and g.t_plus[:, 1].tolist() == [0, 0]
    assert g.t_zero[:, 0].tolist() == [-0.5, 0] and g.t_zero[:, 1].tolist() == [0, 0.5]
    assert g.t_minus[:, 0].tolist() == [0, 0] and g.t_minus[:, 1].tolist() == [1, 0]


@pytest.mark.parametrize("n", range(0, 31))
def test_commutators_exact(n):
    g = build_generators(n, exact=True)
    tp, t0, tm = g.t_plus, g.t_zero, g.t_minus
    assert np.all(commutator(tp, tm) + 2 * t0 == 0)
    assert np.all(commutator(t0, tp) - tp == 0)
    assert np.all(commutator(t0, tm) + tm == 0)
    assert all(isinstance(v, (Fraction, int)) for v in t0.ravel())


@pytest.mark.parametrize("n", [1, 5, 17, 30])
def test_commutators_float(n):
    g = build_generators(n)
    tp, t0, tm = g.t_plus, g.t_zero, g.t_minus
    assert np.max(np.abs(commutator(tp, tm) + 2 * t0)) < 1e-14
    assert np.max(np.abs(commutator(t0, tp) - tp)) < 1e-14
    assert np.max(np.abs(commutator(t0, tm) + tm)) < 1e-14


@pytest.mark.parametrize("n", [0, 3, 8])
def test_raising_annihilates_top_and_lowering_shifts(n):
    g = build_generators(n)
    assert np.all(g.t_plus[:, n] == 0)
    expect = np.diag(np.arange(1, n + 1, dtype=float), k=1)
    assert np.array_equal(g.t_minus, expect)


def test_generators_reject_bad_n():
    with pytest.raises(ValueError):
        build_generators(-1)
    with pytest.raises(ValueError):
        build_generators(1.5)


@pytest.mark.parametrize("n", [0, 1, 2, 4])
def test_matrix_matches_symbolic_operator(n):
    """Symbolic C's: gauged matrix == generator calculus == B-polynomial operator."""
    mat = gauged_matrix(n, C, cp, c0, cm, d, exact=True)
    b = b_coefficients(n, C, cp, c0, cm, d)
    op = operator_matrix(b, n, exact=True, keep_spill=True)
    for j in range(n + 1):
        col = coeff_column(sym_hamiltonian(n, xi ** j), n + 3)
        for i in range(n + 3):
            if i <= n:
                assert sp.expand(mat[i, j] - col[i]) == 0
            assert sp.expand(op[i, j] - col[i]) == 0, (i, j)


@settings(max_examples=40, deadline=None)
@given(k2=st.floats(min_value=0.05, max_value=0.95), idx=st.integers(0, 29))
def test_float_matrix_operator_consistency(k2, idx):
    params = half_integer_grid(Fraction(7, 2))[idx]
    for ap in all_families(params, EllipticModulus(k2)):
        mat = build_gauged_hamiltonian(ap).matrix
        op = operator_matrix(build_b_polynomials(ap), ap.n, keep_spill=True)
        scale = max(1.0, np.max(np.abs(mat)))
        assert np.max(np.abs(op[: ap.n + 1] - mat)) < 1e-12 * scale
        assert np.max(np.abs(op[ap.n + 1:]), initial=0.0) < 1e-12 * scale


def test_b4_expansion():
    ap = solve_family(LameParameters(1, 0), "A", EllipticModulus(0.5))
    b = build_b_polynomials(ap)
    assert np.allclose(np.array(b.b4, dtype=complex), [1, 0, 1.5, 0, 0.5], atol=1e-15)
    lhs = np.polynomial.polynomial.polymul([1, 0, 1], [1, 0, 0.5])
    assert np.allclose(np.array(b.b4, dtype=complex), lhs)


def test_b3_family_a_1_0():
    ap = solve_family(LameParameters(1, 0), "A", EllipticModulus(0.5))
    b3 = np.array(build_b_polynomials(ap).b3, dtype=complex)
    # (C-, (1-n)(2-k^2) + C0, C+, 2(1-n)k'^2) with n=1, C0=-k^2
    assert np.allclose(b3, [0, -0.5, 0, 0], atol=1e-15)


def test_b2_constant_family_a_1_0():
    ap = solve_family(LameParameters(1, 0), "A", EllipticModulus(0.5))
    b2 = build_b_polynomials(ap).b2
    n, k2 = 1, 0.5
    expect = n * n / 4 * (2 - k2) - n * (-k2) / 2 + ap.d
    assert abs(complex(b2[0]) - expect) < 1e-15


def test_hamiltonian_examples():
    mod = EllipticModulus(0.5)
    ha = build_gauged_hamiltonian(solve_family(LameParameters(1, 0), "A", mod))
    assert ha.matrix.shape == (2, 2) and not np.iscomplexobj(ha.matrix)
    assert np.allclose(np.sort(np.linalg.eigvals(ha.matrix).real), [1.0, 1.5], atol=1e-14)
    hb = build_gauged_hamiltonian(solve_family(LameParameters(1, 0), "B", mod))
    assert hb.matrix.shape == (1, 1)
    assert hb.matrix[0, 0] == pytest.approx(0.5, abs=1e-14)


def test_zero_linear_terms_quadratic_only():
    mod = EllipticModulus(0.3)
    ap = solve_family(LameParameters(1, 1), "A", mod)
    quad = ap.quad
    mat = gauged_matrix(2, quad, 0, 0, 0, 0)
    g = build_generators(2)
    expect = -(quad["++"] * g.t_plus @ g.t_plus + quad["00"] * g.t_zero @ g.t_zero
               + quad["--"] * g.t_minus @ g.t_minus)
    assert np.allclose(mat, expect, atol=1e-15)


def test_complex_family_matrix_is_complex():
    ap = solve_family(LameParameters(Fraction(3, 2), 1), "C", EllipticModulus(0.5))
    assert np.iscomplexobj(build_gauged_hamiltonian(ap).matrix)


def test_incomplete_quad_rejected():
    ap = solve_family(LameParameters(1, 0), "A", EllipticModulus(0.5))
    bad = dataclasses.replace(ap, quad={"++": 0.5, "00": 1.5})
    with pytest.raises(ParameterMismatchError):
        build_gauged_hamiltonian(bad)
