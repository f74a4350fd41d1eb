from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import CASE1, CASE2, K2_SET, small_grid
from lamesl2 import EllipticModulus, LameParameters, fixture_for, jacobi_sn_cn_dn, solve_family
from lamesl2.algebraize import all_families
from lamesl2.gauge import gauge_spec
from lamesl2.sl2core import build_gauged_hamiltonian
from lamesl2.spectra import (SamplerError, band_edge_spectrum, eigenpairs, normalize_coeffs,
                             wavefunction_sampler)
from lamesl2.verify import max_normalized, wronskian

H = Fraction(1, 2)


def test_example_1_1(cache):
    spec = cache.spectrum(1, 1, 0.5)
    kp = np.sqrt(0.5)
    assert np.allclose(spec.energies, [2.5 - 2 * kp, 2.5 + 2 * kp, 4.0], rtol=1e-12)
    assert spec.total_count == 3
    assert [s.label for s in spec.states] == [0, 1, 2]


@pytest.mark.parametrize("k2", [0.2, 0.7])
def test_example_half_half(k2, cache):
    spec = cache.spectrum(H, H, k2)
    assert len(spec.states) == 1
    s = spec.states[0]
    assert s.degeneracy == 2 and s.family == "CD"
    assert s.energy == pytest.approx(1 + k2 / 4, rel=1e-13)
    mod = spec.modulus
    x = np.linspace(-3, 3, 61)
    sn, cn, dn = jacobi_sn_cn_dn(x, mod)
    basis = np.vstack([cn / np.sqrt(dn), sn / np.sqrt(dn)]).T
    for f in s.wave_samplers:
        coef, *_ = np.linalg.lstsq(basis, f(x), rcond=None)
        assert np.max(np.abs(basis @ coef - f(x))) < 1e-12


def test_free_particle():
    spec = band_edge_spectrum(LameParameters(0, 0), EllipticModulus(0.5))
    assert len(spec.states) == 1
    assert spec.states[0].energy == 0
    f = spec.states[0].wave_samplers[0]
    assert np.all(f(np.linspace(-5, 5, 11)) == 1.0)


def test_example_2_2(cache):
    k2 = 0.5
    spec = cache.spectrum(2, 2, k2)
    root = np.sqrt(k2 * k2 - 16 * k2 + 16)
    eta = lambda s: 4 - k2 + s * root
    kp = np.sqrt(1 - k2)
    expect = sorted([2 * eta(-1) + 4 * k2, 4 * (1 + k2), 10 + k2 - 6 * kp, 10 + k2 + 6 * kp,
                     2 * eta(1) + 4 * k2])
    assert np.allclose(spec.energies, expect, rtol=1e-12)


def test_sampler_examples():
    mod = EllipticModulus(0.5)
    x = np.linspace(-4, 4, 41)
    dn = jacobi_sn_cn_dn(x, mod)[2]
    spec = band_edge_spectrum(LameParameters(1, 0), mod)
    b = [s for s in spec.states if s.family == "B"][0]
    assert b.energy == pytest.approx(0.5)
    assert np.max(np.abs(b.wave_samplers[0](x) - dn)) < 1e-15
    spec = band_edge_spectrum(LameParameters(2, 1), mod)
    b = [s for s in spec.states if s.family == "B"][0]
    assert b.energy == pytest.approx(4 * 0.5)
    assert np.max(np.abs(b.wave_samplers[0](x) - dn * dn)) < 1e-14


def test_sampler_rejects_negative_cn_power():
    ap = solve_family(LameParameters(1, 0), "B", EllipticModulus(0.5))
    with pytest.raises(SamplerError):
        wavefunction_sampler(gauge_spec(ap), [1.0, 0.5], ap.modulus)


@pytest.mark.parametrize("k2", K2_SET)
def test_counts_and_sorting(k2, cache):
    for m, l in small_grid():
        spec = cache.spectrum(m, l, k2)
        e = spec.energies
        assert np.all(np.diff(e) >= 0)
        if spec.params.case == 1:
            assert spec.total_count == 2 * m + 1
            assert all(s.degeneracy == 1 for s in spec.states)
        else:
            assert len(spec.states) == m + H


@pytest.mark.parametrize("k2", [0.1, 0.5, 0.9])
def test_trace_identity_and_eigen_residual(k2):
    mod = EllipticModulus(k2)
    for m, l in small_grid() + [(4, 2), (Fraction(7, 2), 1)]:
        for ap in all_families(LameParameters(m, l), mod):
            mat = build_gauged_hamiltonian(ap).matrix
            vals, vecs = eigenpairs(mat)
            assert abs(np.sum(vals) - np.trace(mat)) < 1e-10 * max(1, abs(np.trace(mat)))
            norm = np.linalg.norm(mat, 2)
            for lam, v in zip(vals, vecs.T):
                assert np.linalg.norm(mat @ v - lam * v) <= 1e-10 * norm * np.linalg.norm(v)


def test_eigenvalues_real(cache):
    for m, l in small_grid():
        for ap in all_families(LameParameters(m, l), EllipticModulus(0.5)):
            vals = np.linalg.eigvals(build_gauged_hamiltonian(ap).matrix)
            assert np.max(np.abs(vals.imag)) < 1e-9 * max(1, np.max(np.abs(vals)))


def test_coefficient_normalization(cache):
    for m, l in small_grid():
        for s in cache.spectrum(m, l, 0.5).states:
            c = s.poly_coeffs
            big = np.max(np.abs(c))
            assert big == pytest.approx(1.0, abs=1e-15)
            assert c[np.argmax(np.abs(c))] == 1


@settings(max_examples=25, deadline=None)
@given(re=st.floats(-5, 5), im=st.floats(-5, 5))
def test_scale_invariance(re, im):
    z = complex(re, im)
    if abs(z) < 1e-3:
        z = 1.0
    v = np.array([0.3, -1.2 + 0.5j, 0.7j, 0.1])
    assert np.allclose(normalize_coeffs(z * v), normalize_coeffs(v), atol=1e-14)


def test_scale_invariance_of_states():
    ap = solve_family(LameParameters(3 * H, 1), "C", EllipticModulus(0.5))
    mat = build_gauged_hamiltonian(ap).matrix
    vals, vecs = eigenpairs(mat)
    v = vecs[:, 0]
    w = (2.5 - 1.5j) * v
    assert np.array_equal(normalize_coeffs(v).round(13), normalize_coeffs(w).round(13))


@pytest.mark.parametrize("k2", K2_SET)
def test_degenerate_pairs_independent(k2, cache):
    for m, l in small_grid():
        spec = cache.spectrum(m, l, k2)
        for s in spec.states:
            if s.degeneracy == 2:
                f, g = (max_normalized(w, spec.modulus) for w in s.wave_samplers)
                assert abs(wronskian(f, g, spec.modulus.quarter_period / 2)) > 1e-8


@pytest.mark.parametrize("k2", K2_SET)
def test_coincident_flag_consistent(k2, cache):
    for m, l in small_grid():
        states = cache.spectrum(m, l, k2).states
        for s in states:
            near = any(o is not s and o.family != s.family and abs(o.energy - s.energy) < 1e-10
                       for o in states)
            assert ("coincident" in s.flags) == near


def _span_error(funcs, target, x):
    basis = np.vstack([np.asarray(f(x), dtype=float) for f in funcs]).T
    coef, *_ = np.linalg.lstsq(basis, target, rcond=None)
    return np.max(np.abs(basis @ coef - target)) / np.max(np.abs(target))


@pytest.mark.parametrize("k2", K2_SET)
@pytest.mark.parametrize("ml", CASE1 + CASE2, ids=str)
def test_fixture_agreement_up_to_scale(ml, k2, cache):
    m, l = ml
    spec = cache.spectrum(m, l, k2)
    mod = spec.modulus
    fx = fixture_for(spec.params)
    x = np.linspace(0, mod.period, 2001)
    x0 = mod.quarter_period / 3
    for lvl in fx.levels:
        e = lvl.energy(k2)
        states = [s for s in spec.states if abs(s.energy - e) < 1e-9 * max(1, abs(e))]
        assert states, f"no engine state at fixture energy {e}"
        samplers = [w for s in states for w in s.wave_samplers]
        for phi in lvl.functions:
            target = np.asarray(phi(x, mod), dtype=float)
            if len(samplers) == 1:
                psi = samplers[0]
                diff = psi(x) / psi(x0) - target / phi(x0, mod)
                assert np.max(np.abs(diff)) < 1e-8
            else:
                assert _span_error(samplers, target, x) < 1e-8
