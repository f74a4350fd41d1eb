"""Band-edge energies and wavefunctions from the finite sl(2) blocks.

For integer m the two real families A and B are diagonalized and merged. For
half-odd m only family C is diagonalized; D is its complex conjugate, so each
C eigenfunction psi yields the real solutions Re psi and Im psi. When these
are proportional the level carries a single state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .algebraize import (AlgebraizationParams, LameParameters, admissible_families,
                         solve_family)
from .elliptic import EllipticModulus, as_real_array, jacobi_sn_cn_dn_am
from .gauge import GaugeFactorSpec, gauge_spec, unwrapped_theta
from .sl2core import build_gauged_hamiltonian

CLUSTER_TOL = 1e-8
COINCIDENCE_TOL = 1e-10
IMAG_TOL = 1e-9


class SpectrumError(RuntimeError):
    pass


class SamplerError(ValueError):
    pass


@dataclass(frozen=True)
class BandEdgeState:
    energy: float
    degeneracy: int
    family: str
    poly_coeffs: np.ndarray
    label: int
    wave_samplers: tuple
    gauge: GaugeFactorSpec | None = None
    flags: tuple = ()


@dataclass(frozen=True)
class SpectrumResult:
    params: LameParameters
    modulus: EllipticModulus
    states: list
    total_count: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "total_count", sum(s.degeneracy for s in self.states))

    @property
    def energies(self) -> np.ndarray:
        return np.array([s.energy for s in self.states])

    def expanded_energies(self) -> np.ndarray:
        """Energies repeated by degeneracy."""
        return np.array([s.energy for s in self.states for _ in range(s.degeneracy)])


def eigenpairs(matrix: np.ndarray):
    """Eigenvalues/eigenvectors of a small dense matrix, polished by inverse iteration.

    LAPACK supplies the eigenvalues; each vector gets two inverse-iteration
    sweeps and is re-orthogonalized against earlier members of its cluster.
    """
    mat = np.asarray(matrix, dtype=complex)
    size = mat.shape[0]
    vals, vecs = np.linalg.eig(mat)
    order = np.argsort(vals.real, kind="stable")
    vals, vecs = vals[order], vecs[:, order]
    norm = max(np.linalg.norm(mat, 2), 1.0)
    ident = np.eye(size)
    out = np.empty_like(vecs)
    for i, lam in enumerate(vals):
        v = vecs[:, i] / np.linalg.norm(vecs[:, i])
        shift = lam + 1e-13 * norm
        for _ in range(2):
            try:
                w = np.linalg.solve(mat - shift * ident, v)
            except np.linalg.LinAlgError:
                break
            if not np.all(np.isfinite(w)):
                break
            v = w / np.linalg.norm(w)
        for j in range(i):
            if abs(vals[j] - lam) <= CLUSTER_TOL * max(1.0, abs(lam)):
                v = v - out[:, j] * np.vdot(out[:, j], v)
                v = v / np.linalg.norm(v)
        out[:, i] = v
    return vals, out


def normalize_coeffs(v: np.ndarray) -> np.ndarray:
    """Scale so the largest-magnitude coefficient is exactly 1."""
    v = np.asarray(v, dtype=complex)
    idx = int(np.argmax(np.abs(v)))
    out = v / v[idx]
    out[idx] = 1.0  # division can leave 1 - eps
    return out


def _parity(v: np.ndarray) -> int:
    even = np.linalg.norm(v[0::2])
    odd = np.linalg.norm(v[1::2])
    return 0 if even >= odd else 1


def wavefunction_sampler(spec: GaugeFactorSpec, poly_coeffs, modulus: EllipticModulus,
                         part: str | None = None, phase: complex = 1.0) -> Callable:
    """Pole-free evaluator of mu(xi(x)) * chi(xi(x)).

    The cn power of the gauge factor is distributed over the monomials:
    psi = dn^tau * sum_j c_j sn^j cn^(sigma - j) * exp(phase_coeff theta)
    * exp(arctan_coeff am), which is smooth on the whole real line as long as
    every cn exponent is a non-negative integer. ``part`` selects "real" or
    "imag" after multiplying by ``phase``; None returns the complex value.
    """
    coeffs = np.asarray(poly_coeffs, dtype=complex)
    n = coeffs.shape[0] - 1
    sigma = spec.sigma
    if abs(sigma.imag) > 1e-9 or abs(sigma.real - round(sigma.real)) > 1e-9:
        raise SamplerError(f"non-integer cn exponent {sigma}")
    sig = int(round(sigma.real))
    if sig - n < 0:
        raise SamplerError(f"negative cn exponent {sig - n} for degree {n}")
    tau, pc, ac = spec.tau, spec.phase_coeff, spec.arctan_coeff

    def psi(x):
        x = as_real_array(x)
        sn, cn, dn, am = (np.asarray(v) for v in jacobi_sn_cn_dn_am(x, modulus))
        poly = np.zeros(x.shape, dtype=np.result_type(x, np.complex128))
        for j, c in enumerate(coeffs):
            if c != 0:
                poly = poly + c * sn ** j * cn ** (sig - j)
        out = poly * np.exp(tau * np.log(dn))
        if pc != 0:
            out = out * np.exp(pc * unwrapped_theta(x, modulus, sn, cn))
        if ac != 0:
            out = out * np.exp(ac * am)
        out = out * phase
        if part == "real":
            out = out.real
        elif part == "imag":
            out = out.imag
        return out.item() if out.ndim == 0 else out

    return psi


def _realness_phase(psi: Callable, modulus: EllipticModulus) -> complex:
    """exp(-i phi) that makes psi as real as possible on a probe grid."""
    x = np.linspace(-2 * modulus.quarter_period, 2 * modulus.quarter_period, 257)
    vals = np.asarray(psi(x))
    s = np.sum(vals * vals)
    if abs(s) == 0:
        return 1.0
    return np.exp(-0.5j * np.angle(s))


def _pair_rank(re: Callable, im: Callable, modulus: EllipticModulus) -> int:
    x = np.linspace(-2 * modulus.quarter_period, 2 * modulus.quarter_period, 257)
    a = np.vstack([re(x), im(x)])
    sv = np.linalg.svd(a, compute_uv=False)
    if sv[0] == 0:
        return 0
    return 2 if sv[1] > 1e-8 * sv[0] else 1


def _real_energy(lam: complex, label: str) -> float:
    if abs(lam.imag) >= IMAG_TOL * max(1.0, abs(lam)):
        raise SpectrumError(f"{label}: eigenvalue {lam} is not real")
    return float(lam.real)


def _family_states(ap: AlgebraizationParams):
    ham = build_gauged_hamiltonian(ap)
    vals, vecs = eigenpairs(ham.matrix)
    spec = gauge_spec(ap)
    return ham, vals, vecs, spec


def band_edge_spectrum(params: LameParameters, modulus: EllipticModulus) -> SpectrumResult:
    families = admissible_families(params)
    if not families:
        raise SpectrumError(f"no admissible algebraization for {params}")
    raw = []  # (energy, family, parity, coeffs, samplers, spec, degeneracy)
    if params.case == 1:
        for fam in families:
            ap = solve_family(params, fam, modulus)
            _, vals, vecs, spec = _family_states(ap)
            for lam, v in zip(vals, vecs.T):
                energy = _real_energy(lam, f"family {fam}")
                coeffs = normalize_coeffs(v)
                if np.max(np.abs(coeffs.imag)) < 1e-12:
                    coeffs = coeffs.real.astype(complex)
                sampler = wavefunction_sampler(spec, coeffs, modulus, part="real")
                raw.append((energy, fam, _parity(coeffs), coeffs, (sampler,), spec, 1))
    else:
        ap_c = solve_family(params, "C", modulus)
        ap_d = solve_family(params, "D", modulus)
        _, vals, vecs, spec = _family_states(ap_c)
        vals_d = np.sort(np.linalg.eigvals(build_gauged_hamiltonian(ap_d).matrix).real)
        if np.max(np.abs(np.sort(vals.real) - vals_d)) > 1e-10 * max(1.0, np.max(np.abs(vals_d))):
            raise SpectrumError("families C and D disagree; conjugation symmetry broken")
        for lam, v in zip(vals, vecs.T):
            energy = _real_energy(lam, "family C")
            coeffs = normalize_coeffs(v)
            psi = wavefunction_sampler(spec, coeffs, modulus)
            re = wavefunction_sampler(spec, coeffs, modulus, part="real")
            im = wavefunction_sampler(spec, coeffs, modulus, part="imag")
            if _pair_rank(re, im, modulus) == 2:
                samplers, deg = (re, im), 2
            else:
                rot = _realness_phase(psi, modulus)
                samplers = (wavefunction_sampler(spec, coeffs, modulus, part="real", phase=rot),)
                deg = 1
            raw.append((energy, "CD", _parity(coeffs), coeffs, samplers, spec, deg))

    fam_rank = {"A": 0, "B": 1, "CD": 2}
    raw.sort(key=lambda r: (r[0], fam_rank[r[1]], r[2]))
    states = []
    for i, (energy, fam, _, coeffs, samplers, spec, deg) in enumerate(raw):
        flags = []
        for j, other in enumerate(raw):
            if j != i and other[1] != fam and abs(other[0] - energy) < COINCIDENCE_TOL:
                flags.append("coincident")
                break
        states.append(BandEdgeState(energy, deg, fam, coeffs, i, samplers, spec, tuple(flags)))
    return SpectrumResult(params, modulus, states)
