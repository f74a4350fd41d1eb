"""Independent checks: Schrodinger residuals and the Hill discriminant.

The discriminant is the trace of the monodromy matrix over the potential's
period 2K; |Delta| = 2 marks a band edge (Delta = +2 periodic, -2
antiperiodic), |Delta| < 2 an allowed band.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .algebraize import LameParameters, lame_potential
from .elliptic import EllipticModulus

DEFAULT_TOL = 1e-11
BAND_EDGE_TOL = 1e-6

BAND_EDGE_PERIODIC = "band_edge_periodic"
BAND_EDGE_ANTIPERIODIC = "band_edge_antiperiodic"
IN_BAND_DEGENERATE = "in_band_degenerate"
INCONSISTENT = "inconsistent"


class IntegrationError(RuntimeError):
    pass


@dataclass(frozen=True)
class DiscriminantSample:
    energy: float
    delta: float
    det: float = 1.0
    steps: int = 0


def second_derivative(f, x: np.ndarray, h: float) -> np.ndarray:
    """Five-point central second difference with one Richardson level (h, 2h)."""

    def five_point(step):
        return (-f(x + 2 * step) + 16 * f(x + step) - 30 * f(x)
                + 16 * f(x - step) - f(x - 2 * step)) / (12 * step * step)

    return (16 * five_point(h) - five_point(2 * h)) / 15


def schrodinger_residual(sampler, energy: float, params: LameParameters,
                         modulus: EllipticModulus, grid_n: int = 2001) -> float:
    """max |-psi'' + V psi - E psi| / max |psi| on grid_n points over [0, 2K]."""
    if grid_n < 101:
        raise ValueError("grid_n must be at least 101")
    # long double keeps evaluation noise / h^2 well under the residual bounds
    period = np.longdouble(modulus.period)
    x = np.linspace(np.longdouble(0), period, grid_n)
    h = period / (50 * grid_n)
    # same scheme as second_derivative, with the 7 distinct shifts in one call
    shifts = np.array([0, 1, -1, 2, -2, 4, -4], dtype=x.dtype)
    vals = np.asarray(sampler((x[None, :] + shifts[:, None] * h).reshape(-1))).reshape(7, grid_n)
    psi, p1, m1, p2, m2, p4, m4 = vals
    d2h = (-p2 + 16 * p1 - 30 * psi + 16 * m1 - m2) / (12 * h * h)
    d22h = (-p4 + 16 * p2 - 30 * psi + 16 * m2 - m4) / (48 * h * h)
    d2 = (16 * d2h - d22h) / 15
    v = lame_potential(x, params, modulus)
    res = -d2 + (v - np.longdouble(energy)) * psi
    scale = np.max(np.abs(psi))
    if scale == 0:
        return float("inf")
    return float(np.max(np.abs(res)) / scale)


def _coeffs(params: LameParameters):
    m, l = float(params.m), float(params.l)
    return m * (m + 1), l * (l + 1)


def monodromy_matrix(energy: float, params: LameParameters, modulus: EllipticModulus,
                     tol: float = DEFAULT_TOL, free: bool = False):
    """2x2 fundamental matrix [[u1, u2], [u1', u2']] after one period 2K."""
    mm1, ll1 = (0.0, 0.0) if free else _coeffs(params)
    mat, steps, status = _kernels.monodromy(float(energy), modulus.k2, mm1, ll1,
                                            modulus.period, tol, tol)
    if status == 1:
        raise IntegrationError(f"step-size underflow at E={energy}")
    if status == 2:
        raise IntegrationError(f"step budget exhausted at E={energy}")
    return np.array([[mat[0, 0], mat[1, 0]], [mat[0, 1], mat[1, 1]]]), int(steps)


def hill_discriminant(energy: float, params: LameParameters, modulus: EllipticModulus,
                      tol: float = DEFAULT_TOL, free: bool = False) -> DiscriminantSample:
    if tol <= 0:
        raise ValueError("tol must be positive")
    mat, steps = monodromy_matrix(energy, params, modulus, tol, free)
    return DiscriminantSample(float(energy), float(np.trace(mat)),
                              float(np.linalg.det(mat)), steps)


def band_scan(energies, params: LameParameters, modulus: EllipticModulus,
              tol: float = DEFAULT_TOL, free: bool = False) -> list[DiscriminantSample]:
    """Discriminant over an energy grid; parallel over energies when numba is on."""
    e = np.ascontiguousarray(np.asarray(energies, dtype=float).reshape(-1))
    mm1, ll1 = (0.0, 0.0) if free else _coeffs(params)
    delta, det, status = _kernels.discriminant_scan(e, modulus.k2, mm1, ll1,
                                                    modulus.period, tol, tol)
    bad = np.nonzero(status)[0]
    if bad.size:
        raise IntegrationError(f"integration failed at E={e[bad[0]]}")
    return [DiscriminantSample(float(a), float(b), float(c)) for a, b, c in zip(e, delta, det)]


def classify_delta(delta: float, degeneracy: int, tol: float = BAND_EDGE_TOL) -> str:
    if abs(abs(delta) - 2.0) <= tol:
        return BAND_EDGE_PERIODIC if delta > 0 else BAND_EDGE_ANTIPERIODIC
    if abs(delta) < 2.0 - tol and degeneracy == 2:
        return IN_BAND_DEGENERATE
    return INCONSISTENT


def classify_spectrum(spec, tol: float = BAND_EDGE_TOL) -> list[str]:
    out = []
    for state in spec.states:
        sample = hill_discriminant(state.energy, spec.params, spec.modulus)
        out.append(classify_delta(sample.delta, state.degeneracy, tol))
    return out


def spectrum_residuals(spec, grid_n: int = 2001) -> list[float]:
    """Worst residual over each state's samplers."""
    return [max(schrodinger_residual(f, s.energy, spec.params, spec.modulus, grid_n)
                for f in s.wave_samplers) for s in spec.states]


def wronskian(f, g, x: float, h: float = 1e-4) -> float:
    """f g' - f' g by central differences, after scaling f and g to unit max on [0, 4K]."""
    fp = (f(x + h) - f(x - h)) / (2 * h)
    gp = (g(x + h) - g(x - h)) / (2 * h)
    return float(f(x) * gp - fp * g(x))


def max_normalized(f, modulus: EllipticModulus):
    grid = np.linspace(0.0, 2 * modulus.period, 801)
    scale = float(np.max(np.abs(f(grid))))
    return lambda x: np.asarray(f(x)) / scale
