"""Band-edge spectra of associated Lame potentials from finite sl(2) blocks."""

from .algebraize import (AlgebraizationParams, InadmissibleError, LameParameters,
                         admissible_families, lame_potential, parse_index, solve_family)
from .elliptic import EllipticDomainError, EllipticModulus, complete_elliptic_K, jacobi_sn_cn_dn
from .fixtures import Fixture, fixture_for
from .spectra import BandEdgeState, SpectrumResult, band_edge_spectrum
from .verify import band_scan, classify_spectrum, hill_discriminant, schrodinger_residual

__version__ = "0.1.0"

__all__ = [
    "AlgebraizationParams", "BandEdgeState", "EllipticDomainError", "EllipticModulus",
    "Fixture", "InadmissibleError", "LameParameters", "SpectrumResult", "admissible_families",
    "band_edge_spectrum", "band_scan", "classify_spectrum", "complete_elliptic_K",
    "fixture_for", "hill_discriminant", "jacobi_sn_cn_dn", "lame_potential", "parse_index",
    "schrodinger_residual", "solve_family",
]
