from fractions import Fraction

import pytest

from lamesl2 import EllipticModulus, LameParameters, band_edge_spectrum, fixture_for
from lamesl2.algebraize import half_integer_grid
from lamesl2.verify import schrodinger_residual, spectrum_residuals

H = Fraction(1, 2)
K2_SET = (0.1, 0.5, 0.9)
CASE1 = [(1, 0), (1, 1), (2, 0), (2, 1), (2, 2)]
CASE2 = [(H, 0), (H, H), (3 * H, 0), (3 * H, H), (3 * H, 1), (3 * H, 3 * H)]

# criterion number -> (passed, detail); filled by test_acceptance
ACCEPTANCE = {}


class _Cache:
    """Spectra and residuals shared across test modules (they are the slow part)."""

    def __init__(self):
        self._spec = {}
        self._res = {}
        self._fix = {}

    def spectrum(self, m, l, k2):
        key = (Fraction(m), Fraction(l), float(k2))
        if key not in self._spec:
            self._spec[key] = band_edge_spectrum(LameParameters(*key[:2]), EllipticModulus(key[2]))
        return self._spec[key]

    def residuals(self, m, l, k2):
        key = (Fraction(m), Fraction(l), float(k2))
        if key not in self._res:
            self._res[key] = spectrum_residuals(self.spectrum(m, l, k2))
        return self._res[key]

    def fixture_residuals(self, m, l, k2):
        """Per fixture function: (level r, energy, residual)."""
        key = (Fraction(m), Fraction(l), float(k2))
        if key not in self._fix:
            params = LameParameters(key[0], key[1])
            mod = EllipticModulus(key[2])
            out = []
            for lvl in fixture_for(params).levels:
                e = lvl.energy(mod.k2)
                for f in lvl.functions:
                    r = schrodinger_residual(lambda x, f=f: f(x, mod), e, params, mod)
                    out.append((lvl.r, e, r))
            self._fix[key] = out
        return self._fix[key]


_CACHE = _Cache()


@pytest.fixture(scope="session")
def cache():
    return _CACHE


def small_grid():
    """All admissible (m, l) with m <= 5/2."""
    return [(p.m, p.l) for p in half_integer_grid(Fraction(5, 2))]


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num}: {'PASS' if ok else 'FAIL'}  {detail}")
