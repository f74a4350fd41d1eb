"""Hot loops: Landen/AGM Jacobi evaluation and the Dormand-Prince monodromy integrator.

Everything here is written in the numba-compatible subset. With numba off the
same functions run as plain Python; ``elliptic`` then uses the vectorized numpy
Landen path instead of the scalar loop below.
"""

import math

import numpy as np

from ._accel import njit, prange

MAX_LEVELS = 40
_EPS = 2.220446049250313e-16


@njit
def agm_table(k2):
    """Descending AGM sequence for modulus k (a_0=1, b_0=k', c_0=k).

    Returns ``(a, c, n_last)``; entries past ``n_last`` are unused.
    """
    a = np.zeros(MAX_LEVELS)
    c = np.zeros(MAX_LEVELS)
    a[0] = 1.0
    b = math.sqrt(1.0 - k2)
    c[0] = math.sqrt(k2)
    n = 0
    while n < MAX_LEVELS - 1 and c[n] > _EPS * a[n]:
        a[n + 1] = 0.5 * (a[n] + b)
        c[n + 1] = 0.5 * (a[n] - b)
        b = math.sqrt(a[n] * b)
        n += 1
    return a, c, n


@njit
def quarter_period(k2):
    a, c, n = agm_table(k2)
    return 0.5 * math.pi / a[n]


@njit
def landen_point(x, k2, a, c, n, quarter):
    """(sn, cn, dn, am) at one point from a precomputed AGM table."""
    period = 4.0 * quarter
    j = math.floor(x / period + 0.5)
    xr = x - j * period
    phi = (2.0 ** n) * a[n] * xr
    for i in range(n, 0, -1):
        phi = 0.5 * (phi + math.asin(c[i] / a[i] * math.sin(phi)))
    sn = math.sin(phi)
    cn = math.cos(phi)
    # k'^2 + k^2 cn^2 avoids the cancellation in 1 - k^2 sn^2
    dn = math.sqrt((1.0 - k2) + k2 * cn * cn)
    return sn, cn, dn, phi + 2.0 * math.pi * j


@njit(parallel=True)
def sncndn_array(x, k2):
    a, c, n = agm_table(k2)
    quarter = 0.5 * math.pi / a[n]
    size = x.shape[0]
    sn = np.empty(size)
    cn = np.empty(size)
    dn = np.empty(size)
    am = np.empty(size)
    for i in prange(size):
        sn[i], cn[i], dn[i], am[i] = landen_point(x[i], k2, a, c, n, quarter)
    return sn, cn, dn, am


@njit
def lame_potential_array(x, k2, mm1, ll1):
    """m(m+1) k^2 sn^2 + l(l+1) k^2 cn^2/dn^2 on an array; mm1=m(m+1), ll1=l(l+1)."""
    sn, cn, dn, am = sncndn_array(x, k2)
    out = np.empty(x.shape[0])
    for i in range(x.shape[0]):
        out[i] = k2 * (mm1 * sn[i] * sn[i] + ll1 * cn[i] * cn[i] / (dn[i] * dn[i]))
    return out


# Dormand-Prince 5(4) tableau
_C2, _C3, _C4, _C5 = 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0
_A21 = 1.0 / 5.0
_A31, _A32 = 3.0 / 40.0, 9.0 / 40.0
_A41, _A42, _A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
_A51, _A52, _A53, _A54 = 19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0
_A61, _A62, _A63, _A64, _A65 = (
    9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0)
_B1, _B3, _B4, _B5, _B6 = 35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0
_E1, _E3, _E4, _E5, _E6, _E7 = (
    71.0 / 57600.0, -71.0 / 16695.0, 71.0 / 1920.0, -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0)


@njit
def _hill_rhs(x, y, out, energy, k2, mm1, ll1, a, c, n, quarter):
    sn, cn, dn, am = landen_point(x, k2, a, c, n, quarter)
    q = k2 * (mm1 * sn * sn + ll1 * cn * cn / (dn * dn)) - energy
    out[0] = y[1]
    out[1] = q * y[0]
    out[2] = y[3]
    out[3] = q * y[2]


@njit
def monodromy(energy, k2, mm1, ll1, length, rtol, atol):
    """Integrate u'' = (V - E) u over [0, length] for (u,u')=(1,0) and (0,1).

    Returns ``(M, nsteps, status)`` with M[0]=(u1,u1'), M[1]=(u2,u2') at the
    end point; status 0 on success, 1 on step-size underflow, 2 on step budget.
    """
    a, c, n = agm_table(k2)
    quarter = 0.5 * math.pi / a[n]
    y = np.array([1.0, 0.0, 0.0, 1.0])
    k1 = np.empty(4)
    k2v = np.empty(4)
    k3 = np.empty(4)
    k4 = np.empty(4)
    k5 = np.empty(4)
    k6 = np.empty(4)
    k7 = np.empty(4)
    tmp = np.empty(4)
    ynew = np.empty(4)

    x = 0.0
    freq = math.sqrt(abs(energy) + abs(k2 * (mm1 + ll1 / (1.0 - k2))) + 1.0)
    h = min(0.05 / freq, length)
    _hill_rhs(x, y, k1, energy, k2, mm1, ll1, a, c, n, quarter)
    nsteps = 0
    status = 0
    hmin = 1e-14 * length
    while x < length:
        if nsteps > 2000000:
            status = 2
            break
        last = False
        if x + h >= length:
            h = length - x
            last = True
        for i in range(4):
            tmp[i] = y[i] + h * _A21 * k1[i]
        _hill_rhs(x + _C2 * h, tmp, k2v, energy, k2, mm1, ll1, a, c, n, quarter)
        for i in range(4):
            tmp[i] = y[i] + h * (_A31 * k1[i] + _A32 * k2v[i])
        _hill_rhs(x + _C3 * h, tmp, k3, energy, k2, mm1, ll1, a, c, n, quarter)
        for i in range(4):
            tmp[i] = y[i] + h * (_A41 * k1[i] + _A42 * k2v[i] + _A43 * k3[i])
        _hill_rhs(x + _C4 * h, tmp, k4, energy, k2, mm1, ll1, a, c, n, quarter)
        for i in range(4):
            tmp[i] = y[i] + h * (_A51 * k1[i] + _A52 * k2v[i] + _A53 * k3[i] + _A54 * k4[i])
        _hill_rhs(x + _C5 * h, tmp, k5, energy, k2, mm1, ll1, a, c, n, quarter)
        for i in range(4):
            tmp[i] = y[i] + h * (_A61 * k1[i] + _A62 * k2v[i] + _A63 * k3[i]
                                 + _A64 * k4[i] + _A65 * k5[i])
        _hill_rhs(x + h, tmp, k6, energy, k2, mm1, ll1, a, c, n, quarter)
        for i in range(4):
            ynew[i] = y[i] + h * (_B1 * k1[i] + _B3 * k3[i] + _B4 * k4[i]
                                  + _B5 * k5[i] + _B6 * k6[i])
        _hill_rhs(x + h, ynew, k7, energy, k2, mm1, ll1, a, c, n, quarter)

        err = 0.0
        for i in range(4):
            e = h * (_E1 * k1[i] + _E3 * k3[i] + _E4 * k4[i] + _E5 * k5[i]
                     + _E6 * k6[i] + _E7 * k7[i])
            scale = atol + rtol * max(abs(y[i]), abs(ynew[i]))
            err += (e / scale) ** 2
        err = math.sqrt(err / 4.0)

        if err <= 1.0:
            x = length if last else x + h
            for i in range(4):
                y[i] = ynew[i]
                k1[i] = k7[i]
            nsteps += 1
            fac = 5.0 if err == 0.0 else min(5.0, 0.9 * err ** -0.2)
            h = h * fac
        else:
            h = h * max(0.2, 0.9 * err ** -0.2)
            if h < hmin:
                status = 1
                break

    m = np.empty((2, 2))
    m[0, 0] = y[0]
    m[0, 1] = y[1]
    m[1, 0] = y[2]
    m[1, 1] = y[3]
    return m, nsteps, status


@njit(parallel=True)
def discriminant_scan(energies, k2, mm1, ll1, length, rtol, atol):
    size = energies.shape[0]
    delta = np.empty(size)
    det = np.empty(size)
    status = np.zeros(size, dtype=np.int64)
    for i in prange(size):
        m, nsteps, st = monodromy(energies[i], k2, mm1, ll1, length, rtol, atol)
        delta[i] = m[0, 0] + m[1, 1]
        det[i] = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        status[i] = st
    return delta, det, status
