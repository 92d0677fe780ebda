# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for truncated-Taylor jet arithmetic.

Same contract as ``_jetcore_py``: length-10 bivariate jets over monomials
(0,0),(1,0),(0,1),(2,0),(1,1),(0,2),(3,0),(2,1),(1,2),(0,3) and length-5
univariate jets over t^0..t^4.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND = "compiled"

MONOMIALS2 = (
    (0, 0), (1, 0), (0, 1),
    (2, 0), (1, 1), (0, 2),
    (3, 0), (2, 1), (1, 2), (0, 3),
)
INDEX2 = {m: k for k, m in enumerate(MONOMIALS2)}


cdef inline void _mul2(const double* a, const double* b, double* o) noexcept nogil:
    o[0] = a[0] * b[0]
    o[1] = a[0] * b[1] + a[1] * b[0]
    o[2] = a[0] * b[2] + a[2] * b[0]
    o[3] = a[0] * b[3] + a[1] * b[1] + a[3] * b[0]
    o[4] = a[0] * b[4] + a[1] * b[2] + a[2] * b[1] + a[4] * b[0]
    o[5] = a[0] * b[5] + a[2] * b[2] + a[5] * b[0]
    o[6] = a[0] * b[6] + a[1] * b[3] + a[3] * b[1] + a[6] * b[0]
    o[7] = (a[0] * b[7] + a[1] * b[4] + a[2] * b[3]
            + a[3] * b[2] + a[4] * b[1] + a[7] * b[0])
    o[8] = (a[0] * b[8] + a[1] * b[5] + a[2] * b[4]
            + a[4] * b[2] + a[5] * b[1] + a[8] * b[0])
    o[9] = a[0] * b[9] + a[2] * b[5] + a[5] * b[2] + a[9] * b[0]


cdef inline void _mul1(const double* a, const double* b, double* o) noexcept nogil:
    cdef int k, i
    for k in range(5):
        o[k] = 0.0
        for i in range(k + 1):
            o[k] += a[i] * b[k - i]


def jet2_mul(const double[::1] a, const double[::1] b):
    out = np.empty(10)
    cdef double[::1] o = out
    _mul2(&a[0], &b[0], &o[0])
    return out


def jet2_compose(const double[::1] outer, const double[::1] dp, const double[::1] dq):
    cdef double p2[10]
    cdef double q2[10]
    cdef double tmp[10]
    cdef int k
    out = np.empty(10)
    cdef double[::1] o = out
    _mul2(&dp[0], &dp[0], p2)
    _mul2(&dq[0], &dq[0], q2)
    for k in range(10):
        o[k] = outer[1] * dp[k] + outer[2] * dq[k]
        o[k] += outer[3] * p2[k] + outer[5] * q2[k]
    o[0] += outer[0]
    _mul2(&dp[0], &dq[0], tmp)
    for k in range(10):
        o[k] += outer[4] * tmp[k]
    _mul2(p2, &dp[0], tmp)
    for k in range(10):
        o[k] += outer[6] * tmp[k]
    _mul2(p2, &dq[0], tmp)
    for k in range(10):
        o[k] += outer[7] * tmp[k]
    _mul2(&dp[0], q2, tmp)
    for k in range(10):
        o[k] += outer[8] * tmp[k]
    _mul2(q2, &dq[0], tmp)
    for k in range(10):
        o[k] += outer[9] * tmp[k]
    return out


def jet2_apply_series(const double[::1] series, const double[::1] ghat):
    cdef double g2[10]
    cdef double g3[10]
    cdef int k
    out = np.empty(10)
    cdef double[::1] o = out
    _mul2(&ghat[0], &ghat[0], g2)
    _mul2(g2, &ghat[0], g3)
    for k in range(10):
        o[k] = series[1] * ghat[k] + series[2] * g2[k] + series[3] * g3[k]
    o[0] += series[0]
    return out


def jet1_mul(const double[::1] a, const double[::1] b):
    out = np.empty(5)
    cdef double[::1] o = out
    _mul1(&a[0], &b[0], &o[0])
    return out


def jet1_apply_series(const double[::1] series, const double[::1] ghat):
    cdef double power[5]
    cdef double tmp[5]
    cdef int k, n
    out = np.zeros(5)
    cdef double[::1] o = out
    o[0] = series[0]
    for k in range(5):
        power[k] = ghat[k]
    for n in range(1, 5):
        for k in range(5):
            o[k] += series[n] * power[k]
        if n < 4:
            _mul1(power, &ghat[0], tmp)
            for k in range(5):
                power[k] = tmp[k]
    return out


def jet2_curve_compose(const double[::1] h, const double[::1] dx, const double[::1] dy):
    cdef double px[4][5]
    cdef double py[4][5]
    cdef double term[5]
    cdef int k, i, j, m
    out = np.zeros(5)
    cdef double[::1] o = out
    for k in range(5):
        px[1][k] = dx[k]
        py[1][k] = dy[k]
    _mul1(px[1], px[1], px[2])
    _mul1(px[2], px[1], px[3])
    _mul1(py[1], py[1], py[2])
    _mul1(py[2], py[1], py[3])
    o[0] = h[0]
    for m in range(1, 10):
        if h[m] == 0.0:
            continue
        i = MONOMIALS2[m][0]
        j = MONOMIALS2[m][1]
        if i == 0:
            for k in range(5):
                o[k] += h[m] * py[j][k]
        elif j == 0:
            for k in range(5):
                o[k] += h[m] * px[i][k]
        else:
            _mul1(px[i], py[j], term)
            for k in range(5):
                o[k] += h[m] * term[k]
    return out


cdef inline double _binom(int n, int k) noexcept nogil:
    cdef double r = 1.0
    cdef int t
    if k > n - k:
        k = n - k
    for t in range(k):
        r = r * (n - t) / (t + 1)
    return r


def poly_shift2(const long[::1] mi, const long[::1] mj, const double[::1] mc,
                double bx, double by):
    cdef int n = mi.shape[0]
    cdef int t, i, j, a, b, amax, bmax
    cdef double c, ca
    out = np.zeros(10)
    cdef double[::1] o = out
    # index of monomial (a, b): rows of increasing total order
    cdef int idx[4][4]
    idx[0][0] = 0; idx[1][0] = 1; idx[0][1] = 2
    idx[2][0] = 3; idx[1][1] = 4; idx[0][2] = 5
    idx[3][0] = 6; idx[2][1] = 7; idx[1][2] = 8; idx[0][3] = 9
    for t in range(n):
        i = mi[t]
        j = mj[t]
        c = mc[t]
        amax = i if i < 3 else 3
        for a in range(amax + 1):
            ca = c * _binom(i, a) * bx ** (i - a)
            bmax = j if j < 3 - a else 3 - a
            for b in range(bmax + 1):
                o[idx[a][b]] += ca * _binom(j, b) * by ** (j - b)
    return out
