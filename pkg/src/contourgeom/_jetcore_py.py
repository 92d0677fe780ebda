"""Pure-Python fallback for the truncated-Taylor kernel operations.

Mirrors the compiled ``_jetcore`` extension function-for-function.  Kept
deliberately loop-based and table-driven so it is easy to audit; the
compiled backend must agree with this one bit-for-bit on polynomial data.

Bivariate jets are length-10 float arrays over monomials of total degree
<= 3, ordered (0,0),(1,0),(0,1),(2,0),(1,1),(0,2),(3,0),(2,1),(1,2),(0,3).
Univariate jets are length-5 arrays over powers t^0..t^4.
"""

import math

import numpy as np

BACKEND = "python"

MONOMIALS2 = (
    (0, 0), (1, 0), (0, 1),
    (2, 0), (1, 1), (0, 2),
    (3, 0), (2, 1), (1, 2), (0, 3),
)
INDEX2 = {m: k for k, m in enumerate(MONOMIALS2)}

# (out, left, right) triples with mono[left] + mono[right] = mono[out]
_MUL2_TABLE = tuple(
    (INDEX2[(ia + ib, ja + jb)], a, b)
    for a, (ia, ja) in enumerate(MONOMIALS2)
    for b, (ib, jb) in enumerate(MONOMIALS2)
    if ia + ib + ja + jb <= 3
)


def jet2_mul(a, b):
    out = np.zeros(10)
    for k, i, j in _MUL2_TABLE:
        out[k] += a[i] * b[j]
    return out


def jet2_compose(outer, dp, dq):
    """Substitute nilpotent jets dp, dq (zero constant term) into outer."""
    p2 = jet2_mul(dp, dp)
    q2 = jet2_mul(dq, dq)
    out = np.zeros(10)
    out[0] = outer[0]
    out += outer[1] * dp + outer[2] * dq
    out += outer[3] * p2 + outer[4] * jet2_mul(dp, dq) + outer[5] * q2
    out += outer[6] * jet2_mul(p2, dp) + outer[7] * jet2_mul(p2, dq)
    out += outer[8] * jet2_mul(dp, q2) + outer[9] * jet2_mul(q2, dq)
    return out


def jet2_apply_series(series, ghat):
    """Univariate analytic series c0..c3 evaluated on a nilpotent jet."""
    g2 = jet2_mul(ghat, ghat)
    out = series[0] * _one2() + series[1] * ghat
    out += series[2] * g2 + series[3] * jet2_mul(g2, ghat)
    return out


def _one2():
    out = np.zeros(10)
    out[0] = 1.0
    return out


def jet1_mul(a, b):
    out = np.zeros(5)
    for k in range(5):
        for i in range(k + 1):
            out[k] += a[i] * b[k - i]
    return out


def jet1_apply_series(series, ghat):
    """Univariate series c0..c4 evaluated on a nilpotent univariate jet."""
    out = np.zeros(5)
    out[0] = series[0]
    power = ghat.copy()
    for n in range(1, 5):
        out += series[n] * power
        if n < 4:
            power = jet1_mul(power, ghat)
    return out


def jet2_curve_compose(h, dx, dy):
    """Restrict a bivariate jet to a curve: t -> h(x(t), y(t)).

    dx, dy are the nilpotent univariate jets of the curve components
    relative to the bivariate base point.  The t^4 slot of the result is
    meaningful only when the bivariate truncation error vanishes.
    """
    out = np.zeros(5)
    powx = [None, dx, jet1_mul(dx, dx)]
    powx.append(jet1_mul(powx[2], dx))
    powy = [None, dy, jet1_mul(dy, dy)]
    powy.append(jet1_mul(powy[2], dy))
    for k, (i, j) in enumerate(MONOMIALS2):
        c = h[k]
        if c == 0.0:
            continue
        if i == 0 and j == 0:
            out[0] += c
            continue
        term = powx[i] if i else powy[j]
        if i and j:
            term = jet1_mul(powx[i], powy[j])
        out += c * term
    return out


def poly_shift2(mi, mj, mc, bx, by):
    """Order-3 jet of a bivariate polynomial at (bx, by).

    mi, mj, mc are parallel arrays of monomial exponents and coefficients.
    """
    out = np.zeros(10)
    for i, j, c in zip(mi, mj, mc):
        i = int(i)
        j = int(j)
        for a in range(min(i, 3) + 1):
            ca = c * math.comb(i, a) * bx ** (i - a)
            for b in range(min(j, 3 - a) + 1):
                out[INDEX2[(a, b)]] += ca * math.comb(j, b) * by ** (j - b)
    return out
