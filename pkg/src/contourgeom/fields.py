"""Scalar-field descriptions over the parameter plane.

A field is either a polynomial in (x, y) or a composition tree of smooth
primitives (+, *, integer powers, real powers, sin, cos, exp) over
polynomials.  Every field knows how to evaluate itself pointwise and how
to produce its order-3 jet at any base point; polynomial jets are exact
Taylor shifts, primitive nodes compose their truncated series with the
child jet, so all jets are exact to rounding within the truncation order.

Fields are immutable expression trees; operators build new nodes.
"""

import math

import numpy as np

from .errors import DomainEvalError
from .jets import Jet2, JetMap2, compose
from .jets import _core as _kernels


class Field:
    """Base class; subclasses implement value() and jet2()."""

    def value(self, x, y):
        raise NotImplementedError

    def jet2(self, base):
        """Order-3 jet of the field at the given base point."""
        raise NotImplementedError

    def __add__(self, other):
        return SumField(self, as_field(other))

    def __radd__(self, other):
        return SumField(as_field(other), self)

    def __sub__(self, other):
        return self + (-as_field(other))

    def __rsub__(self, other):
        return as_field(other) + (-self)

    def __neg__(self):
        return ScaledField(-1.0, self)

    def __mul__(self, other):
        if isinstance(other, Field):
            return ProductField(self, other)
        return ScaledField(float(other), self)

    def __rmul__(self, other):
        return ScaledField(float(other), self)

    def __pow__(self, exponent):
        if isinstance(exponent, int) and exponent >= 0:
            if exponent == 0:
                return PolyField({(0, 0): 1.0})
            out = self
            for _ in range(exponent - 1):
                out = out * self
            return out
        return PowerField(self, float(exponent))


def as_field(obj):
    if isinstance(obj, Field):
        return obj
    return PolyField({(0, 0): float(obj)})


class PolyField(Field):
    """Polynomial with monomial coefficients {(i, j): c}; any degree."""

    def __init__(self, coeffs):
        clean = {}
        for (i, j), c in coeffs.items():
            if c != 0.0:
                clean[(int(i), int(j))] = clean.get((int(i), int(j)), 0.0) + float(c)
        self.coeffs = clean
        self._mi = np.array([m[0] for m in clean], dtype=np.int64)
        self._mj = np.array([m[1] for m in clean], dtype=np.int64)
        self._mc = np.array(list(clean.values()), dtype=float)

    def value(self, x, y):
        if self._mc.size == 0:
            return 0.0
        return float(np.sum(self._mc * x**self._mi * y**self._mj))

    def jet2(self, base):
        return Jet2(
            _kernels.poly_shift2(self._mi, self._mj, self._mc, base[0], base[1]),
            base,
        )

    def degree(self):
        if not self.coeffs:
            return 0
        return max(i + j for i, j in self.coeffs)

    def __add__(self, other):
        if isinstance(other, PolyField):
            merged = dict(self.coeffs)
            for m, c in other.coeffs.items():
                merged[m] = merged.get(m, 0.0) + c
            return PolyField(merged)
        if not isinstance(other, Field):
            merged = dict(self.coeffs)
            merged[(0, 0)] = merged.get((0, 0), 0.0) + float(other)
            return PolyField(merged)
        return super().__add__(other)

    __radd__ = __add__

    def __neg__(self):
        return PolyField({m: -c for m, c in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, PolyField):
            out = {}
            for (i1, j1), c1 in self.coeffs.items():
                for (i2, j2), c2 in other.coeffs.items():
                    m = (i1 + i2, j1 + j2)
                    out[m] = out.get(m, 0.0) + c1 * c2
            return PolyField(out)
        if not isinstance(other, Field):
            return PolyField({m: c * float(other) for m, c in self.coeffs.items()})
        return super().__mul__(other)

    __rmul__ = __mul__

    def __repr__(self):
        return f"PolyField({self.coeffs})"


def x_var():
    return PolyField({(1, 0): 1.0})


def y_var():
    return PolyField({(0, 1): 1.0})


def constant(c):
    return PolyField({(0, 0): float(c)})


class SumField(Field):
    def __init__(self, a, b):
        self.a = a
        self.b = b

    def value(self, x, y):
        return self.a.value(x, y) + self.b.value(x, y)

    def jet2(self, base):
        return self.a.jet2(base) + self.b.jet2(base)


class ScaledField(Field):
    def __init__(self, scale, child):
        self.scale = float(scale)
        self.child = child

    def value(self, x, y):
        return self.scale * self.child.value(x, y)

    def jet2(self, base):
        return self.scale * self.child.jet2(base)


class ProductField(Field):
    def __init__(self, a, b):
        self.a = a
        self.b = b

    def value(self, x, y):
        return self.a.value(x, y) * self.b.value(x, y)

    def jet2(self, base):
        return self.a.jet2(base) * self.b.jet2(base)


class SinField(Field):
    def __init__(self, child):
        self.child = as_field(child)

    def value(self, x, y):
        return math.sin(self.child.value(x, y))

    def jet2(self, base):
        g = self.child.jet2(base)
        s, c = math.sin(g.value), math.cos(g.value)
        return g.apply_series([s, c, -s / 2.0, -c / 6.0])


class CosField(Field):
    def __init__(self, child):
        self.child = as_field(child)

    def value(self, x, y):
        return math.cos(self.child.value(x, y))

    def jet2(self, base):
        g = self.child.jet2(base)
        s, c = math.sin(g.value), math.cos(g.value)
        return g.apply_series([c, -s, -c / 2.0, s / 6.0])


class ExpField(Field):
    def __init__(self, child):
        self.child = as_field(child)

    def value(self, x, y):
        return math.exp(self.child.value(x, y))

    def jet2(self, base):
        g = self.child.jet2(base)
        e = math.exp(g.value)
        return g.apply_series([e, e, e / 2.0, e / 6.0])


class PowerField(Field):
    """Real power of a field; smooth only where the base value allows it."""

    def __init__(self, child, exponent):
        self.child = as_field(child)
        self.exponent = float(exponent)

    def _check(self, g0):
        e = self.exponent
        if e == int(e):
            if e >= 0:
                return
            if g0 == 0.0:
                raise DomainEvalError(f"power {e} undefined at base value 0")
        elif g0 <= 0.0:
            raise DomainEvalError(f"power {e} is not smooth at base value {g0:.6g}")

    def value(self, x, y):
        g0 = self.child.value(x, y)
        self._check(g0)
        return g0**self.exponent

    def jet2(self, base):
        g = self.child.jet2(base)
        g0 = g.value
        self._check(g0)
        e = self.exponent
        series = [
            g0**e,
            e * g0 ** (e - 1),
            e * (e - 1) / 2.0 * g0 ** (e - 2),
            e * (e - 1) * (e - 2) / 6.0 * g0 ** (e - 3),
        ]
        return g.apply_series(series)


def sqrt_field(child):
    return PowerField(child, 0.5)


class AffineReparamField(Field):
    """Field precomposed with an affine map of the plane: f(A p + shift)."""

    def __init__(self, child, matrix, shift=(0.0, 0.0)):
        self.child = child
        self.matrix = np.asarray(matrix, dtype=float).reshape(2, 2)
        self.shift = np.asarray(shift, dtype=float).reshape(2)

    def _inner(self, x, y):
        return self.matrix @ np.array([x, y]) + self.shift

    def value(self, x, y):
        w = self._inner(x, y)
        return self.child.value(w[0], w[1])

    def jet2(self, base):
        w = self._inner(base[0], base[1])
        cx = np.zeros(10)
        cx[0], cx[1], cx[2] = w[0], self.matrix[0, 0], self.matrix[0, 1]
        cy = np.zeros(10)
        cy[0], cy[1], cy[2] = w[1], self.matrix[1, 0], self.matrix[1, 1]
        inner = JetMap2(Jet2(cx, base), Jet2(cy, base))
        return compose(self.child.jet2((w[0], w[1])), inner)
