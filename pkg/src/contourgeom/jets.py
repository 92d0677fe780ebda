"""Truncated Taylor-polynomial arithmetic.

Bivariate jets (:class:`Jet2`) carry derivatives up to total order 3 at a
base point in the parameter plane; univariate jets (:class:`Jet1`) carry
derivatives up to order 4.  Coefficients are stored in divided form (the
coefficient of the monomial, i.e. the raw partial divided by i!*j!), which
keeps composition free of factorial growth; :meth:`Jet2.partial` converts
back to raw derivatives.

Arithmetic is exact, up to floating-point rounding, on polynomials within
the truncation order.  Jet coefficient arrays are frozen after
construction and every operation returns a new jet, so the module is safe
to use from concurrent workers.

The element-level kernels live in a compiled extension when available and
fall back to the pure-Python twin otherwise; set ``CONTOURGEOM_PURE_PYTHON=1``
to force the fallback.
"""

import math
import os

import numpy as np

from .errors import ContractError, SingularMapError

if os.environ.get("CONTOURGEOM_PURE_PYTHON"):
    from . import _jetcore_py as _core
else:
    try:
        from . import _jetcore as _core
    except ImportError:
        from . import _jetcore_py as _core

MONOMIALS2 = tuple(_core.MONOMIALS2)
INDEX2 = dict(_core.INDEX2)

_BASE_ATOL = 1e-9


def backend_name():
    """Name of the kernel backend in use: "compiled" or "python"."""
    return _core.BACKEND


class Jet2:
    """Order-3 truncated Taylor expansion of a scalar field of two variables."""

    __slots__ = ("coeffs", "base")

    def __init__(self, coeffs, base=(0.0, 0.0)):
        c = np.asarray(coeffs, dtype=float)
        if c.shape != (10,):
            raise ContractError(f"Jet2 needs 10 coefficients, got shape {c.shape}")
        c = c.copy()
        c.setflags(write=False)
        self.coeffs = c
        self.base = (float(base[0]), float(base[1]))

    @classmethod
    def constant(cls, value, base=(0.0, 0.0)):
        c = np.zeros(10)
        c[0] = value
        return cls(c, base)

    @classmethod
    def variable(cls, which, base=(0.0, 0.0)):
        """Jet of the coordinate function x (which=0) or y (which=1) at base."""
        c = np.zeros(10)
        c[0] = base[which]
        c[1 + which] = 1.0
        return cls(c, base)

    @classmethod
    def from_partials(cls, partials, base=(0.0, 0.0)):
        """Build from a {(i, j): raw partial derivative} mapping."""
        c = np.zeros(10)
        for (i, j), value in partials.items():
            c[INDEX2[(i, j)]] = value / (math.factorial(i) * math.factorial(j))
        return cls(c, base)

    @property
    def value(self):
        return float(self.coeffs[0])

    def coeff(self, i, j):
        """Divided coefficient of (x-bx)^i (y-by)^j."""
        return float(self.coeffs[INDEX2[(i, j)]])

    def partial(self, i, j):
        """Raw partial derivative of order (i, j) at the base point."""
        return self.coeff(i, j) * math.factorial(i) * math.factorial(j)

    def gradient(self):
        return np.array([self.coeffs[1], self.coeffs[2]])

    def hessian(self):
        c = self.coeffs
        return np.array([[2.0 * c[3], c[4]], [c[4], 2.0 * c[5]]])

    def deriv(self, which):
        """Jet of the partial derivative d/dx (which=0) or d/dy (which=1).

        The order-3 slots of the result lie outside the captured data and
        are set to zero; they are exact only when the underlying field is
        a polynomial of total degree <= 3.
        """
        out = np.zeros(10)
        for k, (i, j) in enumerate(MONOMIALS2):
            if which == 0 and i > 0:
                out[INDEX2[(i - 1, j)]] = i * self.coeffs[k]
            elif which == 1 and j > 0:
                out[INDEX2[(i, j - 1)]] = j * self.coeffs[k]
        return Jet2(out, self.base)

    def truncated(self, order):
        """Zero all coefficients above the given total order."""
        out = self.coeffs.copy()
        for k, (i, j) in enumerate(MONOMIALS2):
            if i + j > order:
                out[k] = 0.0
        return Jet2(out, self.base)

    def directional(self, direction):
        """Directional derivative jet: direction . grad(self)."""
        a, b = direction
        return Jet2(a * self.deriv(0).coeffs + b * self.deriv(1).coeffs, self.base)

    def eval(self, x, y):
        """Evaluate the truncated polynomial at an absolute point."""
        dx = x - self.base[0]
        dy = y - self.base[1]
        total = 0.0
        for k, (i, j) in enumerate(MONOMIALS2):
            total += self.coeffs[k] * dx**i * dy**j
        return total

    def _check_mate(self, other):
        if (
            abs(self.base[0] - other.base[0]) > _BASE_ATOL
            or abs(self.base[1] - other.base[1]) > _BASE_ATOL
        ):
            raise ContractError(f"jet base mismatch: {self.base} vs {other.base}")

    def __add__(self, other):
        if isinstance(other, Jet2):
            self._check_mate(other)
            return Jet2(self.coeffs + other.coeffs, self.base)
        c = self.coeffs.copy()
        c[0] += other
        return Jet2(c, self.base)

    __radd__ = __add__

    def __neg__(self):
        return Jet2(-self.coeffs, self.base)

    def __sub__(self, other):
        return self + (-other if isinstance(other, Jet2) else -float(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Jet2):
            self._check_mate(other)
            return Jet2(_core.jet2_mul(self.coeffs, other.coeffs), self.base)
        return Jet2(self.coeffs * float(other), self.base)

    __rmul__ = __mul__

    def apply_series(self, series):
        """Compose a univariate analytic series c0..c3 (about self.value) with self."""
        ghat = self.coeffs.copy()
        ghat[0] = 0.0
        return Jet2(
            _core.jet2_apply_series(np.asarray(series, dtype=float), ghat), self.base
        )

    def __repr__(self):
        terms = ", ".join(
            f"x^{i}y^{j}:{self.coeffs[k]:.6g}"
            for k, (i, j) in enumerate(MONOMIALS2)
            if self.coeffs[k] != 0.0
        )
        return f"Jet2(base={self.base}, {terms or '0'})"


class Jet1:
    """Order-4 truncated Taylor expansion of a scalar function of one variable."""

    __slots__ = ("coeffs", "base")

    def __init__(self, coeffs, base=0.0):
        c = np.asarray(coeffs, dtype=float)
        if c.shape != (5,):
            raise ContractError(f"Jet1 needs 5 coefficients, got shape {c.shape}")
        c = c.copy()
        c.setflags(write=False)
        self.coeffs = c
        self.base = float(base)

    @classmethod
    def constant(cls, value, base=0.0):
        return cls([value, 0.0, 0.0, 0.0, 0.0], base)

    @classmethod
    def variable(cls, base=0.0):
        return cls([base, 1.0, 0.0, 0.0, 0.0], base)

    @classmethod
    def from_derivatives(cls, derivs, base=0.0):
        """Build from raw derivatives [f, f', f'', f''', f''''] at base."""
        return cls([d / math.factorial(n) for n, d in enumerate(derivs)], base)

    @property
    def value(self):
        return float(self.coeffs[0])

    def derivative(self, n):
        """Raw n-th derivative at the base point."""
        return float(self.coeffs[n]) * math.factorial(n)

    def eval(self, t):
        return float(np.polyval(self.coeffs[::-1], t - self.base))

    def _check_mate(self, other):
        if abs(self.base - other.base) > _BASE_ATOL:
            raise ContractError(f"jet base mismatch: {self.base} vs {other.base}")

    def __add__(self, other):
        if isinstance(other, Jet1):
            self._check_mate(other)
            return Jet1(self.coeffs + other.coeffs, self.base)
        c = self.coeffs.copy()
        c[0] += other
        return Jet1(c, self.base)

    __radd__ = __add__

    def __neg__(self):
        return Jet1(-self.coeffs, self.base)

    def __sub__(self, other):
        return self + (-other if isinstance(other, Jet1) else -float(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Jet1):
            self._check_mate(other)
            return Jet1(_core.jet1_mul(self.coeffs, other.coeffs), self.base)
        return Jet1(self.coeffs * float(other), self.base)

    __rmul__ = __mul__

    def apply_series(self, series):
        """Compose a univariate analytic series c0..c4 (about self.value) with self."""
        ghat = self.coeffs.copy()
        ghat[0] = 0.0
        return Jet1(
            _core.jet1_apply_series(np.asarray(series, dtype=float), ghat), self.base
        )

    def __repr__(self):
        terms = ", ".join(
            f"t^{n}:{c:.6g}" for n, c in enumerate(self.coeffs) if c != 0.0
        )
        return f"Jet1(base={self.base}, {terms or '0'})"


class JetMap2:
    """A pair of Jet2 components over a shared base: a planar map germ."""

    __slots__ = ("x", "y")

    def __init__(self, x, y):
        x._check_mate(y)
        self.x = x
        self.y = y

    @property
    def base(self):
        return self.x.base

    @property
    def value(self):
        return (self.x.value, self.y.value)

    @property
    def linear_part(self):
        return np.array([self.x.gradient(), self.y.gradient()])

    @classmethod
    def identity(cls, base=(0.0, 0.0)):
        return cls(Jet2.variable(0, base), Jet2.variable(1, base))

    def __repr__(self):
        return f"JetMap2({self.x!r}, {self.y!r})"


def compose(outer, inner):
    """Chain rule at jet level: the order-3 truncation of outer o inner.

    inner's value (order-0 part) must equal outer's base point.
    """
    if not isinstance(inner, JetMap2):
        raise ContractError(f"cannot compose Jet2 with {type(inner).__name__}")
    vx, vy = inner.value
    if (
        abs(vx - outer.base[0]) > _BASE_ATOL
        or abs(vy - outer.base[1]) > _BASE_ATOL
    ):
        raise ContractError(
            f"composition base mismatch: inner value {inner.value} vs outer "
            f"base {outer.base}"
        )
    dp = inner.x.coeffs.copy()
    dq = inner.y.coeffs.copy()
    dp[0] = 0.0
    dq[0] = 0.0
    return Jet2(_core.jet2_compose(outer.coeffs, dp, dq), inner.base)


def compose_map(outer, inner):
    """Compose two planar jet maps: outer o inner."""
    return JetMap2(compose(outer.x, inner), compose(outer.y, inner))


def compose_curve(field, x_jet, y_jet):
    """Restrict a Jet2 to a univariate curve t -> (x(t), y(t)).

    The curve's value at its base parameter must equal the field's base
    point.  The t^4 coefficient of the result is carried but is exact
    only when the field's own truncation error vanishes.
    """
    x_jet._check_mate(y_jet)
    if (
        abs(x_jet.value - field.base[0]) > _BASE_ATOL
        or abs(y_jet.value - field.base[1]) > _BASE_ATOL
    ):
        raise ContractError(
            f"curve value {(x_jet.value, y_jet.value)} does not match field "
            f"base {field.base}"
        )
    dx = x_jet.coeffs.copy()
    dy = y_jet.coeffs.copy()
    dx[0] = 0.0
    dy[0] = 0.0
    return Jet1(_core.jet2_curve_compose(field.coeffs, dx, dy), x_jet.base)


def invert(jet_map, cond_limit=1e12):
    """Inverse of a planar jet map germ through order 3.

    The map must send its base point to the origin.  The linear part is
    inverted directly; orders 2 and 3 are recovered by two rounds of
    successive substitution g <- Linv(id - nonlinear(g)).
    """
    if abs(jet_map.value[0]) > _BASE_ATOL or abs(jet_map.value[1]) > _BASE_ATOL:
        raise ContractError("invert expects a map sending its base to the origin")
    lin = jet_map.linear_part
    det = lin[0, 0] * lin[1, 1] - lin[0, 1] * lin[1, 0]
    norm = np.abs(lin).max()
    if det == 0.0 or norm * norm / abs(det) > cond_limit:
        raise SingularMapError(f"linear part is singular (det={det:.3e})")
    inv = np.array([[lin[1, 1], -lin[0, 1]], [-lin[1, 0], lin[0, 0]]]) / det

    base = jet_map.base
    target = (0.0, 0.0)

    def linear_jet(row, value):
        c = np.zeros(10)
        c[0] = value
        c[1], c[2] = row
        return Jet2(c, target)

    # Nonlinear (order >= 2) part of the forward map as a function of the
    # deviation from the source base; candidate inverses land there.
    nl_x = jet_map.x.coeffs.copy()
    nl_y = jet_map.y.coeffs.copy()
    nl_x[:3] = 0.0
    nl_y[:3] = 0.0
    nonlin = JetMap2(Jet2(nl_x, base), Jet2(nl_y, base))

    g = JetMap2(linear_jet(inv[0], base[0]), linear_jet(inv[1], base[1]))
    ident = JetMap2.identity(target)
    for _ in range(2):
        r = compose_map(nonlin, g)
        gx = inv[0, 0] * (ident.x - r.x) + inv[0, 1] * (ident.y - r.y) + base[0]
        gy = inv[1, 0] * (ident.x - r.x) + inv[1, 1] * (ident.y - r.y) + base[1]
        g = JetMap2(gx, gy)
    return g
