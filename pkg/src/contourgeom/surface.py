"""Surface patches and their pointwise curvature theory.

A patch is three scalar fields (u, v) -> (f1, f2, f3) over a rectangle.
Everything here is computed from order-3 jets of the components: first
and second fundamental forms, principal/normal/Gaussian curvature, the
contour-radius formula for non-asymptotic directions, asymptotic
directions, and the reduction of the patch to Monge normal form in the
frame adapted to a chosen tangent direction.

Sign conventions: the unit normal is f_u x f_v normalised; signed
invariants are always reported together with the frame that produced
them.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh

from . import jets
from .errors import (
    ContractError,
    DegeneratePatchError,
    NotApplicableError,
    PlanarPointError,
)
from .fields import AffineReparamField, as_field

_IMMERSION_TOL = 1e-12


class SurfacePatch:
    """Parametric embedding of a plane rectangle into 3-space."""

    def __init__(self, components, domain=(-1.0, 1.0, -1.0, 1.0), name=None):
        if len(components) != 3:
            raise ContractError("a surface patch needs three component fields")
        self.components = tuple(as_field(c) for c in components)
        self.domain = tuple(float(b) for b in domain)
        self.name = name

    def point(self, p):
        u, v = p
        return np.array([c.value(u, v) for c in self.components])

    def jets(self, p):
        base = (float(p[0]), float(p[1]))
        return tuple(c.jet2(base) for c in self.components)

    def contains(self, p, margin=0.0):
        u0, u1, v0, v1 = self.domain
        return (u0 - margin <= p[0] <= u1 + margin) and (
            v0 - margin <= p[1] <= v1 + margin
        )

    def diameter(self):
        u0, u1, v0, v1 = self.domain
        return math.hypot(u1 - u0, v1 - v0)

    def __repr__(self):
        return f"SurfacePatch(name={self.name!r}, domain={self.domain})"


@dataclass(frozen=True)
class TangentDirection:
    """Nonzero direction (a, b) in the coordinate basis at a base point."""

    basepoint: tuple
    components: tuple
    angle_to_principal: float | None = None

    def __post_init__(self):
        a, b = self.components
        if a == 0.0 and b == 0.0:
            raise ContractError("tangent direction must be nonzero")

    @property
    def vector(self):
        return np.array(self.components, dtype=float)


@dataclass(frozen=True)
class CurvatureData:
    """Principal curvatures and directions plus derived scalars."""

    lambda1: float
    lambda2: float
    K: float
    H: float
    dir1: TangentDirection
    dir2: TangentDirection
    normal: np.ndarray
    umbilic: bool = False


@dataclass(frozen=True)
class AdaptedFrame:
    """Orthonormal frame at f(p) with e2 along df(v), e3 the unit normal.

    monge_jet is the order-3 jet at the origin of the height function h
    over the (e1, e2) tangent coordinates: h(0,0) = h_x = h_y = 0 by
    construction.  to_monge / from_monge are the parameter <-> tangent
    coordinate jet maps used to build it.
    """

    origin: np.ndarray
    e1: np.ndarray
    e2: np.ndarray
    e3: np.ndarray
    monge_jet: jets.Jet2
    patch: SurfacePatch = field(repr=False, default=None)
    p: tuple = None
    direction: TangentDirection = None
    to_monge: jets.JetMap2 = field(repr=False, default=None)
    from_monge: jets.JetMap2 = field(repr=False, default=None)

    def partials(self):
        """Raw height partials {(i, j): h_ij} up to order 3."""
        return {
            (i, j): self.monge_jet.partial(i, j)
            for (i, j) in jets.INDEX2
            if i + j >= 2
        }


class NormalField:
    """Unscaled normal (-h_x, -h_y, 1) of the Monge graph, jet-valued."""

    def __init__(self, frame):
        self.frame = frame

    def jet_components(self):
        h = self.frame.monge_jet
        one = jets.Jet2.constant(1.0, h.base)
        return (-h.deriv(0), -h.deriv(1), one)

    def value(self):
        nx, ny, nz = self.jet_components()
        return np.array([nx.value, ny.value, nz.value])


def _frame_vectors(patch, p):
    jx, jy, jz = patch.jets(p)
    fu = np.array([jx.partial(1, 0), jy.partial(1, 0), jz.partial(1, 0)])
    fv = np.array([jx.partial(0, 1), jy.partial(0, 1), jz.partial(0, 1)])
    n = np.cross(fu, fv)
    nn = np.linalg.norm(n)
    scale = np.linalg.norm(fu) * np.linalg.norm(fv)
    if nn <= _IMMERSION_TOL * max(scale, 1e-300):
        raise DegeneratePatchError(f"not an immersion at {tuple(p)}")
    return (jx, jy, jz), fu, fv, n / nn


def fundamental_forms(patch, p):
    """First and second fundamental forms at p, both 2x2 symmetric."""
    (jx, jy, jz), fu, fv, nu = _frame_vectors(patch, p)
    I = np.array([[fu @ fu, fu @ fv], [fu @ fv, fv @ fv]])
    second = {}
    for (i, j) in ((2, 0), (1, 1), (0, 2)):
        vec = np.array([jx.partial(i, j), jy.partial(i, j), jz.partial(i, j)])
        second[(i, j)] = vec @ nu
    II = np.array(
        [[second[(2, 0)], second[(1, 1)]], [second[(1, 1)], second[(0, 2)]]]
    )
    return I, II


def _fix_sign(vec):
    if vec[0] < 0.0 or (vec[0] == 0.0 and vec[1] < 0.0):
        return -vec
    return vec


def curvature_data(patch, p, umbilic_tol=1e-10):
    """Principal curvatures/directions from the shape operator at p."""
    I, II = fundamental_forms(patch, p)
    w, V = eigh(II, I)
    lam1, lam2 = float(w[1]), float(w[0])
    K = float(np.linalg.det(II) / np.linalg.det(I))
    H = 0.5 * (lam1 + lam2)
    _, _, _, nu = _frame_vectors(patch, p)
    scale = max(abs(lam1), abs(lam2), 1.0)
    umbilic = abs(lam1 - lam2) <= umbilic_tol * scale
    if umbilic:
        d1 = np.array([1.0, 0.0]) / math.sqrt(I[0, 0])
        w1 = I @ d1
        d2 = np.array([-w1[1], w1[0]])
        d2 = d2 / math.sqrt(d2 @ I @ d2)
    else:
        d1 = _fix_sign(V[:, 1])
        d2 = _fix_sign(V[:, 0])
    pt = (float(p[0]), float(p[1]))
    return CurvatureData(
        lambda1=lam1,
        lambda2=lam2,
        K=K,
        H=H,
        dir1=TangentDirection(pt, tuple(d1), 0.0),
        dir2=TangentDirection(pt, tuple(d2), 0.5 * math.pi),
        normal=nu,
        umbilic=umbilic,
    )


def angle_to_principal(patch, direction, data=None):
    """Angle in [0, pi) between a direction and the lambda1 principal one.

    Measured with the induced metric, so it equals the ambient angle
    between the image vectors.
    """
    if data is None:
        data = curvature_data(patch, direction.basepoint)
    I, _ = fundamental_forms(patch, direction.basepoint)
    v = direction.vector
    d1 = data.dir1.vector
    c = (v @ I @ d1) / math.sqrt((v @ I @ v) * (d1 @ I @ d1))
    theta = math.acos(min(1.0, max(-1.0, c)))
    return theta % math.pi


def normal_curvature(patch, direction):
    """Normal curvature II(v, v) / I(v, v) at the direction's base point."""
    I, II = fundamental_forms(patch, direction.basepoint)
    v = direction.vector
    den = v @ I @ v
    if den == 0.0:
        raise ContractError("zero direction")
    return float(v @ II @ v / den)


def asymptotic_directions(patch, p, tol=1e-10):
    """Solutions of II(v, v) = 0, unit length in the induced metric.

    Two directions when K < 0, one when K = 0 with II nonzero, none when
    K > 0.  A planar point (II = 0) raises PlanarPointError since every
    direction qualifies.  Directions are normalised with nonnegative
    second component (then nonnegative first) and sorted by descending
    second component.
    """
    I, II = fundamental_forms(patch, p)
    L, M, N = II[0, 0], II[0, 1], II[1, 1]
    scale = np.abs(II).max()
    if scale <= tol * max(1.0, np.abs(I).max()):
        raise PlanarPointError(f"second fundamental form vanishes at {tuple(p)}")
    disc = M * M - L * N
    if disc < -tol * scale * scale:
        return []
    # solve with the larger of L, N leading; swap coordinates if needed
    swapped = abs(L) < abs(N)
    lead, trail = (N, L) if swapped else (L, N)
    raw = []
    if abs(lead) <= tol * scale:
        # both squares negligible: 2M ab = 0 with M away from zero
        raw = [(1.0, 0.0), (0.0, 1.0)]
    elif disc <= tol * scale * scale:
        raw = [(-M / lead, 1.0)]
    else:
        r = math.sqrt(disc)
        raw = [((-M + r) / lead, 1.0), ((-M - r) / lead, 1.0)]
    if swapped:
        raw = [(b, a) for a, b in raw]
    pt = (float(p[0]), float(p[1]))
    out = []
    seen = []
    for a, b in raw:
        v = np.array([a, b])
        v = v / math.sqrt(v @ I @ v)
        if v[1] < 0.0 or (v[1] == 0.0 and v[0] < 0.0):
            v = -v
        if any(np.allclose(v, u, atol=1e-9) for u in seen):
            continue
        seen.append(v)
        out.append(TangentDirection(pt, (float(v[0]), float(v[1]))))
    out.sort(key=lambda d: (-d.components[1], -d.components[0]))
    return out


def mannheim_radius(patch, direction):
    """Curvature radius of the contour line seen along a tangent direction.

    |sin^2(theta)/lambda1 + cos^2(theta)/lambda2| with theta the angle to
    the lambda1 principal direction.  Not defined along asymptotic
    directions (normal curvature zero): those fall to the cusp
    invariants.
    """
    data = curvature_data(patch, direction.basepoint)
    kappa = normal_curvature(patch, direction)
    scale = max(abs(data.lambda1), abs(data.lambda2), 1e-300)
    if abs(kappa) <= 1e-10 * scale:
        raise NotApplicableError(
            "normal curvature vanishes (asymptotic direction): the contour "
            "has a singular point; use the cuspidal invariants instead"
        )
    if min(abs(data.lambda1), abs(data.lambda2)) <= 1e-12 * scale:
        raise ZeroDivisionError("a principal curvature vanishes")
    theta = angle_to_principal(patch, direction, data)
    s, c = math.sin(theta), math.cos(theta)
    return abs(s * s / data.lambda1 + c * c / data.lambda2)


def monge_normal_form(patch, direction):
    """Adapted frame and Monge height jet at the direction's base point.

    The frame is (origin = f(p), e3 = unit normal, e2 = df(v)/|df(v)|,
    e1 = e2 x e3); the height jet is produced by inverting the tangential
    coordinate jet map and composing with the normal coordinate.
    """
    p = direction.basepoint
    (jx, jy, jz), fu, fv, nu = _frame_vectors(patch, p)
    a, b = direction.components
    V = a * fu + b * fv
    vn = np.linalg.norm(V)
    if vn == 0.0:
        raise ContractError("direction has zero differential")
    e2 = V / vn
    e3 = nu
    e1 = np.cross(e2, e3)
    origin = patch.point(p)

    comps = (jx, jy, jz)

    def coordinate_jet(axis):
        c = sum(axis[k] * comps[k].coeffs for k in range(3))
        c[0] -= axis @ origin
        return jets.Jet2(c, comps[0].base)

    w1 = coordinate_jet(e1)
    w2 = coordinate_jet(e2)
    w3 = coordinate_jet(e3)
    to_monge = jets.JetMap2(w1, w2)
    from_monge = jets.invert(to_monge)
    monge = jets.compose(w3, from_monge)
    return AdaptedFrame(
        origin=origin,
        e1=e1,
        e2=e2,
        e3=e3,
        monge_jet=monge,
        patch=patch,
        p=(float(p[0]), float(p[1])),
        direction=direction,
        to_monge=to_monge,
        from_monge=from_monge,
    )


def transform_ambient(patch, matrix, shift=(0.0, 0.0, 0.0)):
    """Patch whose image is matrix @ f + shift (rigid motion, scaling...)."""
    matrix = np.asarray(matrix, dtype=float)
    shift = np.asarray(shift, dtype=float)
    comps = []
    for i in range(3):
        expr = as_field(float(shift[i]))
        for k in range(3):
            if matrix[i, k] != 0.0:
                expr = expr + float(matrix[i, k]) * patch.components[k]
        comps.append(expr)
    return SurfacePatch(comps, patch.domain, name=patch.name)


def reparametrize(patch, matrix, shift=(0.0, 0.0), domain=None):
    """Patch precomposed with the affine source map q -> matrix q + shift."""
    comps = [AffineReparamField(c, matrix, shift) for c in patch.components]
    if domain is None:
        u0, u1, v0, v1 = patch.domain
        center = np.linalg.solve(
            np.asarray(matrix, float),
            np.array([0.5 * (u0 + u1), 0.5 * (v0 + v1)]) - np.asarray(shift, float),
        )
        half = 0.5 * min(u1 - u0, v1 - v0) / (np.linalg.norm(matrix, 2) * math.sqrt(2))
        domain = (center[0] - half, center[0] + half, center[1] - half, center[1] + half)
    return SurfacePatch(comps, domain, name=patch.name)
