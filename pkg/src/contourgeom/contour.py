"""Tracing the singular set of a view map and its contour-line invariants.

The singular set {J = 0} is continued in the source plane by a
predictor-corrector scheme (tangent predictor perpendicular to grad J,
Newton corrector along grad J).  Contour points carry univariate
derivative jets of the image curve, obtained by series-inverting J into a
local parametrization of the set and pushing it through the view-map
jets; at the marked (seed) point of a patch-backed trace this is done in
adapted Monge coordinates, which reproduces the closed-form curve data
exactly for cubic heights.

Invariants extracted here: the signed curvature of the contour at regular
points (positive when the curve is convex toward minus the frame normal)
and the cuspidal curvature det(c2, c3)/|c2|^(5/2) at cusps, whose
magnitude equals sqrt(a) for the cycloid rolled by a radius-a circle.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import jets
from .errors import ContractError, HigherDegeneracyError

DEFAULT_CUSP_TOL = 1e-6  # |G'| below this times the trace diameter marks a cusp


def _jet_scale(g1, g2):
    return max(
        1.0, np.linalg.norm(g1.gradient()) ** 2 + np.linalg.norm(g2.gradient()) ** 2
    )


def _jacobian_scale(vm, q):
    return _jet_scale(*vm.g_jets(q))


def newton_polish(vm, q, tol=1e-12, max_iter=10):
    """Newton steps along grad J driving |J| below tol (scaled)."""
    q = np.asarray(q, dtype=float).copy()
    scale = _jacobian_scale(vm, q)
    for _ in range(max_iter):
        J = vm.jacobian_jet(q)
        if abs(J.value) <= tol * scale:
            return q, True
        g = J.gradient()
        gg = float(g @ g)
        if gg == 0.0:
            return q, False
        q = q - J.value * g / gg
    J = vm.jacobian_jet(q)
    return q, abs(J.value) <= tol * scale


def implicit_curve_jet(J, q):
    """Local univariate parametrization of {J = 0} through q.

    Returns (axis, w) where axis == 1 means the branch is (w(t), t) with
    t the second coordinate (requires J_x != 0), axis == 0 means
    (t, w(t)).  Solved order by order from the jet of J; the top
    coefficient inherits the jet's truncation caveat.
    """
    gx, gy = J.gradient()
    if gx == 0.0 and gy == 0.0:
        raise ContractError("implicit curve jet needs a nonzero gradient")
    axis = 1 if abs(gx) >= abs(gy) else 0
    lead = gx if axis == 1 else gy
    t0 = q[axis]
    w0 = q[1 - axis]
    coeffs = np.zeros(5)
    coeffs[0] = w0
    coeffs[1] = -(gy / gx) if axis == 1 else -(gx / gy)
    tvar = jets.Jet1.variable(t0)
    for k in (2, 3, 4):
        w = jets.Jet1(coeffs, t0)
        if axis == 1:
            r = jets.compose_curve(J, w, tvar)
        else:
            r = jets.compose_curve(J, tvar, w)
        coeffs[k] = -r.coeffs[k] / lead
    return axis, jets.Jet1(coeffs, t0)


def _axis_curve(axis, w):
    tvar = jets.Jet1.variable(w.base)
    return (w, tvar) if axis == 1 else (tvar, w)


@dataclass(frozen=True)
class SingularSetTrace:
    """Ordered samples of {J = 0} plus local jets at the marked point."""

    points: np.ndarray  # (n, 2) source-plane samples
    params: np.ndarray  # (n,) signed marching parameter, 0 at the mark
    jacobian_values: np.ndarray
    marked_index: int
    local_axis: int  # parameter coordinate of the marked local branch
    local_jet: jets.Jet1  # w-jet of the marked local branch
    local_route: str  # "monge" or "param": coordinates of the local jets
    psi: object  # Jet1 of psi for the (psi(y), y) Monge form, or None
    step: float
    truncated: bool = False
    diagnostic: str = ""

    def arclengths(self):
        d = np.diff(self.points, axis=0)
        return np.sqrt((d * d).sum(axis=1))


def trace_singular_set(vm, seed, arclength_budget, step=None, newton_tol=1e-12):
    """Predictor-corrector continuation of the singular set from a seed.

    Marches both directions until the arclength budget or the domain
    boundary; Newton divergence truncates the trace with a diagnostic,
    and a vanishing grad J stops with a degenerate-point flag.
    """
    if vm.patch is not None:
        domain = vm.patch.domain
        diam = vm.patch.diameter()
    else:
        domain = (-1.0, 1.0, -1.0, 1.0)
        diam = 2.0 * math.sqrt(2.0)
    if step is None:
        step = 1e-2 * diam

    def in_domain(q):
        return (domain[0] <= q[0] <= domain[1]) and (domain[2] <= q[1] <= domain[3])

    seed = np.asarray(seed, dtype=float)
    scale = _jacobian_scale(vm, seed)
    q0, _ = newton_polish(vm, seed, tol=newton_tol, max_iter=1)
    if abs(vm.jacobian_jet(q0).value) > 1e-6 * scale:
        raise ContractError("seed is not near the singular set")
    q0, ok = newton_polish(vm, q0, tol=newton_tol)
    if not ok:
        raise ContractError("seed does not converge onto the singular set")
    J0 = vm.jacobian_jet(q0)
    g0 = J0.gradient()
    if np.linalg.norm(g0) <= 1e-8 * max(1.0, np.linalg.norm(J0.hessian())):
        raise ContractError("grad J vanishes at the seed (degenerate point)")

    base_tangent = np.array([-g0[1], g0[0]])
    base_tangent = base_tangent / np.linalg.norm(base_tangent)

    truncated = False
    diagnostic = ""

    def march(sign):
        nonlocal truncated, diagnostic
        out = []
        q = q0.copy()
        prev = sign * base_tangent
        travelled = 0.0
        current = step
        halvings = 0
        while travelled < arclength_budget:
            J = vm.jacobian_jet(q)
            g = J.gradient()
            if np.linalg.norm(g) <= 1e-8 * max(1.0, np.linalg.norm(J.hessian())):
                truncated = True
                diagnostic = "grad J vanished along the path"
                break
            t = np.array([-g[1], g[0]])
            t = t / np.linalg.norm(t)
            if t @ prev < 0.0:
                t = -t
            q_new, ok = newton_polish(vm, q + current * t, tol=newton_tol)
            moved = float(np.linalg.norm(q_new - q))
            if not ok or moved > 2.0 * current or moved < 0.1 * current:
                if halvings < 2:
                    current *= 0.5
                    halvings += 1
                    continue
                truncated = True
                diagnostic = "Newton corrector diverged"
                break
            if not in_domain(q_new):
                break
            travelled += float(np.linalg.norm(q_new - q))
            out.append((sign * travelled, q_new, vm.jacobian_jet(q_new).value))
            prev = t
            q = q_new
        return out

    backward = march(-1.0)
    forward = march(+1.0)
    rows = list(reversed(backward)) + [(0.0, q0, J0.value)] + forward
    params = np.array([r[0] for r in rows])
    points = np.array([r[1] for r in rows])
    jvals = np.array([r[2] for r in rows])
    marked = len(backward)

    # local branch jets at the marked point; prefer adapted Monge
    # coordinates when the mark sits at the frame's base point
    route = "param"
    psi = None
    if vm.frame is not None and np.allclose(q0, vm.frame.p, atol=1e-9 * max(diam, 1.0)):
        route = "monge"
        axis, w = implicit_curve_jet(vm.monge_jacobian_jet(), (0.0, 0.0))
        if axis == 1:
            psi = w
    else:
        axis, w = implicit_curve_jet(vm.jacobian_jet(q0), q0)
    return SingularSetTrace(
        points=points,
        params=params,
        jacobian_values=jvals,
        marked_index=marked,
        local_axis=axis,
        local_jet=w,
        local_route=route,
        psi=psi,
        step=step,
        truncated=truncated,
        diagnostic=diagnostic,
    )


@dataclass(frozen=True)
class PlaneCurvePoint:
    """Contour sample with image position and curve derivative jets."""

    position: np.ndarray  # (2,) in image-plane coordinates
    jets: tuple  # pair of Jet1: both image components along the local branch
    regular: bool
    param: float
    source: tuple

    def deriv(self, n):
        return np.array([self.jets[0].derivative(n), self.jets[1].derivative(n)])

    @property
    def d1(self):
        return self.deriv(1)

    @property
    def d2(self):
        return self.deriv(2)

    @property
    def d3(self):
        return self.deriv(3)


def point_from_jets(G1, G2, param=0.0, source=(0.0, 0.0), regular_tol=1e-9):
    """PlaneCurvePoint straight from a pair of univariate jets."""
    d1 = math.hypot(G1.derivative(1), G2.derivative(1))
    d2 = math.hypot(G1.derivative(2), G2.derivative(2))
    return PlaneCurvePoint(
        position=np.array([G1.value, G2.value]),
        jets=(G1, G2),
        regular=d1 > regular_tol * max(1.0, d2),
        param=param,
        source=tuple(source),
    )


def _contour_jets_at(vm, q, marked_route=None, marked_trace=None):
    """Image-curve jets of the singular set through q."""
    if marked_route == "monge":
        h = vm.frame.monge_jet
        axis, w = marked_trace.local_axis, marked_trace.local_jet
        x_jet, y_jet = _axis_curve(axis, w)
        return x_jet, jets.compose_curve(h, x_jet, y_jet)
    J = vm.jacobian_jet(q)
    axis, w = implicit_curve_jet(J, q)
    x_jet, y_jet = _axis_curve(axis, w)
    g1, g2 = vm.g_jets(q)
    return (
        jets.compose_curve(g1, x_jet, y_jet),
        jets.compose_curve(g2, x_jet, y_jet),
    )


def contour_line(trace, vm, cusp_tol=DEFAULT_CUSP_TOL):
    """Image of the traced singular set with per-sample derivative jets."""
    positions = np.array([vm.g_value(q) for q in trace.points])
    if len(positions) > 1:
        lo = positions.min(axis=0)
        hi = positions.max(axis=0)
        diam = float(np.linalg.norm(hi - lo))
    else:
        diam = 0.0
    threshold = cusp_tol * max(diam, 1e-6)
    out = []
    for i, q in enumerate(trace.points):
        if i == trace.marked_index and trace.local_route == "monge":
            G1, G2 = _contour_jets_at(vm, q, "monge", trace)
        else:
            G1, G2 = _contour_jets_at(vm, q)
        speed = math.hypot(G1.derivative(1), G2.derivative(1))
        out.append(
            PlaneCurvePoint(
                position=positions[i],
                jets=(G1, G2),
                regular=speed > threshold,
                param=float(trace.params[i]),
                source=(float(q[0]), float(q[1])),
            )
        )
    return out


def contour_curvature(pt):
    """Signed curvature of the contour at a regular sample.

    Magnitude det(G', G'')/|G'|^3; the sign is positive when the curve is
    convex toward the negative normal axis of the image plane, i.e. when
    the curvature vector has positive second (e3) component.
    """
    if not pt.regular:
        raise ContractError(
            "contour point is singular (|G'| ~ 0); use cuspidal_curvature"
        )
    d1, d2 = pt.d1, pt.d2
    sp = float(d1 @ d1)
    k_vec = (d2 - (float(d2 @ d1) / sp) * d1) / sp
    mag = float(np.linalg.norm(k_vec))
    if mag == 0.0:
        return 0.0
    if abs(k_vec[1]) > 1e-12 * mag:
        return math.copysign(mag, k_vec[1])
    return math.copysign(mag, k_vec[0])


@dataclass(frozen=True)
class CuspData:
    """Location and cuspidal curvature of a contour cusp."""

    location: np.ndarray  # image-plane coordinates
    source: tuple  # source-plane point
    cuspidal_curvature: float
    d2: np.ndarray
    d3: np.ndarray


def cuspidal_curvature(pt, tol=1e-9):
    """Cuspidal curvature at a singular contour sample.

    det(G''(0), G'''(0)) / |G''(0)|^(5/2); requires a genuine cusp, i.e.
    a vanishing first derivative with nonvanishing second.
    """
    d1, d2, d3 = pt.d1, pt.d2, pt.d3
    scale = max(np.linalg.norm(d2), np.linalg.norm(d3), 1.0)
    if pt.regular and np.linalg.norm(d1) > tol * scale:
        raise ContractError("contour point is regular; use contour_curvature")
    n2 = float(np.linalg.norm(d2))
    if n2 <= tol * max(1.0, np.linalg.norm(d3)):
        raise HigherDegeneracyError(
            "G'' vanishes: degeneracy beyond a cusp; cuspidal curvature undefined"
        )
    mu = float(d2[0] * d3[1] - d2[1] * d3[0]) / n2**2.5
    return CuspData(
        location=pt.position.copy(),
        source=pt.source,
        cuspidal_curvature=mu,
        d2=d2,
        d3=d3,
    )


def _normalized_kernel_derivative(vm, q):
    J = vm.jacobian_jet(q)
    g = J.gradient()
    gn = float(np.linalg.norm(g))
    if gn == 0.0:
        return 0.0
    eta = vm.kernel_direction(q)
    return float(g @ eta) / (gn * float(np.linalg.norm(eta)))


def find_contour_cusps(trace, vm, zero_tol=1e-8, newton_tol=1e-12):
    """Cusps of the traced contour, located by bisecting the kernel
    derivative of J along the singular set.

    Returns a list of CuspData.  Samples where the contour is degenerate
    beyond a cusp (second derivative also vanishing) are skipped.
    """
    n = len(trace.points)
    if n < 2:
        return []
    vals = np.array([_normalized_kernel_derivative(vm, q) for q in trace.points])
    if np.abs(vals).max() <= zero_tol:
        return []  # kernel derivative vanishes identically: no isolated cusp
    cusps = []
    for i in range(n - 1):
        a, b = vals[i], vals[i + 1]
        if a == 0.0:
            bracket = (trace.points[i], trace.points[i])
        elif a * b < 0.0:
            bracket = (trace.points[i], trace.points[i + 1])
        else:
            continue
        qa, qb = np.asarray(bracket[0], float), np.asarray(bracket[1], float)
        fa = _normalized_kernel_derivative(vm, qa)
        for _ in range(80):
            if np.linalg.norm(qb - qa) < 1e-14:
                break
            qm, ok = newton_polish(vm, 0.5 * (qa + qb), tol=newton_tol)
            if not ok:
                break
            fm = _normalized_kernel_derivative(vm, qm)
            if fm == 0.0:
                qa = qb = qm
                break
            if fa * fm < 0.0:
                qb = qm
            else:
                qa, fa = qm, fm
        q_star, ok = newton_polish(vm, 0.5 * (qa + qb), tol=newton_tol)
        if not ok:
            continue
        if cusps and min(np.linalg.norm(q_star - c.source) for c in cusps) < 10 * trace.step:
            continue
        G1, G2 = _contour_jets_at(vm, q_star)
        pt = point_from_jets(G1, G2, source=q_star)
        try:
            cusps.append(cuspidal_curvature(pt))
        except (ContractError, HigherDegeneracyError):
            continue
    return cusps
