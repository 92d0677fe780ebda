"""Curves attached to an asymptotic direction and their invariants.

Three constructions live here, all anchored at a point p where the
Gaussian curvature is negative and v is asymptotic:

* the asymptotic curve, whose tangent stays asymptotic; its space
  curvature and torsion at p are beta and delta,
* the tangential section, the branch of the surface-cut-by-tangent-plane
  tangent to v; its plane curvature at p is alpha (measured in the
  tangent plane oriented so that (v, normal x v) is positive),
* the normal section by the plane spanned by the view vector and the
  normal; the third arclength derivative of its height is rho.

Closed forms come straight from the Monge height jet: with h_xy and
h_yyy the mixed and pure third partials at p, rho = h_yyy,
beta = |h_yyy / (2 h_xy)|, delta = -h_xy and alpha = h_yyy / (3 h_xy);
delta's sign depends on the frame conventions, so identity checks use
|delta|.
"""

from dataclasses import dataclass

import numpy as np

from . import jets
from .errors import ContractError, ParabolicPointError, PlanarPointError
from .surface import (
    TangentDirection,
    asymptotic_directions,
    fundamental_forms,
    monge_normal_form,
)

_ASYM_TOL = 1e-8


@dataclass(frozen=True)
class AsymptoticInvariants:
    """Scalar invariants of an asymptotic direction."""

    alpha: float  # horizontal curvature (tangent-plane section)
    beta: float  # asymptotic curvature, >= 0
    delta: float  # asymptotic torsion (sign is frame-dependent)
    rho: float  # vertical torsion (normal-plane section)


def _monge_thirds(frame, tol=_ASYM_TOL):
    h = frame.monge_jet
    hxy = h.partial(1, 1)
    hyy = h.partial(0, 2)
    hyyy = h.partial(0, 3)
    scale = max(1.0, np.abs(h.hessian()).max())
    if abs(hyy) > tol * scale:
        raise ContractError(
            f"frame direction is not asymptotic (h_yy = {hyy:.3e})"
        )
    if abs(hxy) <= tol * scale:
        raise ParabolicPointError(
            "h_xy vanishes: parabolic point, asymptotic invariants undefined"
        )
    return hxy, hyyy


def asymptotic_invariants_closed_form(frame):
    """All four invariants from the Monge height jet of an asymptotic frame."""
    hxy, hyyy = _monge_thirds(frame)
    return AsymptoticInvariants(
        alpha=hyyy / (3.0 * hxy),
        beta=abs(hyyy / (2.0 * hxy)),
        delta=-hxy,
        rho=hyyy,
    )


def space_curve_jets(frame):
    """Ambient univariate jets of the asymptotic curve through the frame point.

    Parametrized by the Monge y-coordinate: the curve is (x(y), y) with
    x'(0) = 0 and x''(0) = -h_yyy/(2 h_xy); the third x-coefficient needs
    fourth-order surface data and is carried as zero, which the curvature
    and torsion do not feel.
    """
    hxy, hyyy = _monge_thirds(frame)
    x2 = -hyyy / (2.0 * hxy)
    x_jet = jets.Jet1([0.0, 0.0, 0.5 * x2, 0.0, 0.0])
    y_jet = jets.Jet1.variable(0.0)
    z_jet = jets.compose_curve(frame.monge_jet, x_jet, y_jet)
    out = []
    for i in range(3):
        c = (
            x_jet.coeffs * frame.e1[i]
            + y_jet.coeffs * frame.e2[i]
            + z_jet.coeffs * frame.e3[i]
        )
        c[0] += frame.origin[i]
        out.append(jets.Jet1(c))
    return tuple(out)


def curve_curvature_torsion(curve_jets, tol=1e-12):
    """Space-curve curvature and torsion at the base parameter.

    curve_jets is a triple of univariate jets (the ambient components).
    Returns (beta, delta); delta is None at inflections (first and second
    derivatives parallel), where the torsion is undefined.
    """
    d1 = np.array([j.derivative(1) for j in curve_jets])
    d2 = np.array([j.derivative(2) for j in curve_jets])
    d3 = np.array([j.derivative(3) for j in curve_jets])
    speed = np.linalg.norm(d1)
    if speed == 0.0:
        raise ContractError("curve is singular at the base parameter")
    cross = np.cross(d1, d2)
    cn = float(np.linalg.norm(cross))
    beta = cn / speed**3
    if cn <= tol * max(1.0, speed * float(np.linalg.norm(d2))):
        return beta, None
    delta = float(cross @ d3) / cn**2
    return beta, delta


@dataclass(frozen=True)
class AsymptoticCurve:
    """Traced asymptotic curve with per-sample tangents and space jets."""

    points: np.ndarray  # (n, 2) parameter-plane samples
    tangents: np.ndarray  # (n, 2) unit asymptotic tangents used by the ODE
    params: np.ndarray  # (n,) signed arclength-ish ODE parameter
    ii_residuals: np.ndarray  # (n,) |II(tangent, tangent)| per sample
    space_jets: tuple  # per-sample triples of ambient univariate jets
    truncated: bool = False
    diagnostic: str = ""


def _asymptotic_branch(patch, q, prev, tol=1e-10):
    """Asymptotic unit tangent at q best aligned with prev (Euclidean)."""
    dirs = asymptotic_directions(patch, q, tol=tol)
    if len(dirs) < 2:
        return None, dirs
    best = None
    best_dot = -np.inf
    for d in dirs:
        w = d.vector / np.linalg.norm(d.vector)
        for cand in (w, -w):
            dot = float(cand @ prev)
            if dot > best_dot:
                best_dot = dot
                best = cand
    return best, dirs


def trace_asymptotic_curve(patch, start, budget, step=None, sample_every=1):
    """Integrate the asymptotic direction field from a starting direction.

    Classical fixed-step 4th-order integration; the branch at each stage
    is chosen by maximal inner product with the previous tangent.  Stops
    at the domain boundary or where the curvature stops being negative
    (fewer than two asymptotic directions), truncating with a diagnostic.
    """
    if step is None:
        step = 1e-3 * patch.diameter()
    p0 = np.asarray(start.basepoint, dtype=float)
    v0 = start.vector / np.linalg.norm(start.vector)

    def field(q, prev):
        if not patch.contains(q):
            return None
        try:
            w, _ = _asymptotic_branch(patch, q, prev)
        except PlanarPointError:
            return None
        return w

    rows = []
    truncated = False
    diagnostic = ""

    def record(q, prev, t_signed):
        try:
            w, dirs = _asymptotic_branch(patch, q, prev)
        except PlanarPointError:
            return None
        if w is None:
            return None
        # the I-normalised direction whose line matches the chosen tangent
        d = max(dirs, key=lambda c: float(c.vector @ w) ** 2)
        sign = 1.0 if float(d.vector @ w) >= 0 else -1.0
        direction = TangentDirection(tuple(q), tuple(sign * d.vector))
        frame = monge_normal_form(patch, direction)
        sj = space_curve_jets(frame)
        _, II = fundamental_forms(patch, q)
        res = abs(w @ II @ w)
        rows.append((t_signed, q.copy(), w.copy(), res, sj))
        return w

    def march(sign):
        nonlocal truncated, diagnostic
        q = p0.copy()
        prev = sign * v0
        t = 0.0
        n_steps = max(1, int(budget / step))
        for k in range(n_steps):
            k1 = field(q, prev)
            if k1 is None:
                truncated = True
                diagnostic = "left the negatively curved region or domain"
                return
            k2 = field(q + 0.5 * step * k1, k1)
            k3 = field(q + 0.5 * step * k2, k2) if k2 is not None else None
            k4 = field(q + step * k3, k3) if k3 is not None else None
            if k2 is None or k3 is None or k4 is None:
                truncated = True
                diagnostic = "left the negatively curved region or domain"
                return
            q_new = q + (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            if not patch.contains(q_new):
                return
            t += step
            prev = field(q_new, k4)
            if prev is None:
                truncated = True
                diagnostic = "left the negatively curved region or domain"
                return
            q = q_new
            if (k + 1) % sample_every == 0:
                if record(q, prev, sign * t) is None:
                    truncated = True
                    diagnostic = "left the negatively curved region or domain"
                    return

    # the start point itself
    record(p0, v0, 0.0)
    if not rows:
        raise ContractError("no asymptotic branch at the starting point")
    march(+1.0)
    march(-1.0)
    rows.sort(key=lambda r: r[0])
    return AsymptoticCurve(
        points=np.array([r[1] for r in rows]),
        tangents=np.array([r[2] for r in rows]),
        params=np.array([r[0] for r in rows]),
        ii_residuals=np.array([r[3] for r in rows]),
        space_jets=tuple(r[4] for r in rows),
        truncated=truncated,
        diagnostic=diagnostic,
    )


@dataclass(frozen=True)
class TangentialCurveGerm:
    """Branch of the tangent-plane section tangent to the frame direction."""

    xi: jets.Jet1  # x = xi(t) in Monge coordinates, t along the direction
    alpha: float  # plane curvature at the base point, oriented tangent plane
    orientation: np.ndarray  # (2, 3): the (e2, -e1) oriented basis
    samples: np.ndarray  # (m, 2) parameter-plane points on the branch
    truncated: bool = False
    diagnostic: str = ""


def trace_tangential_curve(frame, budget=0.2, step=None, newton_tol=1e-12):
    """Germ jets and traced samples of the tangent-plane section branch.

    The branch through p tangent to the direction satisfies x = xi(t)
    with xi'(0) = 0 and 3 xi''(0) = -h_yyy/h_xy in Monge coordinates.
    Numerical continuation runs Newton on the height coordinate at seeds
    supplied by the germ; failures degrade to a germ-only result.
    """
    hxy, hyyy = _monge_thirds(frame)
    h = frame.monge_jet
    coeffs = np.zeros(5)
    tvar = jets.Jet1.variable(0.0)
    for k in (2, 3):
        xi = jets.Jet1(coeffs)
        r = jets.compose_curve(h, xi, tvar)
        coeffs[k] = -r.coeffs[k + 1] / h.coeff(1, 1)
    xi = jets.Jet1(coeffs)
    alpha = -xi.derivative(2)  # curvature of (t, -xi(t)) in the oriented plane

    if step is None:
        step = 0.05 * budget
    samples = []
    truncated = False
    diagnostic = ""
    patch = frame.patch
    if patch is not None and budget > 0.0 and step > 0.0:

        def w3_jet(q):
            comps = patch.jets(q)
            c = sum(frame.e3[k] * comps[k].coeffs for k in range(3))
            c[0] -= frame.e3 @ frame.origin
            return jets.Jet2(c, (float(q[0]), float(q[1])))

        for t in np.concatenate(
            [np.arange(-budget, -0.5 * step, step), np.arange(step, budget, step)]
        ):
            xm, ym = xi.eval(t), t
            q = np.array(
                [frame.from_monge.x.eval(xm, ym), frame.from_monge.y.eval(xm, ym)]
            )
            ok = False
            for _ in range(20):
                w = w3_jet(q)
                g = w.gradient()
                gg = float(g @ g)
                if gg < 1e-24:
                    break
                q = q - w.value * g / gg
                if abs(w3_jet(q).value) <= newton_tol:
                    ok = True
                    break
            if ok and patch.contains(q):
                samples.append(q)
            else:
                truncated = True
                diagnostic = "branch continuation failed; germ jets only"
    return TangentialCurveGerm(
        xi=xi,
        alpha=alpha,
        orientation=np.stack([frame.e2, -frame.e1]),
        samples=np.array(samples) if samples else np.zeros((0, 2)),
        truncated=truncated,
        diagnostic=diagnostic,
    )


def normal_section(frame):
    """Univariate jet of the normal-plane section height z(y).

    In Monge coordinates the section is the x = 0 slice, so the jet reads
    straight off the height jet; its third derivative is the vertical
    torsion rho.
    """
    h = frame.monge_jet
    return jets.Jet1([0.0, 0.0, h.coeff(0, 2), h.coeff(0, 3), 0.0])


def vertical_torsion(frame):
    return normal_section(frame).derivative(3)
