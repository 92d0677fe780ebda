"""Orthogonal projection along a tangent direction and its singularities.

Given a tangent direction v at p, the three mutually orthogonal planes
through f(p) are the tangent plane (e1, e2), the normal plane containing
the view vector (e2, e3), and the image plane perpendicular to the view
vector (e1, e3).  The view map g sends parameters to image-plane
coordinates of the projected surface; its Jacobian determinant J is
jet-evaluable anywhere, which is what the fold / Whitney-cusp classifier
and the contour tracer consume.

Classification follows the kernel-direction derivative tests: at a
singular point with grad J != 0, a nonzero first derivative of J along
the kernel of dg means a fold; a vanishing first but nonzero second
derivative means a Whitney cusp.  Zero / nonzero decisions use two
thresholds (see classify_singularity) so numerically ambiguous points
surface as their own tag instead of being mislabelled.
"""

from dataclasses import dataclass

import numpy as np

from . import jets
from .errors import ContractError
from .fields import as_field
from .surface import fundamental_forms, monge_normal_form

TOL_SING = 1e-8  # |value| below this (scaled) counts as zero
TOL_NONZERO = 1e-6  # |value| above this (scaled) counts as nonzero


@dataclass(frozen=True)
class Plane:
    origin: np.ndarray
    basis: tuple  # pair of orthonormal 3-vectors


@dataclass(frozen=True)
class ProjectionSetup:
    """The adapted frame plus the three planes and the view direction."""

    frame: object
    view_direction: np.ndarray
    plane_T: Plane
    plane_N: Plane
    plane_Pi: Plane


def build_projection(patch, direction):
    """Planes and view vector for the projection along df(direction)."""
    frame = monge_normal_form(patch, direction)
    o = frame.origin
    return ProjectionSetup(
        frame=frame,
        view_direction=frame.e2,
        plane_T=Plane(o, (frame.e1, frame.e2)),
        plane_N=Plane(o, (frame.e2, frame.e3)),
        plane_Pi=Plane(o, (frame.e1, frame.e3)),
    )


class ViewMap:
    """Planar map with jet-evaluable components and Jacobian.

    Either backed by a projection of a surface patch (components are the
    image-plane coordinates of the projected embedding) or synthetic,
    built directly from two scalar fields (used for the model germs).
    """

    def __init__(self, frame=None, patch=None, fields=None):
        if fields is not None:
            self.frame = None
            self.patch = None
            self._fields = tuple(as_field(f) for f in fields)
        else:
            if frame is None or patch is None:
                raise ContractError("ViewMap needs a frame+patch or two fields")
            self.frame = frame
            self.patch = patch
            self._fields = None

    @classmethod
    def from_fields(cls, gx, gy):
        return cls(fields=(gx, gy))

    def g_jets(self, q):
        """Order-3 jets of both components at the source point q."""
        base = (float(q[0]), float(q[1]))
        if self._fields is not None:
            return tuple(f.jet2(base) for f in self._fields)
        comps = self.patch.jets(base)
        out = []
        for axis in (self.frame.e1, self.frame.e3):
            c = sum(axis[k] * comps[k].coeffs for k in range(3))
            c[0] -= axis @ self.frame.origin
            out.append(jets.Jet2(c, base))
        return tuple(out)

    def g_value(self, q):
        if self._fields is not None:
            return np.array([f.value(q[0], q[1]) for f in self._fields])
        p = self.patch.point(q) - self.frame.origin
        return np.array([self.frame.e1 @ p, self.frame.e3 @ p])

    def jacobian_jet(self, q):
        """Jet of det(dg) at q; exact through order 2."""
        g1, g2 = self.g_jets(q)
        J = g1.deriv(0) * g2.deriv(1) - g1.deriv(1) * g2.deriv(0)
        return J.truncated(2)

    def monge_jacobian_jet(self):
        """Jacobian jet in adapted Monge coordinates: the height y-derivative.

        Exact including order 3 whenever the height function is a
        polynomial of degree <= 3, which the classifier's cubic witnesses
        rely on.
        """
        if self.frame is None:
            raise ContractError("synthetic view maps carry no adapted frame")
        return self.frame.monge_jet.deriv(1)

    def metric(self, q):
        if self.patch is None:
            return np.eye(2)
        I, _ = fundamental_forms(self.patch, q)
        return I

    def kernel_direction(self, q, g1=None, g2=None):
        """Unit vector spanning ker(dg) at a singular point q.

        Normalised in the induced metric for patch-backed maps (Euclidean
        for synthetic ones), with nonnegative second component, then
        nonnegative first.
        """
        if g1 is None or g2 is None:
            g1, g2 = self.g_jets(q)
        rows = np.array([g1.gradient(), g2.gradient()])
        lead = rows[np.argmax(np.linalg.norm(rows, axis=1))]
        eta = np.array([-lead[1], lead[0]])
        I = self.metric(q)
        nrm = np.sqrt(eta @ I @ eta)
        if nrm == 0.0:
            raise ContractError(f"dg vanishes at {tuple(q)}")
        eta = eta / nrm
        if eta[1] < 0.0 or (eta[1] == 0.0 and eta[0] < 0.0):
            eta = -eta
        return eta


def view_map(setup, patch=None):
    """View map of a projection setup over its patch."""
    return ViewMap(frame=setup.frame, patch=patch or setup.frame.patch)


@dataclass(frozen=True)
class SingularityClass:
    """Classifier verdict plus the tested quantities that produced it."""

    tag: str  # regular | fold | whitney_cusp | degenerate | nondegenerate_unclassified
    witness: dict


def classify_singularity(vm, q, tol_sing=TOL_SING, tol_nonzero=TOL_NONZERO):
    """Classify the view map at q: regular, fold, Whitney cusp, or worse.

    Zero tests compare |J| against tol_sing and the kernel derivatives
    against tol_sing times their natural scales; nonzero tests use
    tol_nonzero.  Values landing between the two report
    ``nondegenerate_unclassified`` rather than guessing.
    """
    g1, g2 = vm.g_jets(q)
    J = vm.jacobian_jet(q)
    dg_scale = max(
        1.0, np.linalg.norm(g1.gradient()) ** 2 + np.linalg.norm(g2.gradient()) ** 2
    )
    j0 = J.value
    witness = {"J": j0}
    if abs(j0) > tol_sing * dg_scale:
        return SingularityClass("regular", witness)

    grad = J.gradient()
    hess = J.hessian()
    grad_norm = float(np.linalg.norm(grad))
    hess_norm = float(np.linalg.norm(hess))
    witness["grad_J"] = grad
    if grad_norm <= tol_sing * max(1.0, hess_norm):
        return SingularityClass("degenerate", witness)

    eta = vm.kernel_direction(q, g1, g2)
    eta_j = float(grad @ eta)
    witness["eta"] = eta
    witness["eta_J"] = eta_j
    eta_scale = grad_norm * float(np.linalg.norm(eta))
    if abs(eta_j) > tol_nonzero * eta_scale:
        return SingularityClass("fold", witness)
    if abs(eta_j) > tol_sing * eta_scale:
        return SingularityClass("nondegenerate_unclassified", witness)

    eta_eta_j = float(eta @ hess @ eta)
    witness["eta_eta_J"] = eta_eta_j
    eta2 = float(eta @ eta)
    if hess_norm == 0.0:
        return SingularityClass("degenerate", witness)
    if abs(eta_eta_j) > tol_nonzero * hess_norm * eta2:
        return SingularityClass("whitney_cusp", witness)
    if abs(eta_eta_j) > tol_sing * hess_norm * eta2:
        return SingularityClass("nondegenerate_unclassified", witness)
    return SingularityClass("degenerate", witness)


def normal_form_model(kind):
    """The model germs used as classifier self-test fixtures."""
    from .fields import PolyField

    if kind == "fold":
        return ViewMap.from_fields(
            PolyField({(1, 0): 1.0}), PolyField({(0, 2): 1.0})
        )
    if kind == "whitney_cusp":
        return ViewMap.from_fields(
            PolyField({(1, 0): 1.0}), PolyField({(0, 3): 1.0, (1, 1): -3.0})
        )
    raise ContractError(f"unknown model kind {kind!r}")
