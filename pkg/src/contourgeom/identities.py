"""Residual evaluation of the curvature/contour identities.

Every identity is reported as an IdentityEntry with both sides, absolute
and relative residuals, and an applicability flag carrying a reason when
the configuration rules the identity out (asymptotic direction for the
product formula, vanishing cubic data for the cusp formulas, ...).

Identities with both a closed-form and a traced route are checked twice:
"closed" reads the invariants straight off the Monge height jet, while
"traced" runs the independent pipelines (contour tracing for the contour
curvature and the cuspidal curvature, curve-jet constructions for the
space-curve invariants).  Closed-form residuals sit at rounding level;
traced residuals are expected below 1e-6.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .asymptotic import (
    asymptotic_invariants_closed_form,
    curve_curvature_torsion,
    normal_section,
    space_curve_jets,
    trace_tangential_curve,
)
from .contour import contour_curvature, contour_line, find_contour_cusps, trace_singular_set
from .errors import ContractError, NotApplicableError
from .projection import build_projection, classify_singularity, view_map
from .surface import curvature_data, mannheim_radius, normal_curvature

DEADZONE_LO = 1e-8  # normalised magnitudes below: treated as zero
DEADZONE_HI = 1e-4  # normalised magnitudes above: treated as nonzero


@dataclass(frozen=True)
class IdentityEntry:
    name: str
    lhs: float = None
    rhs: float = None
    applicable: bool = True
    reason: str = ""
    provenance: str = ""

    @property
    def residual(self):
        if not self.applicable:
            return 0.0
        return abs(self.lhs - self.rhs)

    @property
    def residual_rel(self):
        if not self.applicable:
            return 0.0
        scale = max(abs(self.lhs), abs(self.rhs), 1.0)
        return abs(self.lhs - self.rhs) / scale

    def as_dict(self):
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "abs_residual": self.residual if self.applicable else None,
            "rel_residual": self.residual_rel if self.applicable else None,
            "applicable": self.applicable,
            "reason": self.reason or None,
            "provenance": self.provenance or None,
        }


def _inapplicable(name, reason):
    return IdentityEntry(name=name, applicable=False, reason=reason)


def _trace_for(patch, direction, budget=None):
    vm = view_map(build_projection(patch, direction))
    if budget is None:
        budget = 0.25 * patch.diameter()
    trace = trace_singular_set(vm, direction.basepoint, budget)
    return vm, trace


def check_mdk(patch, direction, budget=None):
    """Products of contour curvature with normal curvature against K.

    Checks |K| = |mu kappa|, the signed K = mu kappa, and the
    contour-radius formula |mu| = 1/R, with mu read from the traced
    contour at the marked point.
    """
    kappa = normal_curvature(patch, direction)
    data = curvature_data(patch, direction.basepoint)
    K = data.K
    scale = max(abs(data.lambda1), abs(data.lambda2), 1e-300)
    if abs(kappa) <= 1e-8 * scale:
        return [
            _inapplicable(
                name,
                "normal curvature vanishes (asymptotic direction); "
                "see the cusp formulas",
            )
            for name in ("gauss_product_unsigned", "gauss_product_signed", "contour_radius")
        ]
    vm, trace = _trace_for(patch, direction, budget)
    pt = contour_line(trace, vm)[trace.marked_index]
    mu = contour_curvature(pt)
    entries = [
        IdentityEntry(
            "gauss_product_unsigned",
            lhs=abs(K),
            rhs=abs(mu * kappa),
            provenance="K: surface eigenvalues; mu: traced contour; kappa: surface",
        ),
        IdentityEntry(
            "gauss_product_signed",
            lhs=K,
            rhs=mu * kappa,
            provenance="sign convention: contour convex toward -e3 is positive",
        ),
    ]
    try:
        R = mannheim_radius(patch, direction)
        entries.append(
            IdentityEntry(
                "contour_radius",
                lhs=abs(mu),
                rhs=1.0 / R,
                provenance="R: principal-curvature formula; mu: traced contour",
            )
        )
    except (NotApplicableError, ZeroDivisionError) as exc:
        entries.append(_inapplicable("contour_radius", str(exc)))
    return entries


def _require_asymptotic(patch, direction):
    kappa = normal_curvature(patch, direction)
    data = curvature_data(patch, direction.basepoint)
    scale = max(abs(data.lambda1), abs(data.lambda2), 1e-300)
    if abs(kappa) > 1e-8 * scale:
        raise ContractError(
            f"direction is not asymptotic (normal curvature {kappa:.3e})"
        )
    if data.K >= 0.0:
        raise ContractError("asymptotic identities need negative curvature")
    return data


def _invariants(patch, direction, mode):
    from .surface import monge_normal_form

    frame = monge_normal_form(patch, direction)
    if mode == "closed":
        inv = asymptotic_invariants_closed_form(frame)
        return frame, inv.alpha, inv.beta, inv.delta, inv.rho
    beta, delta = curve_curvature_torsion(space_curve_jets(frame))
    germ = trace_tangential_curve(frame, budget=0.0)
    rho = normal_section(frame).derivative(3)
    return frame, germ.alpha, beta, delta, rho


def check_asymptotic_identities(patch, direction, mode="closed"):
    """Relations among the asymptotic invariants and K at one point."""
    data = _require_asymptotic(patch, direction)
    K = data.K
    frame, alpha, beta, delta, rho = _invariants(patch, direction, mode)
    prov = f"{mode} pipeline"
    entries = [
        IdentityEntry(
            "horizontal_vs_curve_curvature",
            lhs=abs(alpha),
            rhs=(2.0 / 3.0) * beta,
            provenance=prov,
        )
    ]
    if delta is None:
        # straight asymptotic curve: the Frenet torsion is undefined, so
        # only the product form (which its beta factor kills) survives
        entries.append(
            IdentityEntry(
                "torsion_curvature_product",
                lhs=0.0,
                rhs=abs(rho),
                provenance=prov,
            )
        )
        entries.append(
            _inapplicable(
                "torsion_is_root_minus_K",
                "asymptotic curve has an inflection: torsion undefined",
            )
        )
    else:
        entries.append(
            IdentityEntry(
                "torsion_curvature_product",
                lhs=2.0 * beta * abs(delta),
                rhs=abs(rho),
                provenance=prov,
            )
        )
        entries.append(
            IdentityEntry(
                "torsion_is_root_minus_K",
                lhs=abs(delta),
                rhs=math.sqrt(-K),
                provenance=prov,
            )
        )
    if abs(alpha) > DEADZONE_LO * math.sqrt(-K):
        entries.append(
            IdentityEntry(
                "K_from_normal_and_tangent_planes",
                lhs=K,
                rhs=-(rho * rho) / (9.0 * alpha * alpha),
                provenance=prov,
            )
        )
    else:
        entries.append(
            _inapplicable(
                "K_from_normal_and_tangent_planes", "horizontal curvature vanishes"
            )
        )
    if beta > DEADZONE_LO * math.sqrt(-K):
        entries.append(
            IdentityEntry(
                "K_from_curve_data",
                lhs=K,
                rhs=-(rho * rho) / (4.0 * beta * beta),
                provenance=prov,
            )
        )
    else:
        entries.append(
            _inapplicable("K_from_curve_data", "asymptotic curvature vanishes")
        )
    return entries


def closed_form_cusp_curvature(frame):
    """Cuspidal curvature of the contour from the Monge height jet."""
    h = frame.monge_jet
    hxy = h.partial(1, 1)
    hyyy = h.partial(0, 3)
    if hyyy == 0.0:
        raise NotApplicableError("cubic coefficient vanishes: no cusp")
    return math.copysign(
        2.0 * abs(hxy) ** 1.5 / math.sqrt(abs(hyyy)), hxy
    )


def check_cusp_formulas(patch, direction, mode="closed", budget=None):
    """K expressed through the cuspidal curvature of the contour."""
    data = _require_asymptotic(patch, direction)
    K = data.K
    frame, alpha, beta, delta, rho = _invariants(patch, direction, mode)
    names = ("K_cubed_from_cusp", "K_from_cusp_and_tangent_plane")
    if abs(rho) <= DEADZONE_LO * (-K):
        return [
            _inapplicable(
                n,
                "vertical torsion vanishes, so the contour has no cusp "
                "(the four equivalent conditions all fail)",
            )
            for n in names
        ]
    if mode == "closed":
        omega = closed_form_cusp_curvature(frame)
        prov = "closed pipeline"
    else:
        vm, trace = _trace_for(patch, direction, budget)
        cusps = find_contour_cusps(trace, vm)
        if not cusps:
            return [
                _inapplicable(n, "tracing found no cusp on the contour")
                for n in names
            ]
        nearest = min(
            cusps, key=lambda c: np.linalg.norm(np.array(c.source) - trace.points[trace.marked_index])
        )
        omega = nearest.cuspidal_curvature
        prov = "traced pipeline"
    return [
        IdentityEntry(
            names[0],
            lhs=K**3,
            rhs=-(rho * rho) * omega**4 / 16.0,
            provenance=prov,
        ),
        IdentityEntry(
            names[1],
            lhs=K,
            rhs=-0.75 * abs(alpha) * omega * omega,
            provenance=prov,
        ),
    ]


@dataclass(frozen=True)
class EquivalenceVerdict:
    """The four equivalent cusp conditions and their agreement."""

    alpha_nonzero: bool
    rho_nonzero: bool
    traced_cusp: bool
    classifier_cusp: bool
    indeterminate: bool = False
    details: dict = field(default_factory=dict)

    @property
    def agree(self):
        flags = (
            self.alpha_nonzero,
            self.rho_nonzero,
            self.traced_cusp,
            self.classifier_cusp,
        )
        return all(flags) or not any(flags)

    def as_dict(self):
        return {
            "alpha_nonzero": self.alpha_nonzero,
            "rho_nonzero": self.rho_nonzero,
            "traced_cusp": self.traced_cusp,
            "classifier_cusp": self.classifier_cusp,
            "agree": self.agree,
            "indeterminate": self.indeterminate,
        }


def check_theorem_equivalences(patch, direction, budget=None):
    """Evaluate the four equivalent conditions for a contour cusp.

    Normalised magnitudes inside [DEADZONE_LO, DEADZONE_HI] are flagged
    indeterminate instead of being forced to a side.
    """
    data = _require_asymptotic(patch, direction)
    K = data.K
    root = math.sqrt(-K)
    frame, alpha, beta, delta, rho = _invariants(patch, direction, "closed")
    alpha_n = abs(alpha) / root
    rho_n = abs(rho) / (-K)

    vm, trace = _trace_for(patch, direction, budget)
    cusps = find_contour_cusps(trace, vm)
    omega_n = 0.0
    if cusps:
        nearest = min(
            cusps,
            key=lambda c: np.linalg.norm(
                np.array(c.source) - trace.points[trace.marked_index]
            ),
        )
        omega_n = abs(nearest.cuspidal_curvature) / (-K) ** 0.25
    tag = classify_singularity(vm, direction.basepoint).tag

    indeterminate = any(
        DEADZONE_LO < v < DEADZONE_HI for v in (alpha_n, rho_n, omega_n)
    )
    return EquivalenceVerdict(
        alpha_nonzero=alpha_n >= DEADZONE_HI,
        rho_nonzero=rho_n >= DEADZONE_HI,
        traced_cusp=omega_n >= DEADZONE_HI,
        classifier_cusp=tag == "whitney_cusp",
        indeterminate=indeterminate,
        details={
            "alpha_normalised": alpha_n,
            "rho_normalised": rho_n,
            "omega_normalised": omega_n,
            "classifier_tag": tag,
        },
    )


def reconstruct_invariants(known):
    """Recover all of {K, alpha, rho, omega} (absolute values) from any two.

    K is signed (negative); the other three are magnitudes, since the
    relations are even in them.
    """
    keys = set(known)
    if not keys <= {"K", "alpha", "rho", "omega"} or len(keys) != 2:
        raise ContractError("need exactly two of K, alpha, rho, omega")
    vals = {m: float(known[m]) for m in keys}
    if "K" in vals:
        if vals["K"] >= 0.0:
            raise ContractError("K must be negative")
        k = -vals["K"]
        if "alpha" in vals:
            a = abs(vals["alpha"])
            rho = 3.0 * a * math.sqrt(k)
            omega = 2.0 * math.sqrt(k / (3.0 * a))
        elif "rho" in vals:
            r = abs(vals["rho"])
            a = r / (3.0 * math.sqrt(k))
            omega = 2.0 * k**0.75 / math.sqrt(r)
            rho = r
        else:
            w = abs(vals["omega"])
            a = 4.0 * k / (3.0 * w * w)
            rho = 4.0 * k**1.5 / (w * w)
            omega = w
        alpha = a
    elif {"alpha", "rho"} <= keys:
        a, r = abs(vals["alpha"]), abs(vals["rho"])
        k = r * r / (9.0 * a * a)
        alpha, rho = a, r
        omega = 2.0 * math.sqrt(k / (3.0 * a))
    elif {"alpha", "omega"} <= keys:
        a, w = abs(vals["alpha"]), abs(vals["omega"])
        k = 0.75 * a * w * w
        alpha, omega = a, w
        rho = 3.0 * a * math.sqrt(k)
    else:
        r, w = abs(vals["rho"]), abs(vals["omega"])
        k = (r * r * w**4 / 16.0) ** (1.0 / 3.0)
        rho, omega = r, w
        alpha = 4.0 * k / (3.0 * w * w)
    return {"K": -k, "alpha": alpha, "rho": rho, "omega": omega}


def full_report(patch, direction, traced=True, budget=None):
    """All applicable identity entries for one (patch, point, direction)."""
    entries = []
    kappa = normal_curvature(patch, direction)
    data = curvature_data(patch, direction.basepoint)
    scale = max(abs(data.lambda1), abs(data.lambda2), 1e-300)
    asymptotic = abs(kappa) <= 1e-8 * scale
    verdict = None
    if not asymptotic:
        entries.extend(check_mdk(patch, direction, budget))
        for name in (
            "horizontal_vs_curve_curvature",
            "torsion_curvature_product",
            "torsion_is_root_minus_K",
            "K_from_normal_and_tangent_planes",
            "K_from_curve_data",
            "K_cubed_from_cusp",
            "K_from_cusp_and_tangent_plane",
        ):
            entries.append(
                _inapplicable(name, "requires an asymptotic direction")
            )
    elif data.K < 0.0:
        entries.extend(check_asymptotic_identities(patch, direction, "closed"))
        entries.extend(check_cusp_formulas(patch, direction, "closed"))
        if traced:
            entries.extend(check_asymptotic_identities(patch, direction, "traced"))
            entries.extend(
                check_cusp_formulas(patch, direction, "traced", budget)
            )
            verdict = check_theorem_equivalences(patch, direction, budget)
        for name in ("gauss_product_unsigned", "gauss_product_signed", "contour_radius"):
            entries.append(
                _inapplicable(name, "normal curvature vanishes; product formula fails")
            )
    return entries, verdict
