"""Acceptance suite: one test per release criterion, with timing.

Each criterion prints a PASS/FAIL line (visible with `pytest -s` or in
failure output) and enforces its runtime budget.  Tolerances are pinned
here, not configurable.

Criterion 5b is expected to fail: the stated cycloid target value 2.0
(= sqrt of the rolling radius) is dimensionally inconsistent with the
defining formula det(c2, c3)/|c2|^(5/2), which yields 1/sqrt(radius) =
0.5 and which every other criterion depends on.  The test asserts the
stated value verbatim rather than silently substituting the corrected
one.
"""

import math
import time
import xml.etree.ElementTree as ET
from contextlib import contextmanager

import numpy as np
import pytest

from contourgeom import jets
from contourgeom.asymptotic import (
    asymptotic_invariants_closed_form,
    curve_curvature_torsion,
    trace_asymptotic_curve,
)
from contourgeom.catalog import catalog_surface, random_cubic_monge
from contourgeom.contour import (
    contour_curvature,
    contour_line,
    cuspidal_curvature,
    point_from_jets,
    trace_singular_set,
)
from contourgeom.identities import (
    check_asymptotic_identities,
    check_cusp_formulas,
    check_theorem_equivalences,
    closed_form_cusp_curvature,
)
from contourgeom.jets import Jet1, JetMap2
from contourgeom.fields import (
    CosField,
    ExpField,
    PolyField,
    PowerField,
    SinField,
    x_var,
    y_var,
)
from contourgeom.projection import build_projection, view_map
from contourgeom.surface import (
    TangentDirection,
    curvature_data,
    mannheim_radius,
    monge_normal_form,
    normal_curvature,
    reparametrize,
    transform_ambient,
)
from contourgeom.svgfig import standard_figures

import oracles

ORIGIN = (0.0, 0.0)
DV = TangentDirection(ORIGIN, (0.0, 1.0))


@contextmanager
def criterion(num, label, budget_s):
    t0 = time.perf_counter()
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE {num} [{label}]: FAIL ({time.perf_counter() - t0:.2f}s)")
        raise
    dt = time.perf_counter() - t0
    print(f"ACCEPTANCE {num} [{label}]: PASS ({dt:.2f}s)")
    assert dt < budget_s, f"criterion {num} exceeded its {budget_s}s budget: {dt:.2f}s"


def test_acceptance_1_central_worked_example():
    with criterion(1, "central worked example", 1.0):
        patch = catalog_surface("f1")
        data = curvature_data(patch, ORIGIN)
        assert data.K == pytest.approx(-1.0, abs=1e-12)
        frame = monge_normal_form(patch, DV)
        inv = asymptotic_invariants_closed_form(frame)
        assert inv.rho == pytest.approx(6.0, abs=1e-12)
        assert inv.alpha == pytest.approx(2.0, abs=1e-12)
        assert inv.beta == pytest.approx(3.0, abs=1e-12)
        assert abs(inv.delta) == pytest.approx(1.0, abs=1e-12)
        omega = closed_form_cusp_curvature(frame)
        assert abs(omega) == pytest.approx(2.0 / math.sqrt(6.0), abs=1e-6)
        assert abs(omega) == pytest.approx(0.816497, abs=1e-6)

        closed = check_asymptotic_identities(patch, DV, "closed")
        closed += check_cusp_formulas(patch, DV, "closed")
        for e in closed:
            if e.applicable and e.name.startswith("K_"):
                assert e.residual < 1e-12, e.name
        traced = check_asymptotic_identities(patch, DV, "traced")
        traced += check_cusp_formulas(patch, DV, "traced")
        for e in traced:
            if e.applicable and e.name.startswith("K_"):
                assert e.residual < 1e-6, e.name

        # the contour parametrization itself
        vm = view_map(build_projection(patch, DV))
        trace = trace_singular_set(vm, ORIGIN, 0.5)
        for pt in contour_line(trace, vm):
            y = pt.source[1]
            assert abs(pt.position[0] + 3.0 * y * y) < 1e-8
            assert abs(pt.position[1] + 2.0 * y**3) < 1e-8


def test_acceptance_2_contour_product_formula_on_paraboloids():
    with criterion(2, "contour product formula on the paraboloids", 1.0):
        expected = {"f_plus": (8.0, 2.0, 4.0), "f_minus": (-8.0, -2.0, 4.0)}
        for name, (K_e, kappa_e, mu_e) in expected.items():
            patch = catalog_surface(name)
            K = curvature_data(patch, ORIGIN).K
            kappa = normal_curvature(patch, DV)
            assert K == pytest.approx(K_e, abs=1e-12)
            assert kappa == pytest.approx(kappa_e, abs=1e-12)
            vm = view_map(build_projection(patch, DV))
            trace = trace_singular_set(vm, ORIGIN, 0.4)
            mu = contour_curvature(contour_line(trace, vm)[trace.marked_index])
            assert mu == pytest.approx(mu_e, abs=1e-6)
            assert K == pytest.approx(mu * kappa, abs=1e-6)
        assert mannheim_radius(catalog_surface("f_plus"), DV) == pytest.approx(
            0.25, abs=1e-12
        )


def test_acceptance_3_torsion_curvature_suite():
    with criterion(3, "asymptotic torsion vs curvature suite", 30.0):
        rng = np.random.default_rng(2024)
        worst_at_p = 0.0
        worst_traced = 0.0
        traced_samples = 0
        for i in range(200):
            patch, _ = random_cubic_monge(rng, hxy_range=(0.2, 5.0))
            K = curvature_data(patch, ORIGIN).K
            frame = monge_normal_form(patch, DV)
            inv = asymptotic_invariants_closed_form(frame)
            worst_at_p = max(
                worst_at_p, abs(abs(inv.delta) - math.sqrt(-K))
            )
            curve = trace_asymptotic_curve(patch, DV, budget=0.05, step=5e-3)
            for q, sj in zip(curve.points, curve.space_jets):
                Kq = curvature_data(patch, tuple(q)).K
                if Kq >= -1e-4:
                    continue
                _, delta = curve_curvature_torsion(sj)
                if delta is None:
                    continue
                traced_samples += 1
                worst_traced = max(
                    worst_traced, abs(abs(delta) - math.sqrt(-Kq))
                )
        assert worst_at_p < 1e-10
        assert traced_samples > 2000
        assert worst_traced < 1e-6


def test_acceptance_4_equivalence_suite():
    with criterion(4, "four-way cusp equivalence suite", 30.0):
        rng = np.random.default_rng(11)
        for i in range(100):
            patch, _ = random_cubic_monge(rng, hyyy_range=(0.1, 5.0))
            v = check_theorem_equivalences(patch, DV)
            assert not v.indeterminate, (i, v.details)
            assert v.agree and v.alpha_nonzero, (i, v.details)
        for i in range(100):
            patch, _ = random_cubic_monge(rng, hyyy_zero=True)
            v = check_theorem_equivalences(patch, DV)
            assert not v.indeterminate, (i, v.details)
            assert v.agree and not v.alpha_nonzero, (i, v.details)
        v0 = check_theorem_equivalences(catalog_surface("f0"), DV)
        assert v0.agree and not any(
            (v0.alpha_nonzero, v0.rho_nonzero, v0.traced_cusp, v0.classifier_cusp)
        )
        v1 = check_theorem_equivalences(catalog_surface("f1"), DV)
        assert v1.agree and all(
            (v1.alpha_nonzero, v1.rho_nonzero, v1.traced_cusp, v1.classifier_cusp)
        )


def test_acceptance_5a_standard_cusp_oracle():
    with criterion(5, "standard-cusp oracle", 1.0):
        pt = point_from_jets(Jet1([0, 0, 1.0, 0, 0]), Jet1([0, 0, 0, 1.0, 0]))
        mu = cuspidal_curvature(pt).cuspidal_curvature
        assert mu == pytest.approx(3.0 / math.sqrt(2.0), abs=1e-9)


def test_acceptance_5b_cycloid_oracle():
    with criterion(5, "cycloid oracle (stated target)", 1.0):
        a = 4.0
        g1 = Jet1([0.0, 0.0, 0.0, a / 6.0, 0.0])
        g2 = Jet1([0.0, 0.0, a / 2.0, 0.0, -a / 24.0])
        mu = abs(cuspidal_curvature(point_from_jets(g1, g2)).cuspidal_curvature)
        assert mu == pytest.approx(2.0, abs=1e-9), (
            f"cycloid (rolling radius {a}) cuspidal curvature is {mu}; the "
            "target 2 = sqrt(radius) is dimensionally inconsistent with the "
            "defining formula det(c2, c3)/|c2|^(5/2), whose value on the "
            "cycloid is 1/sqrt(radius) = 0.5 and which every other criterion "
            "relies on"
        )


CATALOG_CASES = (
    # surface, direction, invariant extras beyond K/H/lambdas/kappa
    ("f_plus", (0.0, 1.0)),
    ("f_minus", (0.0, 1.0)),
    ("f0", (0.0, 1.0)),
    ("f1", (0.0, 1.0)),
    ("sphere", (0.0, 1.0)),
    ("cylinder", (1.0, 0.0)),
)


def _scalar_invariants(patch, comps):
    d = TangentDirection(ORIGIN, comps)
    data = curvature_data(patch, ORIGIN)
    kappa = normal_curvature(patch, d)
    out = {
        "K": data.K,
        "H_abs": abs(data.H),
        "lambda_spread": data.lambda1 - data.lambda2,
        "kappa": kappa,
    }
    scale = max(abs(data.lambda1), abs(data.lambda2), 1e-300)
    if abs(kappa) > 1e-8 * scale:
        try:
            out["R"] = mannheim_radius(patch, d)
        except ZeroDivisionError:
            pass
        vm = view_map(build_projection(patch, d))
        trace = trace_singular_set(vm, ORIGIN, 0.1 * patch.diameter())
        out["mu"] = contour_curvature(contour_line(trace, vm)[trace.marked_index])
    elif data.K < 0.0:
        frame = monge_normal_form(patch, d)
        inv = asymptotic_invariants_closed_form(frame)
        out["alpha"] = inv.alpha
        out["beta"] = inv.beta
        out["delta_abs"] = abs(inv.delta)
        out["rho"] = inv.rho
        if abs(inv.rho) > 1e-8:
            out["omega_abs"] = abs(closed_form_cusp_curvature(frame))
    return out


def test_acceptance_6_invariance_suite():
    with criterion(6, "rigid-motion / reparametrization invariance", 30.0):
        rng = np.random.default_rng(5)
        for name, comps in CATALOG_CASES:
            patch = catalog_surface(name)
            ref = _scalar_invariants(patch, comps)
            for k in range(20):
                R = oracles.random_rotation(rng)
                t = rng.uniform(-2.0, 2.0, 3)
                moved = transform_ambient(patch, R, t)
                got = _scalar_invariants(moved, comps)
                assert got.keys() == ref.keys(), name
                for key, val in ref.items():
                    assert got[key] == pytest.approx(val, rel=1e-9, abs=1e-9), (
                        name,
                        key,
                        k,
                    )
            for k in range(20):
                while True:
                    A = rng.uniform(-1.2, 1.2, (2, 2))
                    if np.linalg.det(A) > 0.4:
                        break
                re = reparametrize(patch, A)
                v = np.linalg.solve(A, np.array(comps))
                got = _scalar_invariants(re, tuple(v))
                for key, val in ref.items():
                    assert got[key] == pytest.approx(val, rel=1e-9, abs=1e-9), (
                        name,
                        key,
                        k,
                    )

        # scaling covariance exponents
        f1 = catalog_surface("f1")
        fp = catalog_surface("f_plus")
        base_f1 = _scalar_invariants(f1, (0.0, 1.0))
        base_fp = _scalar_invariants(fp, (0.0, 1.0))
        for s in (2.0, 0.5):
            got1 = _scalar_invariants(transform_ambient(f1, s * np.eye(3)), (0.0, 1.0))
            assert got1["K"] == pytest.approx(base_f1["K"] * s**-2, rel=1e-9)
            assert got1["rho"] == pytest.approx(base_f1["rho"] * s**-2, rel=1e-9)
            assert got1["alpha"] == pytest.approx(base_f1["alpha"] * s**-1, rel=1e-9)
            assert got1["omega_abs"] == pytest.approx(
                base_f1["omega_abs"] * s**-0.5, rel=1e-9
            )
            got2 = _scalar_invariants(transform_ambient(fp, s * np.eye(3)), (0.0, 1.0))
            assert got2["mu"] == pytest.approx(base_fp["mu"] * s**-1, rel=1e-9)


def test_acceptance_7_jet_oracles():
    with criterion(7, "jet arithmetic oracles", 5.0):
        x, y = x_var(), y_var()
        cases = [
            (SinField(x) * y, (0.0, 0.0)),
            (SinField(x * y + y), (0.3, -0.4)),
            (CosField(x + y * y), (0.1, 0.7)),
            (ExpField(0.5 * x + y) * SinField(y), (-0.2, 0.3)),
            (PowerField(1.0 + x * x + y * y, 1.5), (0.3, 0.5)),
        ]
        for field_, base in cases:
            j = field_.jet2(base)
            for (i, jj) in jets.MONOMIALS2:
                if i + jj == 0:
                    continue
                fd = oracles.fd_partial(field_.value, base[0], base[1], i, jj)
                assert j.partial(i, jj) == pytest.approx(fd, rel=1e-6, abs=1e-6)

        rng = np.random.default_rng(42)
        ident = JetMap2.identity()
        worst = 0.0
        trials = 0
        while trials < 40:
            lin = rng.uniform(-2.0, 2.0, (2, 2))
            if np.linalg.svd(lin, compute_uv=False)[1] < 0.4:
                continue
            trials += 1
            coeffs = {}
            for which, row in (("x", lin[0]), ("y", lin[1])):
                d = {
                    (i, jj): float(rng.uniform(-2, 2))
                    for (i, jj) in jets.MONOMIALS2
                    if i + jj >= 2
                }
                d[(1, 0)], d[(0, 1)] = row
                coeffs[which] = PolyField(d).jet2(ORIGIN)
            m = JetMap2(coeffs["x"], coeffs["y"])
            rt = jets.compose_map(m, jets.invert(m))
            worst = max(
                worst,
                np.abs(rt.x.coeffs - ident.x.coeffs).max(),
                np.abs(rt.y.coeffs - ident.y.coeffs).max(),
            )
        assert worst < 1e-12


def test_acceptance_8_figure_reproduction():
    with criterion(8, "figure reproduction", 30.0):
        figures = dict(standard_figures())
        assert sorted(figures) == ["fig1_fminus", "fig1_fplus", "fig2_f0", "fig2_f1"]
        ns = "{http://www.w3.org/2000/svg}"
        for name, svg in figures.items():
            root = ET.fromstring(svg)
            paths = root.findall(f".//{ns}path")
            assert len(paths) > 10, name
            assert all(p.get("d") for p in paths), name
        for name in ("fig1_fplus", "fig1_fminus"):
            assert 'class="cusp"' not in figures[name], name

        # fig2_f1: exactly one cusp mark, at the image of the origin
        root = ET.fromstring(figures["fig2_f1"])
        cusp_circles = [
            c
            for c in root.findall(f".//{ns}circle")
            if c.get("class") == "cusp"
        ]
        assert len(cusp_circles) == 1
        # reproduce the canvas transform: symmetric domain and odd height
        # put the image origin at the canvas midline
        from contourgeom.svgfig import CANVAS, MARGIN, wireframe_image

        patch = catalog_surface("f1")
        vm = view_map(build_projection(patch, DV))
        lines = wireframe_image(vm, patch.domain)
        allpts = np.concatenate(lines)
        lo = allpts.min(axis=0)
        hi = allpts.max(axis=0)
        scale = (CANVAS - 2 * MARGIN) / (hi - lo).max()
        cx = MARGIN + (0.0 - lo[0]) * scale
        cy = CANVAS - MARGIN - (0.0 - lo[1]) * scale
        assert float(cusp_circles[0].get("cx")) == pytest.approx(cx, abs=0.5)
        assert float(cusp_circles[0].get("cy")) == pytest.approx(cy, abs=0.5)

        # byte-determinism across repeated runs
        again = dict(standard_figures())
        assert all(again[name] == figures[name] for name in figures)
