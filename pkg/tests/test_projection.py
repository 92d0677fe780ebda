"""Projection planes, view maps, and the fold / Whitney-cusp classifier."""

import numpy as np
import pytest

from contourgeom.catalog import catalog_surface, random_cubic_monge
from contourgeom.projection import (
    ViewMap,
    build_projection,
    classify_singularity,
    normal_form_model,
    view_map,
)
from contourgeom.surface import TangentDirection, curvature_data

ORIGIN = (0.0, 0.0)
DV = TangentDirection(ORIGIN, (0.0, 1.0))


def vm_for(name):
    patch = catalog_surface(name)
    return view_map(build_projection(patch, DV)), patch


def test_planes_for_f0_are_coordinate_planes():
    patch = catalog_surface("f0")
    setup = build_projection(patch, DV)
    assert np.allclose(setup.view_direction, [0, 1, 0], atol=1e-14)
    # tangent plane = xy, normal plane = yz, image plane = xz
    assert np.allclose(np.cross(*setup.plane_T.basis), [0, 0, 1], atol=1e-14)
    assert np.allclose(np.cross(*setup.plane_N.basis), [1, 0, 0], atol=1e-14)
    assert np.allclose(np.cross(*setup.plane_Pi.basis), [0, -1, 0], atol=1e-14)


def test_planes_mutually_orthogonal_everywhere():
    rng = np.random.default_rng(10)
    for _ in range(10):
        patch, _ = random_cubic_monge(rng)
        v = TangentDirection(ORIGIN, tuple(rng.uniform(-1, 1, 2)))
        setup = build_projection(patch, v)
        normals = [
            np.cross(*setup.plane_T.basis),
            np.cross(*setup.plane_N.basis),
            np.cross(*setup.plane_Pi.basis),
        ]
        for i in range(3):
            for j in range(i + 1, 3):
                assert abs(normals[i] @ normals[j]) < 1e-12
        assert abs(setup.plane_Pi.basis[0] @ setup.view_direction) < 1e-12
        assert abs(setup.plane_Pi.basis[1] @ setup.view_direction) < 1e-12


def test_view_map_jacobian_f0_is_x():
    vm, _ = vm_for("f0")
    for x, y in [(0.0, 0.0), (0.3, -0.2), (-0.5, 0.7)]:
        assert vm.jacobian_jet((x, y)).value == pytest.approx(x, abs=1e-13)
    # image of the singular set x = 0 is a single point
    for y in np.linspace(-0.9, 0.9, 7):
        assert np.allclose(vm.g_value((0.0, y)), 0.0, atol=1e-13)


def test_view_map_jacobian_f1_parabola():
    vm, _ = vm_for("f1")
    for y in np.linspace(-0.5, 0.5, 9):
        x = -3.0 * y * y
        assert vm.jacobian_jet((x, y)).value == pytest.approx(0.0, abs=1e-12)


def test_view_map_jacobian_f_plus_matches_fd():
    vm, patch = vm_for("f_plus")
    rng = np.random.default_rng(4)
    for _ in range(10):
        q = rng.uniform(-0.5, 0.5, 2)
        J = vm.jacobian_jet(q)
        assert J.value == pytest.approx(2.0 * q[1], abs=1e-12)
        step = 1e-5

        def jac(u, v):
            g_up = vm.g_value((u + step, v))
            g_un = vm.g_value((u - step, v))
            g_vp = vm.g_value((u, v + step))
            g_vn = vm.g_value((u, v - step))
            du = (g_up - g_un) / (2 * step)
            dv = (g_vp - g_vn) / (2 * step)
            return du[0] * dv[1] - du[1] * dv[0]

        assert J.value == pytest.approx(jac(*q), abs=1e-8)


def test_monge_jacobian_matches_parameter_jacobian_for_graphs():
    # for a patch already in Monge position the parameter-plane Jacobian
    # equals the height y-derivative identically
    rng = np.random.default_rng(6)
    patch, _ = random_cubic_monge(rng)
    vm = view_map(build_projection(patch, DV))
    h = vm.frame.monge_jet
    for _ in range(50):
        q = rng.uniform(-0.4, 0.4, 2)
        expected = patch.components[2].jet2(tuple(q)).partial(0, 1)
        assert vm.jacobian_jet(q).value == pytest.approx(expected, abs=1e-10)
    assert np.allclose(
        vm.monge_jacobian_jet().coeffs, h.deriv(1).coeffs, atol=1e-14
    )


def test_classify_f1_whitney_cusp():
    vm, _ = vm_for("f1")
    res = classify_singularity(vm, ORIGIN)
    assert res.tag == "whitney_cusp"
    assert res.witness["eta_J"] == pytest.approx(0.0, abs=1e-12)
    assert abs(res.witness["eta_eta_J"]) > 1e-6


def test_classify_f0_degenerate():
    vm, _ = vm_for("f0")
    res = classify_singularity(vm, ORIGIN)
    assert res.tag == "degenerate"


def test_classify_f_plus_fold():
    vm, _ = vm_for("f_plus")
    res = classify_singularity(vm, ORIGIN)
    assert res.tag == "fold"
    assert res.witness["eta_J"] == pytest.approx(2.0, abs=1e-12)


def test_classify_regular_point():
    vm, _ = vm_for("f_plus")
    assert classify_singularity(vm, (0.1, 0.2)).tag == "regular"


def test_model_germs_self_test():
    fold = normal_form_model("fold")
    assert classify_singularity(fold, ORIGIN).tag == "fold"
    cusp = normal_form_model("whitney_cusp")
    assert classify_singularity(cusp, ORIGIN).tag == "whitney_cusp"
    # on the fold line of the cusp model away from the cusp point
    assert classify_singularity(cusp, (1.0, 1.0)).tag == "fold"
    assert classify_singularity(cusp, (0.5, 0.2)).tag == "regular"


def test_cusp_iff_hyyy_nonzero_threshold_families():
    rng = np.random.default_rng(21)
    for _ in range(40):
        patch, partials = random_cubic_monge(rng, hyyy_range=(0.1, 5.0))
        vm = view_map(build_projection(patch, DV))
        assert classify_singularity(vm, ORIGIN).tag == "whitney_cusp"
    for _ in range(40):
        patch, partials = random_cubic_monge(rng, hyyy_zero=True)
        vm = view_map(build_projection(patch, DV))
        assert classify_singularity(vm, ORIGIN).tag != "whitney_cusp"


def test_classifier_invariant_under_source_affine_maps():
    rng = np.random.default_rng(33)
    cusp = normal_form_model("whitney_cusp")
    fold = normal_form_model("fold")
    from contourgeom.fields import AffineReparamField

    for _ in range(20):
        A = rng.uniform(-1.5, 1.5, (2, 2))
        if abs(np.linalg.det(A)) < 0.4:
            continue
        for model, expected in ((cusp, "whitney_cusp"), (fold, "fold")):
            warped = ViewMap.from_fields(
                *(AffineReparamField(f, A) for f in model._fields)
            )
            assert classify_singularity(warped, ORIGIN).tag == expected


def test_dead_zone_reports_unclassified():
    # a cusp model with a faint fold-like perturbation: the kernel
    # derivative of J is nonzero but far below the nonzero threshold, so
    # the classifier refuses to pick a side
    from contourgeom.fields import PolyField

    eps = 1e-7
    vm = ViewMap.from_fields(
        PolyField({(1, 0): 1.0}),
        PolyField({(0, 3): 1.0, (1, 1): -3.0, (0, 2): eps}),
    )
    assert classify_singularity(vm, ORIGIN).tag == "nondegenerate_unclassified"


def test_jx_squared_equals_minus_K_for_asymptotic_frames():
    rng = np.random.default_rng(13)
    worst = 0.0
    for _ in range(30):
        patch, _ = random_cubic_monge(rng, hxy_range=(0.2, 3.0))
        vm = view_map(build_projection(patch, DV))
        K = curvature_data(patch, ORIGIN).K
        jx = vm.monge_jacobian_jet().partial(1, 0)
        worst = max(worst, abs(jx * jx - abs(K)))
    assert worst < 1e-10


def test_view_direction_for_f1():
    patch = catalog_surface("f1")
    setup = build_projection(patch, DV)
    assert np.allclose(setup.view_direction, [0.0, 1.0, 0.0], atol=1e-14)
