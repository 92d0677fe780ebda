"""Surface curvature theory on the catalog surfaces and random patches."""

import math

import numpy as np
import pytest

from contourgeom import surface
from contourgeom.catalog import catalog_surface, monge_patch, random_cubic_monge
from contourgeom.errors import (
    ContractError,
    DegeneratePatchError,
    NotApplicableError,
    PlanarPointError,
)
from contourgeom.fields import x_var
from contourgeom.surface import (
    NormalField,
    SurfacePatch,
    TangentDirection,
    asymptotic_directions,
    curvature_data,
    fundamental_forms,
    mannheim_radius,
    monge_normal_form,
    normal_curvature,
    angle_to_principal,
    transform_ambient,
)

import oracles

ORIGIN = (0.0, 0.0)


def dir_at(a, b, p=ORIGIN):
    return TangentDirection(p, (a, b))


def test_fundamental_forms_f_plus():
    patch = catalog_surface("f_plus")
    I, II = fundamental_forms(patch, ORIGIN)
    assert np.allclose(I, np.eye(2), atol=1e-14)
    assert np.allclose(II, np.diag([4.0, 2.0]), atol=1e-14)
    I_fd, II_fd = oracles.fd_fundamental_forms(patch.point, ORIGIN)
    assert np.allclose(I, I_fd, atol=1e-6)
    assert np.allclose(II, II_fd, atol=1e-6)


def test_fundamental_forms_plane_and_f1():
    plane = monge_patch({})
    _, II = fundamental_forms(plane, (0.3, -0.2))
    assert np.allclose(II, 0.0, atol=1e-15)

    f1 = catalog_surface("f1")
    I, II = fundamental_forms(f1, ORIGIN)
    assert np.allclose(II, np.array([[0.0, 1.0], [1.0, 0.0]]), atol=1e-14)
    _, II_fd = oracles.fd_fundamental_forms(f1.point, ORIGIN)
    assert np.allclose(II, II_fd, atol=1e-6)


def test_fundamental_forms_away_from_origin_match_fd():
    rng = np.random.default_rng(2)
    f1 = catalog_surface("f1")
    for _ in range(5):
        p = tuple(rng.uniform(-0.5, 0.5, 2))
        I, II = fundamental_forms(f1, p)
        I_fd, II_fd = oracles.fd_fundamental_forms(f1.point, p)
        assert np.allclose(I, I_fd, atol=1e-6)
        assert np.allclose(II, II_fd, atol=1e-6)


def test_immersion_failure_raises():
    bad = SurfacePatch((x_var(), x_var(), x_var() * x_var()))
    with pytest.raises(DegeneratePatchError):
        fundamental_forms(bad, ORIGIN)


def test_curvature_data_f_plus():
    data = curvature_data(catalog_surface("f_plus"), ORIGIN)
    assert data.lambda1 == pytest.approx(4.0, abs=1e-12)
    assert data.lambda2 == pytest.approx(2.0, abs=1e-12)
    assert data.K == pytest.approx(8.0, abs=1e-12)
    assert data.H == pytest.approx(3.0, abs=1e-12)
    assert np.allclose(data.normal, [0, 0, 1], atol=1e-14)
    assert not data.umbilic
    # lambda1-direction is du
    assert abs(data.dir1.components[0]) == pytest.approx(1.0, abs=1e-12)
    assert data.dir1.components[1] == pytest.approx(0.0, abs=1e-12)


def test_curvature_data_f1_and_flat():
    data = curvature_data(catalog_surface("f1"), ORIGIN)
    assert data.K == pytest.approx(-1.0, abs=1e-12)
    assert data.K == pytest.approx(data.lambda1 * data.lambda2, rel=1e-12)

    flat = monge_patch({})
    data = curvature_data(flat, ORIGIN)
    assert data.K == 0.0
    assert data.lambda1 == pytest.approx(0.0, abs=1e-14)
    assert data.umbilic


def test_principal_directions_are_I_orthogonal():
    rng = np.random.default_rng(8)
    for _ in range(20):
        patch, _ = random_cubic_monge(rng)
        p = tuple(rng.uniform(-0.2, 0.2, 2))
        I, _ = fundamental_forms(patch, p)
        data = curvature_data(patch, p)
        d1, d2 = data.dir1.vector, data.dir2.vector
        assert abs(d1 @ I @ d2) < 1e-10
        assert data.K == pytest.approx(data.lambda1 * data.lambda2, rel=1e-12, abs=1e-12)


def test_normal_curvature_catalog_values():
    assert normal_curvature(catalog_surface("f_plus"), dir_at(0, 1)) == pytest.approx(2.0)
    assert normal_curvature(catalog_surface("f_minus"), dir_at(0, 1)) == pytest.approx(-2.0)
    assert normal_curvature(catalog_surface("f1"), dir_at(0, 1)) == pytest.approx(0.0, abs=1e-14)


def test_euler_formula_residual_on_random_patches():
    rng = np.random.default_rng(31)
    worst = 0.0
    for _ in range(100):
        patch, _ = random_cubic_monge(rng, hxy_range=(0.2, 3.0), hyy=rng.uniform(-2, 2))
        p = tuple(rng.uniform(-0.1, 0.1, 2))
        data = curvature_data(patch, p)
        v = dir_at(*rng.uniform(-1, 1, 2), p=p)
        theta = angle_to_principal(patch, v, data)
        kappa = normal_curvature(patch, v)
        euler = data.lambda1 * math.cos(theta) ** 2 + data.lambda2 * math.sin(theta) ** 2
        worst = max(worst, abs(kappa - euler))
    assert worst < 1e-10


def test_asymptotic_directions_f1():
    dirs = asymptotic_directions(catalog_surface("f1"), ORIGIN)
    assert len(dirs) == 2
    # ordered by descending second component: dv first, then du
    assert np.allclose(dirs[0].components, (0.0, 1.0), atol=1e-12)
    assert np.allclose(dirs[1].components, (1.0, 0.0), atol=1e-12)


def test_asymptotic_directions_f_plus_empty():
    assert asymptotic_directions(catalog_surface("f_plus"), ORIGIN) == []


def test_asymptotic_directions_f_minus_slopes():
    dirs = asymptotic_directions(catalog_surface("f_minus"), ORIGIN)
    assert len(dirs) == 2
    slopes = sorted(d.components[1] / d.components[0] for d in dirs)
    assert slopes[0] == pytest.approx(-math.sqrt(2.0), rel=1e-12)
    assert slopes[1] == pytest.approx(math.sqrt(2.0), rel=1e-12)


def test_asymptotic_directions_brute_force_oracle():
    rng = np.random.default_rng(12)
    for _ in range(20):
        patch, _ = random_cubic_monge(rng, hyy=rng.uniform(-1, 1))
        p = tuple(rng.uniform(-0.1, 0.1, 2))
        I, II = fundamental_forms(patch, p)
        dirs = asymptotic_directions(patch, p)
        # sampled minima of |II(v,v)| over the circle must match the count
        angles = np.linspace(0.0, math.pi, 2000, endpoint=False)
        vals = np.array(
            [
                np.array([math.cos(t), math.sin(t)]) @ II @ np.array([math.cos(t), math.sin(t)])
                for t in angles
            ]
        )
        sign_changes = int(np.count_nonzero(np.diff(np.sign(vals)) != 0))
        if np.sign(vals).min() == np.sign(vals).max():
            expected = 0
        else:
            expected = sign_changes
        assert len(dirs) in (expected, 1 if expected == 0 else expected)
        for d in dirs:
            v = d.vector
            assert abs(v @ II @ v) < 1e-10
            assert v @ I @ v == pytest.approx(1.0, rel=1e-12)


def test_asymptotic_parabolic_single_direction():
    cyl = catalog_surface("cylinder")
    dirs = asymptotic_directions(cyl, ORIGIN)
    assert len(dirs) == 1
    assert np.allclose(dirs[0].components, (0.0, 1.0), atol=1e-12)


def test_planar_point_signalled():
    with pytest.raises(PlanarPointError):
        asymptotic_directions(monge_patch({}), ORIGIN)


def test_mannheim_radius_values():
    fp = catalog_surface("f_plus")
    assert mannheim_radius(fp, dir_at(0, 1)) == pytest.approx(0.25, rel=1e-12)
    assert mannheim_radius(fp, dir_at(1, 0)) == pytest.approx(0.5, rel=1e-12)


def test_mannheim_radius_sphere_is_radius():
    rng = np.random.default_rng(5)
    for r in (1.0, 2.5):
        sph = catalog_surface("sphere", radius=r)
        for _ in range(5):
            a, b = rng.uniform(-1, 1, 2)
            if abs(a) + abs(b) < 1e-3:
                continue
            assert mannheim_radius(sph, dir_at(a, b)) == pytest.approx(r, rel=1e-9)


def test_mannheim_asymptotic_is_not_applicable():
    with pytest.raises(NotApplicableError):
        mannheim_radius(catalog_surface("f1"), dir_at(0, 1))


def test_mannheim_consistent_with_osculating_circle_of_contour():
    # independent fit: project f_plus along df(dv) and fit a circle to the
    # contour z = 2x^2 near the origin
    d = 1e-3
    pts = np.array([[x, 2 * x * x] for x in (-d, 0.0, d)])
    r_fit = oracles.osculating_radius(*pts)
    assert mannheim_radius(catalog_surface("f_plus"), dir_at(0, 1)) == pytest.approx(
        r_fit, rel=1e-5
    )


def test_monge_normal_form_f1_already_adapted():
    frame = monge_normal_form(catalog_surface("f1"), dir_at(0, 1))
    h = frame.monge_jet
    assert h.coeff(1, 1) == pytest.approx(1.0, abs=1e-12)
    assert h.coeff(0, 3) == pytest.approx(1.0, abs=1e-12)
    assert h.coeff(0, 2) == pytest.approx(0.0, abs=1e-12)
    assert h.value == 0.0
    assert np.allclose(h.gradient(), 0.0, atol=1e-12)
    assert np.allclose(frame.e2, [0, 1, 0], atol=1e-14)
    assert np.allclose(frame.e3, [0, 0, 1], atol=1e-14)
    assert np.allclose(frame.e1, [1, 0, 0], atol=1e-14)


def test_monge_normal_form_plane_is_zero():
    frame = monge_normal_form(monge_patch({}), dir_at(0.3, 1.0))
    assert np.allclose(frame.monge_jet.coeffs, 0.0, atol=1e-15)


def test_frame_orthonormal_right_handed():
    rng = np.random.default_rng(77)
    for _ in range(10):
        patch, _ = random_cubic_monge(rng)
        v = dir_at(*rng.uniform(-1, 1, 2))
        frame = monge_normal_form(patch, v)
        E = np.stack([frame.e1, frame.e2, frame.e3])
        assert np.allclose(E @ E.T, np.eye(3), atol=1e-12)
        assert np.linalg.det(E) == pytest.approx(1.0, rel=1e-12)


def test_monge_jet_rigid_motion_invariance():
    rng = np.random.default_rng(42)
    patch = catalog_surface("f1")
    v = dir_at(0, 1)
    reference = monge_normal_form(patch, v).monge_jet.coeffs
    for _ in range(20):
        R = oracles.random_rotation(rng)
        t = rng.uniform(-2, 2, 3)
        moved = transform_ambient(patch, R, t)
        got = monge_normal_form(moved, v).monge_jet.coeffs
        assert np.allclose(got, reference, atol=1e-9)


def test_K_equals_minus_hxy_squared_for_asymptotic_frames():
    rng = np.random.default_rng(19)
    worst = 0.0
    for _ in range(50):
        patch, partials = random_cubic_monge(rng)
        frame = monge_normal_form(patch, dir_at(0, 1))
        K = curvature_data(patch, ORIGIN).K
        hxy = frame.monge_jet.partial(1, 1)
        worst = max(worst, abs(K + hxy * hxy))
        assert abs(frame.monge_jet.coeff(0, 2)) < 1e-10
        assert hxy == pytest.approx(partials[(1, 1)], rel=1e-12)
    assert worst < 1e-10


def test_normal_field_annihilates_tangents():
    rng = np.random.default_rng(3)
    patch, _ = random_cubic_monge(rng)
    frame = monge_normal_form(patch, dir_at(0, 1))
    nf = NormalField(frame)
    nx, ny, nz = nf.jet_components()
    h = frame.monge_jet
    # tangents of the graph (x, y, h): (1, 0, h_x) and (0, 1, h_y)
    fx = (nx.value * 1.0 + nz.value * h.partial(1, 0))
    fy = (ny.value * 1.0 + nz.value * h.partial(0, 1))
    assert abs(fx) < 1e-12
    assert abs(fy) < 1e-12
    assert np.allclose(nf.value(), [0.0, 0.0, 1.0], atol=1e-12)


def test_zero_direction_rejected():
    with pytest.raises(ContractError):
        dir_at(0.0, 0.0)


def test_scalar_invariants_under_reparametrization():
    rng = np.random.default_rng(55)
    patch = catalog_surface("f1")
    K_ref = curvature_data(patch, ORIGIN).K
    kappa_ref = normal_curvature(patch, dir_at(0, 1))
    for _ in range(10):
        A = rng.uniform(-1.5, 1.5, (2, 2))
        if abs(np.linalg.det(A)) < 0.3 or np.linalg.det(A) < 0:
            continue
        newp = surface.reparametrize(patch, A)
        Ainv = np.linalg.solve(A, np.eye(2))
        v = Ainv @ np.array([0.0, 1.0])
        K = curvature_data(newp, ORIGIN).K
        kappa = normal_curvature(newp, dir_at(v[0], v[1]))
        assert K == pytest.approx(K_ref, rel=1e-9)
        assert kappa == pytest.approx(kappa_ref, rel=1e-9, abs=1e-12)
