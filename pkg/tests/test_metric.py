import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypsing.germ import DevelopingGerm, Log, Power
from hypsing.metric import (
    Conical,
    Cusp,
    Divisor,
    ImageOutsideModel,
    OutOfDomain,
    StencilOutOfDomain,
    annular_points,
    cartesian_points,
    conical_density,
    curvature_fd,
    cusp_density,
    density_field,
    gauss_bonnet_admissible,
    pullback_density,
    radial_distance,
    radial_distance_log,
    sample_grid,
)
from hypsing.mobius import MobiusMap, Model

from oracles import conical_distance_quad, cusp_distance_quad

ALPHAS = [1 / 3, 1 / 2, 2 / 3, 2, 5 / 2]
CUSP_GERM = DevelopingGerm(MobiusMap(-1j, 0, 0, 1), Log(), Model.HALFPLANE)


def test_conical_density_examples():
    assert conical_density(1, 0) == 4
    assert conical_density(2, 0) == 0
    with pytest.raises(OutOfDomain):
        conical_density(0.5, 0)
    assert abs(conical_density(2, 0.5) - 4 / 0.87890625) < 1e-14
    with pytest.raises(OutOfDomain):
        conical_density(2, 1.0)


def test_cusp_density_examples():
    assert abs(cusp_density(math.exp(-1)) - math.e**2) < 1e-12
    assert abs(cusp_density(math.exp(-2)) - math.e**4 / 4) < 1e-12
    assert cusp_density(1 - 1e-9) > 1e15
    with pytest.raises(OutOfDomain):
        cusp_density(0)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.01, 0.95), st.floats(-math.pi, math.pi), st.floats(-math.pi, math.pi))
def test_densities_rotation_invariant(r, t1, t2):
    z1, z2 = r * cmath.exp(1j * t1), r * cmath.exp(1j * t2)
    for a in ALPHAS:
        assert conical_density(a, z1) == pytest.approx(conical_density(a, z2), rel=1e-14)
    assert cusp_density(z1) == pytest.approx(cusp_density(z2), rel=1e-14)


@pytest.mark.parametrize("alpha", ALPHAS)
def test_pullback_conical_identity(alpha):
    rng = np.random.default_rng(0)
    germ = DevelopingGerm(MobiusMap.identity(), Power(alpha))
    for _ in range(50):
        z = rng.uniform(0.01, 0.95) * cmath.exp(1j * rng.uniform(-math.pi, math.pi))
        assert abs(pullback_density(germ, z) / conical_density(alpha, z) - 1) < 1e-12


def test_pullback_cusp_identity():
    rng = np.random.default_rng(1)
    for _ in range(50):
        z = rng.uniform(0.01, 0.95) * cmath.exp(1j * rng.uniform(-math.pi, math.pi))
        assert abs(pullback_density(CUSP_GERM, z) / cusp_density(z) - 1) < 1e-12


def test_wrong_orientation_leaves_halfplane():
    germ = DevelopingGerm(MobiusMap(1j, 0, 0, 1), Log(), Model.HALFPLANE)
    with pytest.raises(ImageOutsideModel):
        pullback_density(germ, 0.5)


def test_curvature_examples():
    assert abs(curvature_fd(density_field(Conical(0.5)), 0.3 + 0.1j) + 1) < 1e-4
    assert abs(curvature_fd(density_field(Cusp()), 0.2) + 1) < 1e-4
    assert abs(curvature_fd(lambda z: 1.0, 0.2)) < 1e-8


def test_second_order_stencil_available():
    k = curvature_fd(density_field(Conical(0.5)), 0.5, order=2)
    assert abs(k + 1) < 1e-4


@pytest.mark.parametrize("kind", [Conical(a) for a in ALPHAS] + [Cusp()])
def test_curvature_on_annulus(kind):
    field = density_field(kind)
    for z in annular_points(0.06, 0.8, 8, 8):
        assert abs(curvature_fd(field, z) + 1) <= 1e-4


def test_curvature_halves_step_near_boundary():
    # the default step would leave the disk at |z| = 1 - 1.5e-3
    k = curvature_fd(density_field(Conical(0.5)), 1 - 1.5e-3)
    assert math.isfinite(k)
    with pytest.raises(StencilOutOfDomain):
        curvature_fd(density_field(Cusp()), 1 - 1e-6)


def test_radial_distance_examples():
    assert abs(radial_distance(Conical(1), 0, 0.5) - math.log(3)) < 1e-14
    assert abs(radial_distance(Cusp(), math.exp(-2), math.exp(-1)) - math.log(2)) < 1e-14
    for k in (10, 100):
        assert abs(radial_distance(Cusp(), math.exp(-k), math.exp(-1)) - math.log(k)) < 1e-12
    for k in (10, 100, 1000, 10**9):
        assert abs(radial_distance_log(Cusp(), -k, -1) - math.log(k)) < 1e-12
    with pytest.raises(OutOfDomain):
        radial_distance(Cusp(), 0, 0.5)


@pytest.mark.parametrize("alpha", ALPHAS)
def test_radial_distance_against_quadrature(alpha):
    for r1, r2 in [(0, 0.3), (0.1, 0.5), (0.2, 0.9)]:
        assert abs(radial_distance(Conical(alpha), r1, r2) - conical_distance_quad(alpha, r1, r2)) < 1e-8


def test_cusp_distance_against_quadrature_and_monotone():
    prev = None
    for r in [0.5, 0.1, 1e-3, 1e-6, 1e-12]:
        d = radial_distance(Cusp(), r, math.exp(-1)) if r < math.exp(-1) else None
        if d is None:
            continue
        assert abs(d - cusp_distance_quad(r, math.exp(-1))) < 1e-8
        if prev is not None:
            assert d > prev
        prev = d


def test_log_radius_variant_agrees():
    for kind in [Conical(0.5), Conical(2), Cusp()]:
        assert radial_distance_log(kind, math.log(0.1), math.log(0.6)) == pytest.approx(radial_distance(kind, 0.1, 0.6), rel=1e-13)


def test_conical_distance_bounded():
    for a in ALPHAS:
        d = radial_distance(Conical(a), 0, 0.5)
        assert d == pytest.approx(math.log((1 + 0.5**a) / (1 - 0.5**a)), rel=1e-14)


def test_gauss_bonnet_examples():
    assert not gauss_bonnet_admissible(Divisor(0, [0.5, 0.5, 0.5]))
    assert gauss_bonnet_admissible(Divisor(1, [0]))
    assert not gauss_bonnet_admissible(Divisor(0, [0, 0]))
    with pytest.raises(ValueError):
        Divisor(0, [1])
    with pytest.raises(ValueError):
        Divisor(-1, [])


def test_sample_grid_nan_outside():
    rows = sample_grid(Conical(0.5), [0.5, 1.2, 0])
    assert math.isfinite(rows[0][3])
    assert all(math.isnan(v) for v in rows[1][2:])
    assert all(math.isnan(v) for v in rows[2][2:])


def test_grid_ordering():
    pts = annular_points(0.1, 0.5, 2, 3)
    assert len(pts) == 6 and abs(abs(pts[2]) - 0.1) < 1e-15 and abs(abs(pts[3]) - 0.5) < 1e-15
    pts = cartesian_points((0, 1), (0, 2), 2, 3)
    assert pts[:3] == [0j, 1 + 0j, 1j]
