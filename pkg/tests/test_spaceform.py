import math

import numpy as np
import pytest

from robinsphere.errors import GeometryError
from robinsphere.spaceform import (
    SpaceFormParams,
    ball_geometry,
    ball_perimeter,
    cn,
    gauss_legendre,
    radius_from_perimeter,
    sigma,
    sn,
    steiner_L,
)


def test_sn_piecewise_values():
    assert sn(1, math.pi / 2) == 1.0
    assert sn(0, 2.5) == 2.5
    assert sn(-1, 1.0) == math.sinh(1.0)
    assert cn(1, 0.0) == 1.0
    assert cn(0, 17.3) == 1.0
    assert cn(-1, 1.0) == math.cosh(1.0)


def test_sn_cn_pythagorean_identity():
    ts = np.linspace(0.0, 3.0, 301)
    for kappa in (-1, 0, 1):
        for t in ts:
            lhs = cn(kappa, t) ** 2 + kappa * sn(kappa, t) ** 2
            assert abs(lhs - 1.0) <= 1e-14 * max(1.0, cn(kappa, t) ** 2)


def test_steiner_L_zeroth_is_one():
    assert steiner_L(0, SpaceFormParams(1, 2), 3.2) == 1.0
    assert steiner_L(0, SpaceFormParams(-1, 5), 0.0) == 1.0


@pytest.mark.parametrize("s", [0.2, 0.7, 1.3])
def test_steiner_L_closed_forms_on_sphere(s):
    # j=1: integral of cn^(n-1); n=2 gives sin, n=3 gives s/2 + sin(2s)/4
    assert steiner_L(1, SpaceFormParams(1, 2), s) == pytest.approx(math.sin(s), abs=1e-12)
    assert steiner_L(1, SpaceFormParams(1, 3), s) == pytest.approx(
        s / 2.0 + math.sin(2.0 * s) / 4.0, abs=1e-12
    )
    assert steiner_L(2, SpaceFormParams(1, 2), s) == pytest.approx(
        1.0 - math.cos(s), abs=1e-12
    )


@pytest.mark.parametrize("kappa,n,j", [(1, 3, 2), (-1, 3, 2), (-1, 4, 3), (0, 3, 3)])
def test_steiner_L_matches_direct_quadrature(kappa, n, j):
    params = SpaceFormParams(kappa, n)
    for t in (0.3, 0.9):
        direct = gauss_legendre(
            lambda s: cn(kappa, s) ** (n - j) * sn(kappa, s) ** (j - 1), 0.0, t
        )
        assert steiner_L(j, params, t) == pytest.approx(direct, abs=1e-10)


def test_steiner_L_rejects_out_of_range_j():
    with pytest.raises(GeometryError):
        steiner_L(4, SpaceFormParams(1, 3), 0.5)
    with pytest.raises(GeometryError):
        steiner_L(-1, SpaceFormParams(1, 3), 0.5)


def test_sigma_low_dimensions():
    assert sigma(2) == pytest.approx(2.0 * math.pi, abs=1e-14)
    assert sigma(3) == pytest.approx(4.0 * math.pi, abs=1e-13)
    assert sigma(4) == pytest.approx(2.0 * math.pi**2, abs=1e-12)
    with pytest.raises(GeometryError):
        sigma(1)


def test_sigma_recursive_quadrature_oracle():
    # A_{n-1} = A_{n-2} * int_0^pi sin^(n-2)
    acc = 2.0 * math.pi
    for n in range(3, 7):
        acc = acc * gauss_legendre(lambda t: math.sin(t) ** (n - 2), 0.0, math.pi)
        assert sigma(n) == pytest.approx(acc, rel=1e-11)


def test_ball_geometry_hemispheres():
    g2 = ball_geometry(2, math.pi / 2)
    assert g2.perimeter == pytest.approx(2.0 * math.pi, abs=1e-12)
    assert g2.volume == pytest.approx(2.0 * math.pi, abs=1e-10)
    g3 = ball_geometry(3, math.pi / 2)
    assert g3.perimeter == pytest.approx(4.0 * math.pi, abs=1e-12)


def test_ball_geometry_small_cap_quadrature_oracle():
    g = ball_geometry(2, 0.5)
    # boundary circle length by arc-length quadrature
    def speed(theta):
        return math.sin(0.5)

    oracle = gauss_legendre(speed, 0.0, 2.0 * math.pi)
    assert g.perimeter == pytest.approx(oracle, abs=1e-10)
    assert g.perimeter == pytest.approx(2.0 * math.pi * math.sin(0.5), abs=1e-12)


def test_ball_volume_monotone_in_radius():
    vols = [ball_geometry(3, r).volume for r in np.linspace(0.05, math.pi / 2, 12)]
    assert all(b > a for a, b in zip(vols, vols[1:]))


def test_ball_geometry_rejects_bad_radius():
    for r in (0.0, -0.3, math.pi / 2 + 1e-9):
        with pytest.raises(GeometryError):
            ball_geometry(2, r)


def test_radius_from_perimeter_examples():
    assert radius_from_perimeter(2, 2.0 * math.pi) == pytest.approx(math.pi / 2, abs=1e-11)
    assert radius_from_perimeter(2, math.pi) == pytest.approx(math.pi / 6, abs=1e-11)
    with pytest.raises(GeometryError):
        radius_from_perimeter(2, 7.0)
    with pytest.raises(GeometryError):
        radius_from_perimeter(2, 0.0)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_radius_perimeter_roundtrip(n):
    for r in np.linspace(0.01, math.pi / 2, 20):
        back = radius_from_perimeter(n, ball_perimeter(n, float(r)))
        assert back == pytest.approx(float(r), abs=1e-10)
