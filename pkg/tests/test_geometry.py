import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nfsar.geometry import (
    C,
    ApertureGrid,
    PointScatterer,
    RadarParams,
    Scene,
    SignalCube,
    aperture_coordinate,
    build_wavenumber_grid,
    paper_preset,
)

# 2*pi*f/c evaluated with mpmath at 40 digits
K_77GHZ = 1613.800666902795
K_80_84GHZ = 1694.2811157457396


def test_speed_of_light_exact():
    assert C == 299792458.0


def test_single_wavenumber():
    radar = RadarParams(77e9, 3.84e9, 60e-6, num_k=1)
    k = build_wavenumber_grid(radar).k_values
    assert k.shape == (1,)
    assert k[0] == pytest.approx(K_77GHZ, abs=1e-9)


def test_two_point_grid_spans_band():
    radar = RadarParams(77e9, 3.84e9, 60e-6, num_k=2)
    k = build_wavenumber_grid(radar).k_values
    assert k[0] == pytest.approx(K_77GHZ, rel=1e-14)
    assert k[-1] == pytest.approx(K_80_84GHZ, rel=1e-14)


def test_three_point_mid_is_mean():
    k = build_wavenumber_grid(RadarParams(60e9, 7e9, 1e-4, num_k=3)).k_values
    assert k[1] == pytest.approx(0.5 * (k[0] + k[2]), rel=1e-15)


@given(
    f0=st.floats(1e9, 3e11),
    b=st.floats(1e6, 2e10),
    n=st.integers(2, 512),
)
def test_wavenumber_grid_uniform_and_increasing(f0, b, n):
    k = build_wavenumber_grid(RadarParams(f0, b, 1e-5, num_k=n)).k_values
    steps = np.diff(k)
    assert np.all(steps > 0)
    assert np.max(np.abs(steps - steps.mean())) / steps.mean() < 1e-9 * k[-1] / steps.mean()


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(f0=0, bandwidth=1e9, chirp_duration=1e-5),
        dict(f0=-1e9, bandwidth=1e9, chirp_duration=1e-5),
        dict(f0=77e9, bandwidth=math.inf, chirp_duration=1e-5),
        dict(f0=77e9, bandwidth=1e9, chirp_duration=0.0),
        dict(f0=math.nan, bandwidth=1e9, chirp_duration=1e-5),
        dict(f0=77e9, bandwidth=1e9, chirp_duration=1e-5, num_k=0),
        dict(f0=77e9, bandwidth=1e9, chirp_duration=1e-300),
    ],
)
def test_radar_params_rejects_invalid(kwargs):
    with pytest.raises(ValueError):
        RadarParams(**kwargs)


def test_aperture_coordinate_examples():
    g = ApertureGrid(nx=596, ny=69, dx=0.5e-3, dy=2e-3, x0=0.0, y0=-68e-3)
    assert aperture_coordinate(g, 0, 0) == (0.0, -68e-3)
    x, _ = aperture_coordinate(g, 595, 0)
    assert x == pytest.approx(297.5e-3, rel=1e-15)
    _, y = aperture_coordinate(g, 0, 68)
    assert y == pytest.approx(68e-3, abs=1e-15)


@pytest.mark.parametrize("ix,iy", [(-1, 0), (0, -1), (4, 0), (0, 3)])
def test_aperture_coordinate_out_of_range(ix, iy):
    with pytest.raises(IndexError):
        aperture_coordinate(ApertureGrid(4, 3, 1e-3, 1e-3), ix, iy)


@given(ix=st.integers(0, 510), dx=st.sampled_from([0.5e-3, 1e-3, 2e-3, 0.25e-3]))
def test_aperture_coordinate_affine(ix, dx):
    g = ApertureGrid(nx=512, ny=1, dx=dx, dy=1e-3, x0=0.0)
    x1, _ = aperture_coordinate(g, ix + 1, 0)
    x0, _ = aperture_coordinate(g, ix, 0)
    assert x1 - x0 == pytest.approx(dx, rel=1e-12)


def test_paper_preset():
    radar, ap = paper_preset()
    assert (radar.f0, radar.bandwidth, radar.chirp_duration, radar.num_k) == (77e9, 3.84e9, 60e-6, 64)
    assert (ap.nx, ap.dx, ap.ny, ap.dy) == (596, 0.5e-3, 69, 2e-3)
    assert radar.chirp_rate == pytest.approx(6.4e13, rel=1e-15)
    assert ap.span_x == pytest.approx(297.5e-3)
    assert ap.span_y == pytest.approx(136e-3)
    # within one spacing of the 29.8 cm x 13.8 cm aperture
    assert abs(ap.span_x - 0.298) <= ap.dx * (1 + 1e-9)
    assert abs(ap.span_y - 0.138) <= ap.dy * (1 + 1e-9)
    assert ap.extent_x == pytest.approx(0.298, rel=1e-12)
    assert ap.extent_y == pytest.approx(0.138, rel=1e-12)
    assert ap.center == pytest.approx((0.0, 0.0), abs=1e-15)
    assert radar.center_frequency == pytest.approx(78.92e9)


def test_aperture_rejects_invalid():
    with pytest.raises(ValueError):
        ApertureGrid(0, 1, 1e-3, 1e-3)
    with pytest.raises(ValueError):
        ApertureGrid(1, 1, -1e-3, 1e-3)
    with pytest.raises(ValueError):
        ApertureGrid(1, 1, 1e-3, 1e-3, x0=math.nan)


def test_scatterer_must_be_in_front():
    with pytest.raises(ValueError):
        PointScatterer(0, 0, 0.0)
    with pytest.raises(ValueError):
        PointScatterer(0, 0, -0.1)


def test_scene_positions_and_empty():
    assert Scene().positions().shape == (0, 3)
    s = Scene((PointScatterer(1, 2, 3, 1j), PointScatterer(4, 5, 6)))
    assert s.positions().tolist() == [[1, 2, 3], [4, 5, 6]]
    assert s.reflectivities().tolist() == [1j, 1]


def test_signal_cube_shape_and_finite():
    radar = RadarParams(77e9, 1e9, 1e-5, num_k=2)
    ap = ApertureGrid(3, 2, 1e-3, 1e-3)
    SignalCube(radar, ap, np.zeros((2, 2, 3)))
    with pytest.raises(ValueError):
        SignalCube(radar, ap, np.zeros((2, 3, 2)))
    bad = np.zeros((2, 2, 3), complex)
    bad[0, 0, 0] = np.nan
    with pytest.raises(ValueError):
        SignalCube(radar, ap, bad)
