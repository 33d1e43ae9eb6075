import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from xlirs.geometry import (BsArray, Direction, IrsPanel, Placement, boresight_margin, distance_ratio,
                            element_distance, element_position, miso_element_distance, odd_count_for)

angles = st.tuples(st.floats(0.05, math.pi - 0.05), st.floats(-1.5, 1.5))


def test_direction_cosines_boresight():
    d = Direction(math.pi / 2, 0.0)
    assert d.psi == pytest.approx(1.0)
    assert d.phi == pytest.approx(0.0)
    assert d.theta == pytest.approx(0.0, abs=1e-16)


def test_direction_cosines_generic():
    d = Direction(math.pi / 3, math.pi / 6)
    assert d.psi == pytest.approx(math.sin(math.pi / 3) * math.cos(math.pi / 6))
    assert d.phi == pytest.approx(math.sin(math.pi / 3) * math.sin(math.pi / 6))
    assert d.theta == pytest.approx(0.5)


@settings(max_examples=50, deadline=None)
@given(angles)
def test_direction_is_unit(a):
    d = Direction(*a)
    assert d.psi ** 2 + d.phi ** 2 + d.theta ** 2 == pytest.approx(1.0, rel=1e-14)


@pytest.mark.parametrize("zen, az", [(-0.1, 0.0), (3.2, 0.0), (1.0, 1.7)])
def test_direction_range_checks(zen, az):
    with pytest.raises(ValueError):
        Direction(zen, az)


def test_placement_point():
    p = Placement.from_angles(10.0, math.pi / 2, 0.0)
    np.testing.assert_allclose(p.point, [10.0, 0.0, 0.0], atol=1e-14)


def test_placement_rejects_nonpositive_range():
    with pytest.raises(ValueError):
        Placement.from_angles(0.0, 1.0, 0.0)


def test_odd_count():
    assert odd_count_for(8.0, 0.125 / 3) == 193
    assert odd_count_for(0.01, 0.125 / 3) == 1
    for L in np.linspace(0.1, 50, 37):
        assert odd_count_for(L, 0.04) % 2 == 1


def test_panel_basic():
    panel = IrsPanel(3, 5, 0.1)
    assert panel.count == 15
    assert (panel.half_y, panel.half_z) == (1, 2)
    assert panel.length_y == pytest.approx(0.3)
    assert panel.inscribed_radius == pytest.approx(0.15)
    assert panel.circumscribed_radius == pytest.approx(math.hypot(0.3, 0.5) / 2)
    iy, iz = panel.indices()
    assert iy.shape == (5, 3)
    assert iy.min() == -1 and iz.max() == 2


def test_panel_needs_odd_counts():
    with pytest.raises(ValueError):
        IrsPanel(4, 3, 0.1)


def test_panel_index_check():
    panel = IrsPanel(3, 3, 0.1)
    with pytest.raises(IndexError):
        panel.check_index(2, 0)


def test_element_position():
    np.testing.assert_allclose(element_position(IrsPanel(5, 5, 0.1), 2, -1), [0.0, 0.2, -0.1])


@settings(max_examples=50, deadline=None)
@given(angles, st.floats(1.0, 200.0), st.integers(-20, 20), st.integers(-20, 20))
def test_element_distance_matches_euclid(a, r, iy, iz):
    src = Placement.from_angles(r, *a)
    panel = IrsPanel(41, 41, 0.05)
    direct = np.linalg.norm(src.point - element_position(panel, iy, iz))
    assert element_distance(src, panel, iy, iz) == pytest.approx(direct, rel=1e-12)


def test_miso_element_distance_matches_euclid():
    c = Placement.from_angles(30.0, 1.1, -0.4)
    arr = BsArray(3, 5, 0.0625, c)
    panel = IrsPanel(9, 9, 0.04)
    for ny, nz, iy, iz in [(1, -2, 4, -3), (-1, 0, 0, 0), (0, 2, -4, 4)]:
        direct = np.linalg.norm(arr.antenna_position(ny, nz) - element_position(panel, iy, iz))
        assert miso_element_distance(arr, ny, nz, panel, iy, iz) == pytest.approx(direct, rel=1e-12)


def test_distance_ratio():
    assert distance_ratio(10, 100) == (0.1, "bs")
    assert distance_ratio(100, 10) == (0.1, "user")
    assert distance_ratio(5, 5) == (1.0, "bs")
    with pytest.raises(ValueError):
        distance_ratio(0, 1)


def test_boresight_margin():
    panel = IrsPanel.from_size(8, 8, 0.125 / 3)
    axis = Placement.from_angles(10, math.pi / 2, 0)
    assert boresight_margin(panel, axis, axis) == pytest.approx(0.0, abs=1e-15)
    tilted = Placement.from_angles(10, math.pi / 3, math.pi / 6)
    assert boresight_margin(panel, tilted, axis) > 0.1
