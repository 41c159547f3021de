import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from duplexqm import interference as itf
from duplexqm.algebra2d import Kind

E, H = Kind.ELLIPTIC, Kind.HYPERBOLIC


def test_phase_difference():
    g = itf.SlitGeometry(0.01, 1.0, (-1, 1))
    assert itf.phase_difference(0.0, g) == 0
    assert itf.phase_difference(1.0, g) == pytest.approx(0.01)
    assert itf.phase_difference(2.0, g) == 2 * itf.phase_difference(1.0, g)


def test_geometry_validation():
    with pytest.warns(UserWarning):
        itf.SlitGeometry(0.5, 1.0, (-1, 1))
    with pytest.raises(ValueError):
        itf.SlitGeometry(-1, 1, (0, 1))
    with pytest.raises(ValueError):
        itf.SlitGeometry(0.01, 1, (1, 0))


def test_intensity_examples():
    assert itf.two_beam_intensity(E, 0) == pytest.approx(4, abs=1e-15)
    assert itf.two_beam_intensity(H, 0) == pytest.approx(4, abs=1e-15)
    assert itf.two_beam_intensity(E, np.pi) == pytest.approx(0, abs=1e-15)
    assert itf.two_beam_intensity(H, np.pi) == pytest.approx(25.1839, abs=1e-3)
    assert itf.two_beam_intensity(H, np.pi) == pytest.approx(2 + 2 * np.cosh(np.pi), rel=1e-15)


def test_closed_forms_over_range():
    d = np.linspace(-10, 10, 4001)
    assert np.max(np.abs(itf.two_beam_intensity_array(E, d) - 4 * np.cos(d / 2) ** 2)) <= 1e-12
    ref = 4 * np.cosh(d / 2) ** 2
    assert np.max(np.abs(itf.two_beam_intensity_array(H, d) - ref) / ref) <= 1e-12


@given(st.floats(-10, 10), st.floats(-5, 5))
def test_base_phase_invariance(delta, c):
    for kind in (E, H):
        a = itf.two_beam_intensity(kind, delta)
        b = itf.two_beam_intensity(kind, delta, base_phase=c)
        assert abs(a - b) <= 1e-12 * max(1.0, a)


def test_periodicity_and_monotonicity():
    d = np.linspace(-10, 10, 2001)
    assert np.max(np.abs(itf.two_beam_intensity_array(E, d + 2 * np.pi) - itf.two_beam_intensity_array(E, d))) <= 1e-12
    pos = np.linspace(0, 10, 5001)
    Ih = itf.two_beam_intensity_array(H, pos)
    assert np.all(np.diff(Ih) > 0)
    assert np.array_equal(itf.two_beam_intensity_array(H, -pos), Ih)


def census(kind, n=4001):
    g = itf.SlitGeometry.for_delta_range(4 * np.pi)
    return itf.fringe_census(itf.pattern_scan(kind, g, n))


def test_elliptic_census_finds_dark_fringes():
    c = census(E)
    # zeros of cos(delta/2) in [-4 pi, 4 pi] are +-pi and +-3pi
    assert c.minima_left == 2 and c.minima_right == 2
    assert c.strict_zero_count == 4
    assert np.allclose(sorted(c.minima_delta), [-3 * np.pi, -np.pi, np.pi, 3 * np.pi], atol=4 * np.pi / 4000)
    assert not c.monotone_from_center


def test_hyperbolic_census_has_no_fringes():
    c = census(H)
    assert c.minima_count == 0 and c.strict_zero_count == 0
    assert c.monotone_from_center


def test_degenerate_window():
    g = itf.SlitGeometry.for_delta_range(0.0)
    p = itf.pattern_scan(E, g, 100)
    assert len(p.x) == 1 and p.intensity[0] == pytest.approx(4)
    c = itf.fringe_census(p)
    assert c.minima_count == 0
    with pytest.raises(ValueError):
        itf.pattern_scan(E, itf.SlitGeometry.for_delta_range(1.0), 8)


def test_pattern_columns_and_census_dict():
    p = itf.pattern_scan(H, itf.SlitGeometry.for_delta_range(1.0), 32)
    assert list(p.columns()) == ["x", "delta", "intensity"]
    d = census(E, 801).to_dict()
    assert d["minima_count"] == 4 and len(d["minima_delta"]) == 4


def test_no_warning_for_default_geometry():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        itf.SlitGeometry.for_delta_range(4 * np.pi)
