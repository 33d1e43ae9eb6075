import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from xlirs.channel import ConfigurationError, Scenario, _prefactor, exact_max_snr, miso_exact_max_snr
from xlirs.geometry import BsArray, Direction, IrsPanel, Placement, odd_count_for
from xlirs.miso_analysis import bound_function_U, closed_U_half, miso_bounds, miso_integral_snr
from xlirs.numerics import integrate_1d
from xlirs.pattern import GainPattern
from xlirs.ula_analysis import (ApplicabilityWarning, angular_span, elliptic_constant, ula_asymptotic_snr,
                                ula_closed_snr, ula_integral_snr)
from xlirs.upw_model import UpwParams, array_factor, default_reference_gain, upw_snr

LAM = 0.125
D = LAM / 3


def fig8(length_z, q=0.5):
    return Scenario(LAM, 1e12, IrsPanel(1, odd_count_for(length_z, D), D), GainPattern(q),
                    Placement.from_angles(10, math.pi / 3, math.pi / 6),
                    Placement.from_angles(100, 3 * math.pi / 4, -math.pi / 5))


def fig9(length, n=3, user=(10, math.pi / 2, 0)):
    bs = Placement.from_angles(1000, math.pi / 3, -math.pi / 4)
    return Scenario(LAM, 1e9, IrsPanel.from_size(length, length, D), GainPattern(0.5), bs,
                    Placement.from_angles(*user), BsArray(n, n, LAM / 2, bs))


class TestAngularSpan:
    def test_hand_example(self):
        span = angular_span(10.0, math.pi / 3, 20.0)
        assert span.alpha1 == pytest.approx(math.pi / 3, rel=1e-12)
        assert span.alpha2 == pytest.approx(math.pi / 6, rel=1e-12)

    def test_symmetric_at_broadside(self):
        span = angular_span(10.0, math.pi / 2, 8.0)
        assert span.alpha1 == pytest.approx(math.atan(0.4))
        assert span.alpha2 == pytest.approx(span.alpha1)

    def test_long_line_limit(self):
        span = angular_span(10.0, math.pi / 3, 1e9)
        assert span.total == pytest.approx(math.pi, rel=1e-7)

    @settings(max_examples=40, deadline=None)
    @given(st.floats(1, 100), st.floats(0.2, 2.9), st.floats(1, 100), st.floats(1.01, 3))
    def test_monotone(self, r, zen, length, grow):
        a, b = angular_span(r, zen, length), angular_span(r, zen, length * grow)
        assert b.alpha1 >= a.alpha1 and b.alpha2 >= a.alpha2
        c = angular_span(r * grow, zen, length)
        assert c.alpha1 <= a.alpha1 + 1e-15 or c.alpha2 <= a.alpha2 + 1e-15

    def test_domain(self):
        with pytest.raises(ValueError):
            angular_span(10.0, 0.0, 5.0)


class TestUla:
    def test_elliptic_constant(self):
        assert elliptic_constant() == pytest.approx(1.7188, abs=1e-3)

    def test_asymptote_value(self):
        scn = fig8(10)
        psi_p = math.sin(3 * math.pi / 4) * math.cos(-math.pi / 5)
        expected = elliptic_constant() * LAM ** 4 * 1e12 * psi_p * math.cos(math.pi / 6) / (
            math.pi ** 4 * D ** 2 * 100 ** 2)
        assert ula_asymptotic_snr(scn) == pytest.approx(expected, rel=1e-14)
        assert ula_asymptotic_snr(scn) == pytest.approx(1.229e5, rel=1e-3)

    @pytest.mark.parametrize("length", [1, 5, 20, 200])
    def test_integral_matches_summation(self, length):
        scn = fig8(length)
        assert ula_integral_snr(scn) == pytest.approx(exact_max_snr(scn), rel=0.01)

    @pytest.mark.parametrize("length", [1, 2, 5, 10, 20])
    def test_closed_form_near_summation(self, length):
        scn = fig8(length)
        assert ula_closed_snr(scn) == pytest.approx(exact_max_snr(scn), rel=0.05)

    def test_closed_form_below_asymptote_and_monotone(self):
        # the approach is like sqrt(r / L), hence the very long last line
        vals = [ula_closed_snr(fig8(L)) for L in (1, 3, 10, 30, 100, 1000, 1e10)]
        assert all(a <= b for a, b in zip(vals, vals[1:]))
        assert vals[-1] <= ula_asymptotic_snr(fig8(1))
        assert vals[-1] == pytest.approx(ula_asymptotic_snr(fig8(1)), rel=1e-3)

    def test_closed_form_matches_near_only_integral(self):
        # with the far-end kernel frozen at 1, the closed form is exact
        scn = fig8(50)
        q = scn.bs
        f = lambda z: (1 - 2 * z * q.theta / q.range + z * z / q.range ** 2) ** -0.75
        val = _prefactor(scn) / D ** 2 * integrate_1d(f, -25.0, 25.0, 1e-12).value ** 2
        assert ula_closed_snr(scn) == pytest.approx(val, rel=2e-3)

    def test_needs_single_column(self):
        scn = fig8(5).replace(panel=IrsPanel(3, 3, D))
        with pytest.raises(ConfigurationError):
            ula_integral_snr(scn)

    def test_needs_cosine_pattern(self):
        with pytest.raises(ConfigurationError):
            ula_closed_snr(fig8(5, q=1.0))

    def test_ratio_warning(self):
        scn = fig8(5).replace(user=Placement.from_angles(20, 3 * math.pi / 4, -math.pi / 5))
        with pytest.warns(ApplicabilityWarning):
            ula_closed_snr(scn)

    def test_swapped_roles(self):
        scn = fig8(10)
        # the nearer end takes the BS role whichever side it is
        assert ula_closed_snr(scn.swapped()) == pytest.approx(ula_closed_snr(scn), rel=1e-14)


class TestMiso:
    def test_integral_matches_summation(self):
        scn = fig9(4)
        assert miso_integral_snr(scn) == pytest.approx(miso_exact_max_snr(scn), rel=0.01)

    def test_linear_in_antennas(self):
        a, b = miso_exact_max_snr(fig9(2, 1)), miso_exact_max_snr(fig9(2, 3))
        assert b == pytest.approx(9 * a, rel=1e-13)

    @pytest.mark.parametrize("length", [1, 2, 4, 8])
    def test_numeric_bounds_sandwich(self, length):
        scn = fig9(length)
        lo, hi = miso_bounds(scn)
        assert lo <= miso_integral_snr(scn) <= hi

    @pytest.mark.parametrize("length", [1, 2, 4, 8])
    def test_closed_bounds_contain_summation(self, length):
        scn = fig9(length)
        lo, hi = miso_bounds(scn, closed=True)
        assert lo * 0.985 <= miso_exact_max_snr(scn) <= hi * 1.015

    @pytest.mark.parametrize("radius", [0.3, 2.0, 9.0])
    def test_closed_matches_quadrature(self, radius):
        scn = fig9(4)
        assert closed_U_half(scn, radius) == pytest.approx(bound_function_U(scn, radius, 1e-11), rel=1e-8)

    def test_rationalized_radius(self):
        scn = fig9(4)
        base = 9 * 1e9 * LAM ** 4 * 16 * scn.bs.psi * 100 / (16 * math.pi ** 2 * D ** 4 * 1000 ** 2)
        assert closed_U_half(scn, 10 * math.sqrt(15)) == pytest.approx(base, rel=1e-12)

    def test_zero_radius(self):
        assert closed_U_half(fig9(2), 0.0) == 0.0
        assert bound_function_U(fig9(2), 0.0) == 0.0

    def test_unbounded_growth(self):
        scn = fig9(2)
        assert closed_U_half(scn, 1e6) > 100 * closed_U_half(scn, 1e3)

    def test_off_axis_user_warns(self):
        scn = fig9(4, user=(10, math.pi / 3, 0.4))
        with pytest.warns(ApplicabilityWarning):
            closed_U_half(scn, 1.0)


class TestUpw:
    def test_broadside_factor(self):
        assert array_factor(IrsPanel(7, 5, D), Direction(math.pi / 2, 0.0), LAM) == pytest.approx(1.0)

    def test_first_null(self):
        panel = IrsPanel(9, 1, D)
        phi = LAM / (9 * D)
        zen = math.pi / 2
        az = math.asin(phi)
        assert array_factor(panel, Direction(zen, az), LAM) == pytest.approx(0.0, abs=1e-12)

    @settings(max_examples=40, deadline=None)
    @given(st.floats(0.1, 3.0), st.floats(-1.5, 1.5), st.sampled_from([1, 3, 7, 15]), st.sampled_from([1, 5, 9]))
    def test_matches_phase_sum(self, zen, az, m_y, m_z):
        panel = IrsPanel(m_y, m_z, D)
        d = Direction(zen, az)
        iy, iz = panel.indices()
        k = 2 * math.pi / LAM
        direct = abs(np.sum(np.exp(1j * k * D * (iy * d.phi + iz * d.theta)))) / panel.count
        assert abs(array_factor(panel, d, LAM)) == pytest.approx(direct, rel=1e-9, abs=1e-12)

    def test_worked_example(self):
        scn = Scenario(LAM, 1e9, IrsPanel(3, 3, D), GainPattern(0.5), Placement.from_angles(10, math.pi / 2, 0),
                       Placement.from_angles(100, math.pi / 2, 0))
        assert upw_snr(scn) == pytest.approx(0.012688, rel=1e-4)
        assert upw_snr(scn) == pytest.approx(exact_max_snr(scn), rel=0.005)

    def test_square_law(self):
        base = Scenario(LAM, 1e9, IrsPanel(5, 5, D), GainPattern(0.5), Placement.from_angles(10, math.pi / 2, 0),
                        Placement.from_angles(100, math.pi / 2, 0))
        bigger = base.replace(panel=IrsPanel(5, 25, D))
        assert upw_snr(bigger) == pytest.approx(25 * upw_snr(base), rel=1e-12)

    def test_reference_gain(self):
        scn = Scenario(LAM, 1e9, IrsPanel(3, 3, D), GainPattern(0.5), Placement.from_angles(10, math.pi / 2, 0),
                       Placement.from_angles(100, math.pi / 2, 0))
        beta = default_reference_gain(LAM)
        assert upw_snr(scn, UpwParams(2 * beta)) == pytest.approx(4 * upw_snr(scn), rel=1e-14)
        with pytest.raises(ValueError):
            UpwParams(0.0)
