import math
import warnings

import numpy as np
import pytest

from xlirs import kernels
from xlirs.channel import (ChannelVector, ConfigurationError, FarFieldWarning, PhaseProfile, Scenario,
                           channel_vector, exact_max_snr, miso_channel_matrix, miso_exact_max_snr,
                           miso_optimal_phases, miso_received_snr, mrt_beamformer, optimal_phases,
                           rank_one_far_channel, received_snr, simulate, transmit_response)
from xlirs.geometry import BsArray, IrsPanel, Placement, element_position
from xlirs.pattern import COSINE, GainPattern

LAM = 0.125
D = LAM / 3


def scenario(length=1.0, q=0.5, bs=(10, math.pi / 2, 0), user=(100, math.pi / 2, 0), snr=1e9):
    return Scenario(LAM, snr, IrsPanel.from_size(length, length, D), GainPattern(q),
                    Placement.from_angles(*bs), Placement.from_angles(*user))


def brute_force_snr(scn):
    """Two-hop sum built from positions, Friis and the pattern at the true angles."""
    total = 0.0
    for iy in range(-scn.panel.half_y, scn.panel.half_y + 1):
        for iz in range(-scn.panel.half_z, scn.panel.half_z + 1):
            e = element_position(scn.panel, iy, iz)
            amp = 1.0
            for src in (scn.bs, scn.user):
                v = src.point - e
                r = np.linalg.norm(v)
                g = scn.pattern.peak_gain * (v[0] / r) ** (2 * scn.pattern.q)
                amp *= math.sqrt(g) * LAM / (4 * math.pi * r)
            total += amp
    return scn.transmit_snr * total ** 2


class TestScenario:
    def test_spacing_limit(self):
        with pytest.raises(ValueError, match="spacing exceeds half wavelength"):
            Scenario(LAM, 1e9, IrsPanel(3, 3, 0.1), COSINE,
                     Placement.from_angles(10, 1.5, 0), Placement.from_angles(10, 1.5, 0))

    def test_transmit_snr_positive(self):
        with pytest.raises(ValueError):
            scenario(snr=0.0)

    def test_behind_surface(self):
        with pytest.raises(ValueError):
            scenario(bs=(10, 0.0, 0.0))

    def test_db(self):
        assert scenario(snr=1e9).transmit_snr_db == pytest.approx(90.0)

    def test_replace_moves_array(self):
        bs = Placement.from_angles(500, 1.0, 0.2)
        scn = Scenario(LAM, 1e9, IrsPanel(3, 3, D), COSINE, bs, Placement.from_angles(10, 1.5, 0),
                       BsArray(3, 3, LAM / 2, bs))
        moved = scn.replace(bs=Placement.from_angles(800, 1.0, 0.2))
        assert moved.bs_array.center == moved.bs


class TestSiso:
    @pytest.mark.parametrize("q", [0.0, 0.5, 1.0])
    def test_exact_matches_brute_force(self, q):
        scn = scenario(0.4, q, bs=(3, 1.2, 0.4), user=(7, 2.0, -0.6))
        assert exact_max_snr(scn) == pytest.approx(brute_force_snr(scn), rel=1e-11)

    def test_optimal_phases_achieve_maximum(self):
        scn = scenario(0.6, 0.5, bs=(5, 1.2, 0.3), user=(20, 1.9, -0.4))
        assert received_snr(scn, optimal_phases(scn)) == pytest.approx(exact_max_snr(scn), rel=1e-10)

    def test_random_phases_are_worse(self):
        scn = scenario(0.5)
        rng = np.random.default_rng(0)
        best = received_snr(scn, optimal_phases(scn))
        for _ in range(20):
            assert received_snr(scn, PhaseProfile(rng.uniform(0, 2 * math.pi, scn.panel.count))) < best

    def test_phases_in_range(self):
        ph = optimal_phases(scenario(0.3)).phases
        assert ph.min() >= 0 and ph.max() < 2 * math.pi

    def test_profile_length_checked(self):
        with pytest.raises(ValueError):
            received_snr(scenario(0.3), PhaseProfile(np.zeros(4)))

    def test_channel_vector_side(self):
        with pytest.raises(ValueError):
            channel_vector(scenario(0.3), "ris")

    def test_single_element(self):
        scn = scenario(0.01, 0.5)
        expected = 1e9 * (LAM / (4 * math.pi)) ** 4 * 16 / (10 ** 2 * 100 ** 2)
        assert exact_max_snr(scn) == pytest.approx(expected, rel=1e-14)

    def test_reciprocity(self):
        scn = scenario(2.0, 1.0, bs=(8, 1.2, 0.3), user=(60, 1.9, -0.4))
        assert exact_max_snr(scn.swapped()) == pytest.approx(exact_max_snr(scn), rel=1e-13)

    def test_linear_in_power(self):
        a = exact_max_snr(scenario(1.0, snr=1e9))
        assert exact_max_snr(scenario(1.0, snr=2e9)) == pytest.approx(2 * a, rel=1e-14)


class TestKernels:
    @pytest.mark.parametrize("q", [0.0, 0.5, 1.0, 2.0, 0.3])
    def test_backends_agree(self, q):
        scn = scenario(5.0, q, bs=(6, 1.2, 0.3), user=(50, 1.9, -0.4))
        values = [exact_max_snr(scn, backend=b) for b in kernels.available_backends()]
        assert max(values) == pytest.approx(min(values), rel=1e-13)

    def test_thread_count_does_not_change_result(self):
        if "compiled" not in kernels.available_backends():
            pytest.skip("compiled backend not built")
        args = (D / 6, 0.3, 0.2, D / 50, -0.4, 0.1, 120, 120, 0.75)
        sums = [kernels.kernel_sum(*args, backend="compiled", threads=t) for t in (1, 2, 4)]
        assert sums[0] == sums[1] == sums[2]

    def test_unknown_backend(self):
        with pytest.raises(ValueError):
            kernels.kernel_sum(0.01, 0, 0, 0.01, 0, 0, 1, 1, 0.75, backend="gpu")

    def test_worker_count_env(self, monkeypatch):
        monkeypatch.setenv("XLIRS_THREADS", "3")
        assert kernels.worker_count() == 3
        monkeypatch.setenv("XLIRS_THREADS", "x")
        with pytest.raises(ValueError):
            kernels.worker_count()


def miso_scenario(r_q=1000.0, length=1.0, user=(10, math.pi / 2, 0)):
    bs = Placement.from_angles(r_q, math.pi / 3, -math.pi / 4)
    return Scenario(LAM, 1e9, IrsPanel.from_size(length, length, D), COSINE, bs,
                    Placement.from_angles(*user), BsArray(3, 3, LAM / 2, bs))


class TestMiso:
    def test_requires_array(self):
        with pytest.raises(ConfigurationError):
            miso_channel_matrix(scenario(0.3))

    def test_matrix_shape_and_magnitude(self):
        scn = miso_scenario(length=0.3)
        H = miso_channel_matrix(scn)
        assert H.shape == (scn.panel.count, 9)
        far = LAM * math.sqrt(4 * scn.bs.psi) / (4 * math.pi * 1000)
        np.testing.assert_allclose(np.abs(H), far, rtol=1e-3)

    def test_rank_one_converges_with_distance(self):
        errs = []
        for r in (1e3, 1e4, 1e5):
            scn = miso_scenario(r, length=0.5)
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                H1 = rank_one_far_channel(scn)
            H = miso_channel_matrix(scn)
            errs.append(np.linalg.norm(H - H1) / np.linalg.norm(H))
        assert errs[0] > errs[1] > errs[2]
        assert errs[2] < 1e-3

    def test_far_field_warning(self):
        with pytest.warns(FarFieldWarning):
            rank_one_far_channel(miso_scenario(100.0, length=4.0))

    def test_mrt_unit_norm(self):
        v = mrt_beamformer(miso_scenario())
        assert np.linalg.norm(v) == pytest.approx(1.0)
        np.testing.assert_allclose(v, transmit_response(miso_scenario()) / 3)

    def test_exact_matches_rank_one_link(self):
        scn = miso_scenario(length=0.6)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            H = rank_one_far_channel(scn)
        v = mrt_beamformer(scn)
        direct = miso_received_snr(scn, miso_optimal_phases(scn, H, v), v, H)
        assert direct == pytest.approx(miso_exact_max_snr(scn), rel=1e-10)

    def test_shape_mismatch(self):
        scn = miso_scenario(length=0.3)
        with pytest.raises(ValueError):
            miso_received_snr(scn, PhaseProfile(np.zeros(3)), mrt_beamformer(scn))


class TestSimulation:
    def test_empirical_snr_converges(self):
        scn = scenario(0.3, snr=1e13)
        res = simulate(scn, optimal_phases(scn), 20000, seed=1)
        assert res.empirical_snr == pytest.approx(exact_max_snr(scn), rel=0.05)

    def test_noiseless(self):
        scn = scenario(0.3)
        res = simulate(scn, optimal_phases(scn), 10, seed=2, noiseless=True)
        np.testing.assert_allclose(np.abs(res.symbols), 1.0)
        assert np.all(res.noise == 0)

    def test_seeded(self):
        scn = scenario(0.3)
        a = simulate(scn, optimal_phases(scn), 50, seed=7)
        b = simulate(scn, optimal_phases(scn), 50, seed=7)
        np.testing.assert_array_equal(a.received, b.received)

    def test_bad_count(self):
        scn = scenario(0.3)
        with pytest.raises(ValueError):
            simulate(scn, optimal_phases(scn), 0, seed=0)


def test_channel_vector_container():
    cv = ChannelVector(np.ones(3, dtype=complex))
    assert len(cv) == 3
