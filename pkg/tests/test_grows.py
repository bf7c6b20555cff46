import math

import numpy as np
import pytest

from holosense import (
    ConfigError,
    GrowsSettings,
    crlb_matrix,
    derotate,
    extract_channel,
    grows_estimate,
    information_matrices,
    likelihood_context,
    object_wave,
    recover_sequence,
    reference_for_phase_step,
    sample_holograms,
)
from holosense.channel import FrequencyGrid
from tests.conftest import make_grid, random_channel


def noiseless_setup(rng, n_f=8, samples=None, k_factor=4.0):
    samples = samples or n_f
    grid = make_grid(n_f)
    h = random_channel(rng, n_f)
    times = np.arange(samples) * grid.symbol_period / samples
    peak = np.max(np.abs(object_wave(h, grid, np.concatenate([times, times + grid.symbol_period]))))
    ref = reference_for_phase_step(grid, math.pi / 2, k_factor * float(peak))
    record = sample_holograms(h, grid, ref, samples, 0.0)
    return grid, h, ref, record


class TestRecoverSequence:
    def test_noiseless_round_trip(self, rng):
        grid, h, ref, record = noiseless_setup(rng)
        seq = recover_sequence(record, GrowsSettings(8, grid, ref))
        expected = object_wave(h, grid, record.sample_times[:8])
        np.testing.assert_allclose(seq, expected, atol=1e-9)

    def test_zero_channel(self):
        grid = make_grid(4)
        ref = reference_for_phase_step(grid, math.pi / 2, 1.0)
        record = sample_holograms(np.zeros(4), grid, ref, 4, 0.0)
        seq = recover_sequence(record, GrowsSettings(4, grid, ref))
        np.testing.assert_allclose(seq, 0.0, atol=1e-9)

    def test_heavy_noise_stays_finite_and_clamps(self, rng):
        grid = make_grid(4)
        h = random_channel(rng, 4)
        ref = reference_for_phase_step(grid, math.pi / 2, 0.5)
        record = sample_holograms(h, grid, ref, 64, 50.0, rng)  # noise >> A_r^2
        est = grows_estimate(record, GrowsSettings(64, grid, ref))
        assert np.all(np.isfinite(est.h_hat))
        assert est.clamps > 0

    def test_wrong_record_length(self, rng):
        grid, h, ref, record = noiseless_setup(rng, n_f=4)
        with pytest.raises(ValueError):
            recover_sequence(record, GrowsSettings(8, make_grid(4), ref))


class TestDerotate:
    def test_integer_carrier_cycles_identity(self, rng):
        # f_c T_s = 1 when the carrier equals the subcarrier spacing
        grid = FrequencyGrid(carrier=30e3, subcarrier_count=2, symbol_period=1 / 30e3)
        seq = random_channel(rng, 6)
        np.testing.assert_allclose(derotate(seq, grid), seq, rtol=1e-12)

    def test_quarter_bin_rotation(self):
        length = 8
        grid = FrequencyGrid(carrier=(1 + length / 4) * 30e3, subcarrier_count=2, symbol_period=1 / 30e3)
        out = derotate(np.ones(length, complex), grid)
        expected = np.exp(-1j * math.pi * np.arange(length) / 2)
        np.testing.assert_allclose(out, expected, atol=1e-12)

    def test_preserves_modulus(self, rng):
        grid = make_grid(4)
        seq = random_channel(rng, 16)
        np.testing.assert_allclose(np.abs(derotate(seq, grid)), np.abs(seq), rtol=1e-12)


class TestExtractChannel:
    def test_single_tone(self):
        length = 16
        p = np.exp(2j * math.pi * np.arange(length) / length)
        out = extract_channel(p, 1)
        assert out[0] == pytest.approx(1.0, abs=1e-12)

    def test_zero_sequence(self):
        np.testing.assert_array_equal(extract_channel(np.zeros(8, complex), 4), np.zeros(4))

    def test_dft_inversion_oracle(self, rng):
        n_f, length = 5, 9
        h = random_channel(rng, n_f)
        l = np.arange(length)
        p = sum(h[k - 1] * np.exp(2j * math.pi * k * l / length) for k in range(1, n_f + 1))
        np.testing.assert_allclose(extract_channel(p, n_f), h, rtol=1e-10, atol=1e-12)

    def test_direct_summation_oracle(self, rng):
        # independent O(L^2) DFT against the FFT path
        length, n_f = 12, 12
        p = random_channel(rng, length)
        direct = np.array(
            [sum(p[l] * np.exp(-2j * math.pi * k * l / length) for l in range(length)) / length
             for k in range(1, n_f + 1)]
        )
        np.testing.assert_allclose(extract_channel(p, n_f), direct, atol=1e-12)

    def test_too_few_samples(self):
        with pytest.raises(ValueError):
            extract_channel(np.zeros(4, complex), 5)


class TestGrowsEstimate:
    @pytest.mark.parametrize("n_f,samples", [(8, 8), (8, 20), (132, 132)])
    def test_noiseless_exactness(self, rng, n_f, samples):
        grid, h, ref, record = noiseless_setup(rng, n_f=n_f, samples=samples)
        est = grows_estimate(record, GrowsSettings(samples, grid, ref))
        assert np.linalg.norm(est.h_hat - h) / np.linalg.norm(h) < 1e-9
        assert est.clamps == 0

    def test_settings_require_enough_samples(self):
        grid = make_grid(8)
        ref = reference_for_phase_step(grid, math.pi / 2, 1.0)
        with pytest.raises(ConfigError):
            GrowsSettings(4, grid, ref)

    def test_determinism(self):
        rng1 = np.random.default_rng(11)
        rng2 = np.random.default_rng(11)
        out = []
        for r in (rng1, rng2):
            grid = make_grid(6)
            h = random_channel(r, 6)
            ref = reference_for_phase_step(grid, math.pi / 2, 2.0)
            record = sample_holograms(h, grid, ref, 6, 0.05, r)
            out.append(grows_estimate(record, GrowsSettings(6, grid, ref)).h_hat)
        np.testing.assert_array_equal(out[0], out[1])

    def test_nmse_tracks_crlb_floor_at_snr20(self, rng):
        # 200-trial Monte Carlo average within 3 dB of the bound
        n_f = 8
        grid = make_grid(n_f)
        h = random_channel(rng, n_f)
        times = np.concatenate([np.arange(n_f), np.arange(n_f) + n_f]) * grid.symbol_period / n_f
        e_o = object_wave(h, grid, times)
        a_r = 4.0 * float(np.max(np.abs(e_o)))
        sigma2 = float(np.mean(np.abs(e_o) ** 2)) / 100.0
        ref = reference_for_phase_step(grid, math.pi / 2, a_r)
        settings = GrowsSettings(n_f, grid, ref)
        errors = []
        for _ in range(200):
            record = sample_holograms(h, grid, ref, n_f, sigma2, rng)
            est = grows_estimate(record, settings)
            errors.append(float(np.sum(np.abs(est.h_hat - h) ** 2)))
        noiseless = sample_holograms(h, grid, ref, n_f, 0.0)
        ctx = likelihood_context(
            type(noiseless)(
                unit=noiseless.unit,
                sample_times=noiseless.sample_times,
                intensities=noiseless.intensities,
                noise_variance=sigma2,
                samples_per_symbol=n_f,
            ),
            grid,
            ref,
        )
        report = crlb_matrix(*information_matrices(h, ctx))
        nmse_db = 10 * math.log10(np.mean(errors) / np.sum(np.abs(h) ** 2))
        floor_db = 10 * math.log10(report.trace_floor / np.sum(np.abs(h) ** 2))
        assert abs(nmse_db - floor_db) < 3.0
