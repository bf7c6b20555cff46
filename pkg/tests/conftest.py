import math

import numpy as np
import pytest

from holosense import (
    FrequencyGrid,
    GrowsSettings,
    grows_estimate,
    hologram_sample_times,
    likelihood_context,
    object_wave,
    reference_for_phase_step,
    sample_holograms,
)

DEFAULT_SPACING = 30e3


def make_grid(n_f, carrier=3.5e9, spacing=DEFAULT_SPACING):
    return FrequencyGrid(carrier=carrier, subcarrier_count=n_f, symbol_period=1.0 / spacing)


def random_channel(rng, n_f, scale=0.2):
    return scale * (rng.standard_normal(n_f) + 1j * rng.standard_normal(n_f))


def make_instance(rng, n_f=3, samples=4, snr_db=10.0, k_factor=4.0, delta=math.pi / 2, h=None):
    """One unit's hologram record plus its likelihood context and truth."""
    grid = make_grid(n_f)
    h_true = random_channel(rng, n_f) if h is None else np.asarray(h, complex)
    times = hologram_sample_times(samples, grid)
    e_o = object_wave(h_true, grid, times)
    a_r = k_factor * float(np.max(np.abs(e_o)))
    sigma2 = float(np.mean(np.abs(e_o) ** 2)) / 10.0 ** (snr_db / 10.0)
    ref = reference_for_phase_step(grid, delta, a_r)
    record = sample_holograms(h_true, grid, ref, samples, sigma2, rng)
    ctx = likelihood_context(record, grid, ref)
    return ctx, record, grid, ref, h_true


def grows_for_record(record, grid, ref):
    return grows_estimate(record, GrowsSettings(record.samples_per_symbol, grid, ref))


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)
