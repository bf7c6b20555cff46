"""Geometric rotation-based object wave sensing: per-instant two-hologram
recovery, derotation to baseband bins, and L-point DFT extraction of the
per-subcarrier channel coefficients.

Exact for noiseless records whenever L >= N_f: the recovered sequence is
sum_k h_k exp(j 2 pi (k + f_c T_s - 1) l / L), so after derotation by
exp(-j 2 pi (f_c T_s - 1) l / L) coefficient k sits exactly on DFT bin
k mod L.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ConfigError, IllConditionedDeltaError
from .estimate import Estimate
from .holography import phase_step, reference_wave
from .recovery import CLAMP_RTOL, SIN_DELTA_TOLERANCE


@dataclass(frozen=True)
class GrowsSettings:
    samples_per_symbol: int
    grid: object
    ref: object

    def __post_init__(self):
        if self.samples_per_symbol < self.grid.subcarrier_count:
            raise ConfigError(
                "grows: samples_per_symbol must be >= subcarrier_count for "
                "unambiguous DFT-bin extraction"
            )


def _recover_sequence_counted(record, settings):
    L = settings.samples_per_symbol
    if record.intensities.size != 2 * L:
        raise ValueError("grows: record must hold exactly 2L samples")
    delta = phase_step(settings.ref, settings.grid)
    if abs(math.sin(delta)) <= SIN_DELTA_TOLERANCE:
        raise IllConditionedDeltaError("grows: |sin(delta)| below tolerance")
    q = 2.0 * abs(math.sin(0.5 * delta)) * settings.ref.amplitude
    e_r = reference_wave(settings.ref, record.sample_times[:L])
    return kernels.active.recover_pairs(
        np.ascontiguousarray(record.intensities[:L]),
        np.ascontiguousarray(record.intensities[L:]),
        np.ascontiguousarray(e_r),
        delta,
        q,
        CLAMP_RTOL,
    )


def recover_sequence(record, settings):
    """Object-wave samples at the L first-symbol instants.

    Pairs intensity l with intensity l + L; non-intersecting noisy pairs are
    clamped to the tangent point and recovery proceeds.
    """
    sequence, _ = _recover_sequence_counted(record, settings)
    return sequence


def derotate(e_o_seq, grid):
    """Remove the carrier-induced per-sample rotation so bin k holds h_k."""
    length = e_o_seq.size
    l = np.arange(length)
    f_c_ts = grid.carrier * grid.symbol_period
    return e_o_seq * np.exp(-2j * np.pi * (f_c_ts - 1.0) * l / length)


def extract_channel(p, n_subcarriers):
    """Per-subcarrier coefficients from DFT bins 1..N_f (mod L) of p."""
    length = p.size
    if length < n_subcarriers:
        raise ValueError("grows: need at least N_f samples to extract N_f bins")
    bins = np.arange(1, n_subcarriers + 1) % length
    return np.fft.fft(p)[bins] / length


def grows_estimate(record, settings):
    """Full pipeline: recover, derotate, extract; clamp count in diagnostics."""
    sequence, clamped = _recover_sequence_counted(record, settings)
    p = derotate(sequence, settings.grid)
    h_hat = extract_channel(p, settings.grid.subcarrier_count)
    return Estimate(h_hat=h_hat, method="grows", termination="closed_form", clamps=clamped)
