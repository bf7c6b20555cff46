"""Object wave, reference wave, and noisy hologram (intensity) sampling.

A hologram is the squared modulus of the superposed reference + object
signal at one array unit and instant. With complex Gaussian noise of
variance sigma2 added to the superposition, each sample is non-central
chi-squared with 2 degrees of freedom, non-centrality |mu(t)|^2 and scale
sigma2 / 2.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError


@dataclass(frozen=True)
class ReferenceWave:
    """Surface-generated sinusoid: amplitude * exp(j 2 pi frequency t)."""

    amplitude: float
    frequency: float

    def __post_init__(self):
        if self.amplitude <= 0.0:
            raise ConfigError("reference: amplitude must be positive")


def phase_step(ref, grid):
    """Reference-vs-object phase advance over one symbol period."""
    return 2.0 * np.pi * (ref.frequency - grid.carrier) * grid.symbol_period


def reference_for_phase_step(grid, delta, amplitude):
    """Reference wave whose per-symbol phase step equals delta."""
    return ReferenceWave(
        amplitude=amplitude,
        frequency=grid.carrier + delta / (2.0 * np.pi * grid.symbol_period),
    )


def object_wave(h_row, grid, t):
    """Multi-subcarrier sum sum_k h_k exp(j 2 pi f_k t) at time(s) t."""
    h_row = np.asarray(h_row, dtype=np.complex128)
    times = np.atleast_1d(np.asarray(t, dtype=np.float64))
    out = np.exp(2j * np.pi * np.outer(times, grid.frequencies)) @ h_row
    if np.ndim(t) == 0:
        return complex(out[0])
    return out


def reference_wave(ref, t):
    """Reference value(s) at time(s) t."""
    out = ref.amplitude * np.exp(2j * np.pi * ref.frequency * np.asarray(t, dtype=np.float64))
    if np.ndim(t) == 0:
        return complex(out)
    return out


def hologram_intensity(e_r, e_o):
    """Exact squared modulus |e_r + e_o|^2."""
    s = np.asarray(e_r) + np.asarray(e_o)
    out = s.real**2 + s.imag**2
    if out.ndim == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class HologramRecord:
    """2L intensity samples for one unit: instants l T_s / L for l = 0..L-1
    plus the same instants one symbol period later."""

    unit: tuple
    sample_times: np.ndarray
    intensities: np.ndarray
    noise_variance: float
    samples_per_symbol: int

    def __post_init__(self):
        object.__setattr__(self, "sample_times", np.asarray(self.sample_times, dtype=np.float64))
        object.__setattr__(self, "intensities", np.asarray(self.intensities, dtype=np.float64))
        if self.intensities.size != 2 * self.samples_per_symbol:
            raise ValueError("hologram record must hold exactly 2L intensities")
        if self.sample_times.size != self.intensities.size:
            raise ValueError("sample_times and intensities must have equal length")
        if np.any(self.intensities < 0.0):
            raise ValueError("intensities must be nonnegative")
        if self.noise_variance < 0.0:
            raise ValueError("noise_variance must be nonnegative")


def hologram_sample_times(samples_per_symbol, grid):
    """The 2L detection instants spanning two symbol periods."""
    first = np.arange(samples_per_symbol) * grid.symbol_period / samples_per_symbol
    return np.concatenate([first, first + grid.symbol_period])


def sample_holograms(h_row, grid, ref, samples_per_symbol, noise_variance, rng=None, unit=(0, 0)):
    """Record 2L noisy intensities |E_r + E_o + w|^2 for one unit.

    The noise w is an independent circularly-symmetric complex Gaussian draw
    of variance noise_variance per sample; with zero variance the record is
    exactly the noiseless intensities and rng may be omitted.
    """
    if samples_per_symbol < 1:
        raise ValueError("samples_per_symbol must be at least 1")
    if noise_variance < 0.0:
        raise ValueError("noise_variance must be nonnegative")
    times = hologram_sample_times(samples_per_symbol, grid)
    field = reference_wave(ref, times) + object_wave(h_row, grid, times)
    if noise_variance > 0.0:
        if rng is None:
            raise ValueError("rng required when noise_variance > 0")
        scale = np.sqrt(0.5 * noise_variance)
        field = field + scale * (rng.standard_normal(times.size) + 1j * rng.standard_normal(times.size))
    return HologramRecord(
        unit=tuple(unit),
        sample_times=times,
        intensities=field.real**2 + field.imag**2,
        noise_variance=noise_variance,
        samples_per_symbol=samples_per_symbol,
    )


def hologram_records_to_csv(records, path):
    """Debug export, one row per sample: unit_m, unit_n, l, t_seconds, intensity."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("unit_m,unit_n,l,t_seconds,intensity\n")
        for rec in records:
            m, n = rec.unit
            for l, (t, val) in enumerate(zip(rec.sample_times, rec.intensities)):
                fh.write(f"{m},{n},{l},{t:.12g},{val:.12g}\n")
