"""Wideband multipath channel synthesis over a planar array.

The channel matrix H(t) (units x subcarriers) factors as A diag{c_p(t)} B:
steering columns, per-path Doppler coefficients, and delay-response rows.
Unit (m, n) of an array with n_rows vertical units maps to row m * n_rows + n.
"""

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

SPEED_OF_LIGHT = 299792458.0


@dataclass(frozen=True)
class ArrayGeometry:
    """Planar array: n_rows (vertical) x n_cols (horizontal) radiating units."""

    n_rows: int
    n_cols: int
    spacing_v: float
    spacing_h: float
    carrier_wavelength: float

    def __post_init__(self):
        if self.n_rows < 1 or self.n_cols < 1:
            raise ConfigError("geometry: unit counts must be positive")
        if min(self.spacing_v, self.spacing_h, self.carrier_wavelength) <= 0.0:
            raise ConfigError("geometry: spacings and wavelength must be positive")

    @property
    def n_units(self):
        return self.n_rows * self.n_cols

    def unit_index(self, m, n):
        """Row index of unit (m, n): m counts columns, n counts rows."""
        return m * self.n_rows + n


@dataclass(frozen=True)
class FrequencyGrid:
    """OFDM grid: subcarrier k (1-based) sits at carrier + (k-1)/symbol_period."""

    carrier: float
    subcarrier_count: int
    symbol_period: float

    def __post_init__(self):
        if self.subcarrier_count < 1:
            raise ConfigError("grid: subcarrier_count must be positive")
        if self.symbol_period <= 0.0 or self.carrier <= 0.0:
            raise ConfigError("grid: carrier and symbol_period must be positive")

    @property
    def subcarrier_spacing(self):
        return 1.0 / self.symbol_period

    @property
    def frequencies(self):
        return self.carrier + np.arange(self.subcarrier_count) / self.symbol_period


@dataclass(frozen=True)
class PathSet:
    """Per-path delay, complex amplitude (static phase folded in), arrival
    angles and Doppler, plus the UE velocity that produced the Doppler."""

    delays: np.ndarray
    amplitudes: np.ndarray
    zoa: np.ndarray
    aoa: np.ndarray
    doppler: np.ndarray
    ue_speed: float = 0.0
    velocity_zenith: float = 0.0
    velocity_azimuth: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "delays", np.asarray(self.delays, dtype=np.float64))
        object.__setattr__(self, "amplitudes", np.asarray(self.amplitudes, dtype=np.complex128))
        object.__setattr__(self, "zoa", np.asarray(self.zoa, dtype=np.float64))
        object.__setattr__(self, "aoa", np.asarray(self.aoa, dtype=np.float64))
        object.__setattr__(self, "doppler", np.asarray(self.doppler, dtype=np.float64))
        sizes = {a.size for a in (self.delays, self.amplitudes, self.zoa, self.aoa, self.doppler)}
        if sizes != {self.delays.size} or self.delays.size < 1:
            raise ConfigError("paths: per-path arrays must share a positive length")
        if np.any(self.delays < 0.0):
            raise ConfigError("paths: delays must be nonnegative")

    @property
    def n_paths(self):
        return self.delays.size


@dataclass(frozen=True)
class ChannelSnapshot:
    """H(t) with rows indexed by unit (m * n_rows + n), columns by subcarrier."""

    matrix: np.ndarray
    timestamp: float


@dataclass(frozen=True)
class PathConfig:
    """Clustered multipath generator settings.

    Rays inside a cluster share its delay and split its power equally; ray
    angles scatter around uniform cluster means with the given RMS spreads.
    Doppler is derived from the UE velocity when ue_speed is nonzero, which
    then requires carrier_wavelength.
    """

    n_clusters: int = 2
    rays_per_cluster: int = 20
    delay_spread: float = 100e-9
    zoa_spread: float = math.radians(82.0)
    aoa_spread: float = math.radians(98.0)
    cluster_powers: tuple = ()
    total_power: float = 1.0
    ue_speed: float = 0.0
    velocity_zenith: float = 0.0
    velocity_azimuth: float = 0.0
    carrier_wavelength: float = 0.0


def wrap_zenith(theta):
    """Fold an angle into [0, pi] by reflection."""
    t = np.mod(theta, 2.0 * np.pi)
    return np.where(t > np.pi, 2.0 * np.pi - t, t)


def wrap_azimuth(phi):
    """Wrap an angle into [-pi, pi]."""
    return np.mod(phi + np.pi, 2.0 * np.pi) - np.pi


def steering_vector(geom, zoa, aoa):
    """3-D steering vector of length n_units for arrival angles (zoa, aoa).

    Entry for unit (m, n) is exp(j 2 pi (m D_h sin(zoa) sin(aoa)
    + n D_v cos(zoa)) / wavelength); the horizontal and vertical factors
    combine as a Kronecker product.
    """
    lam = geom.carrier_wavelength
    m = np.arange(geom.n_cols)
    n = np.arange(geom.n_rows)
    a_h = np.exp(2j * np.pi * geom.spacing_h * math.sin(zoa) * math.sin(aoa) / lam * m)
    a_v = np.exp(2j * np.pi * geom.spacing_v * math.cos(zoa) / lam * n)
    return np.kron(a_h, a_v)


def delay_response(tau, grid):
    """Per-subcarrier delay phase ramp exp(-j 2 pi f_k tau)."""
    if tau < 0.0:
        raise ValueError("delay_response: tau must be nonnegative")
    return np.exp(-2j * np.pi * grid.frequencies * tau)


def doppler_coefficient(paths, p, t):
    """Complex path gain at time t: amplitude times exp(j 2 pi doppler t)."""
    return paths.amplitudes[p] * np.exp(2j * np.pi * paths.doppler[p] * t)


def _steering_matrix(paths, geom):
    lam = geom.carrier_wavelength
    m = np.arange(geom.n_cols)[:, None]
    n = np.arange(geom.n_rows)[:, None]
    a_h = np.exp(2j * np.pi * geom.spacing_h / lam * m * (np.sin(paths.zoa) * np.sin(paths.aoa)))
    a_v = np.exp(2j * np.pi * geom.spacing_v / lam * n * np.cos(paths.zoa))
    return (a_h[:, None, :] * a_v[None, :, :]).reshape(geom.n_units, paths.n_paths)


def assemble_channel(paths, geom, grid, t):
    """H(t) = A diag{c_p(t)} B over all units and subcarriers."""
    if paths.n_paths < 1:
        raise ConfigError("paths: cannot assemble a channel from an empty PathSet")
    steering = _steering_matrix(paths, geom)
    gains = paths.amplitudes * np.exp(2j * np.pi * paths.doppler * t)
    delay = np.exp(-2j * np.pi * np.outer(paths.delays, grid.frequencies))
    return ChannelSnapshot(matrix=(steering * gains) @ delay, timestamp=t)


def generate_paths(config, rng):
    """Draw a clustered PathSet; deterministic for a given rng state.

    Total path power is renormalized to exactly config.total_power.
    """
    n_c = config.n_clusters
    n_r = config.rays_per_cluster
    if n_c < 1 or n_r < 1:
        raise ConfigError("paths: cluster and ray counts must be positive")
    if config.cluster_powers:
        if len(config.cluster_powers) != n_c:
            raise ConfigError("paths: cluster_powers length must match n_clusters")
        powers = np.asarray(config.cluster_powers, dtype=np.float64)
        if np.any(powers <= 0.0):
            raise ConfigError("paths: cluster_powers must be positive")
        powers = powers / powers.sum() * config.total_power
    else:
        powers = np.full(n_c, config.total_power / n_c)

    n_paths = n_c * n_r
    cluster_delays = rng.exponential(config.delay_spread, n_c) if config.delay_spread > 0 else np.zeros(n_c)
    mean_zoa = rng.uniform(0.0, np.pi, n_c)
    mean_aoa = rng.uniform(-np.pi, np.pi, n_c)
    zoa = wrap_zenith(np.repeat(mean_zoa, n_r) + rng.normal(0.0, config.zoa_spread, n_paths))
    aoa = wrap_azimuth(np.repeat(mean_aoa, n_r) + rng.normal(0.0, config.aoa_spread, n_paths))
    phases = rng.uniform(-np.pi, np.pi, n_paths)

    amplitudes = np.sqrt(np.repeat(powers, n_r) / n_r) * np.exp(1j * phases)
    amplitudes = amplitudes * math.sqrt(config.total_power / float(np.sum(np.abs(amplitudes) ** 2)))

    if config.ue_speed != 0.0:
        if config.carrier_wavelength <= 0.0:
            raise ConfigError("paths: carrier_wavelength required for a moving UE")
        arrival = np.stack(
            [np.sin(zoa) * np.cos(aoa), np.sin(zoa) * np.sin(aoa), np.cos(zoa)], axis=1
        )
        velocity = config.ue_speed * np.array(
            [
                math.sin(config.velocity_zenith) * math.cos(config.velocity_azimuth),
                math.sin(config.velocity_zenith) * math.sin(config.velocity_azimuth),
                math.cos(config.velocity_zenith),
            ]
        )
        doppler = arrival @ velocity / config.carrier_wavelength
    else:
        doppler = np.zeros(n_paths)

    return PathSet(
        delays=np.repeat(cluster_delays, n_r),
        amplitudes=amplitudes,
        zoa=zoa,
        aoa=aoa,
        doppler=doppler,
        ue_speed=config.ue_speed,
        velocity_zenith=config.velocity_zenith,
        velocity_azimuth=config.velocity_azimuth,
    )


def paths_to_records(paths):
    """PathSet as a JSON-ready list of per-path dicts."""
    return [
        {
            "delay_s": float(paths.delays[p]),
            "beta_re": float(paths.amplitudes[p].real),
            "beta_im": float(paths.amplitudes[p].imag),
            "zoa_rad": float(paths.zoa[p]),
            "aoa_rad": float(paths.aoa[p]),
            "doppler_hz": float(paths.doppler[p]),
        }
        for p in range(paths.n_paths)
    ]


def paths_from_records(records):
    if not records:
        raise ConfigError("paths: JSON document holds no paths")
    return PathSet(
        delays=[r["delay_s"] for r in records],
        amplitudes=[complex(r["beta_re"], r["beta_im"]) for r in records],
        zoa=[r["zoa_rad"] for r in records],
        aoa=[r["aoa_rad"] for r in records],
        doppler=[r["doppler_hz"] for r in records],
    )


def save_paths(paths, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(paths_to_records(paths), fh, indent=1)


def load_paths(path):
    with open(path, "r", encoding="utf-8") as fh:
        return paths_from_records(json.load(fh))
