"""Seeded Monte Carlo experiment runner: scenario construction, per-trial
estimation, NMSE aggregation, CRLB floors, sweeps, and CSV output.

Determinism: trial substreams derive from (seed, trial_index) via
SeedSequence spawn keys, so results are identical for any trial execution
order and any worker count. Sweep points share the base seed, giving common
random numbers across sweep values.
"""

import math
import multiprocessing
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .channel import ArrayGeometry, FrequencyGrid, PathConfig, SPEED_OF_LIGHT, assemble_channel, generate_paths
from .crlb import crlb_matrix, information_matrices
from .errors import ConfigError, HolosenseError
from .grows import GrowsSettings, grows_estimate
from .holography import HologramRecord, hologram_sample_times, reference_for_phase_step
from .whml import LikelihoodContext, SolverOptions, likelihood_context, whml_estimate

NMSE_FLOOR_DB = -300.0
KNOWN_ESTIMATORS = ("grows", "whml")
SWEEP_VARIABLES = ("snr", "k", "rb")
SUBCARRIERS_PER_RB = 12


def error_ratio(h_hat, h_true):
    """Per-trial squared-error ratio ||h_hat - h||^2 / ||h||^2."""
    h_true = np.asarray(h_true)
    power = float(np.vdot(h_true, h_true).real)
    if power <= 0.0:
        raise ValueError("nmse: true channel must be nonzero")
    diff = np.asarray(h_hat) - h_true
    return float(np.vdot(diff, diff).real) / power


def ratio_to_db(ratio):
    if ratio < 1e-30:
        return NMSE_FLOOR_DB
    return 10.0 * math.log10(ratio)


def nmse(h_hat, h_true):
    """Normalized mean squared error in dB, floored at -300 dB."""
    return ratio_to_db(error_ratio(h_hat, h_true))


@dataclass(frozen=True)
class Scenario:
    geometry: ArrayGeometry
    grid: FrequencyGrid
    paths: PathConfig
    samples_per_symbol: int
    delta: float
    k_factor: float
    snr_db: object
    trials: int
    seed: int
    estimators: tuple = KNOWN_ESTIMATORS
    j_mode: str = "approx"
    global_reference_scaling: bool = False
    solver: SolverOptions = field(default_factory=SolverOptions)

    def __post_init__(self):
        if self.samples_per_symbol < self.grid.subcarrier_count:
            raise ConfigError("hologram.L: must be >= the subcarrier count")
        if self.k_factor <= 0.0:
            raise ConfigError("hologram.K: must be positive")
        if self.trials < 1:
            raise ConfigError("trials: must be positive")
        unknown = set(self.estimators) - set(KNOWN_ESTIMATORS)
        if unknown:
            raise ConfigError(f"estimators: unknown {sorted(unknown)}")
        if self.k_factor <= 1.0:
            warnings.warn(
                f"K = {self.k_factor:g} <= 1 violates the reference-dominance "
                "assumption; expect recovery clamping",
                stacklevel=2,
            )

    @property
    def noiseless(self):
        return self.snr_db is None

    def noise_variance_for(self, object_power):
        """Noise variance from SNR = mean |E_o|^2 / sigma2."""
        if self.noiseless:
            return 0.0
        return object_power / 10.0 ** (self.snr_db / 10.0)


def default_scenario(
    n_f=132,
    snr_db=10.0,
    k_factor=4.0,
    trials=100,
    seed=20260809,
    samples_per_symbol=None,
    n_rows=4,
    n_cols=4,
    carrier=3.5e9,
    subcarrier_spacing=30e3,
    delta=math.pi / 2,
    estimators=KNOWN_ESTIMATORS,
    paths=None,
    j_mode="approx",
):
    """Desk-scale defaults: 4x4 array at 3.5 GHz, 30 kHz spacing, half-wave
    spacings, 2 clusters x 20 rays."""
    wavelength = SPEED_OF_LIGHT / carrier
    geometry = ArrayGeometry(
        n_rows=n_rows,
        n_cols=n_cols,
        spacing_v=wavelength / 2,
        spacing_h=wavelength / 2,
        carrier_wavelength=wavelength,
    )
    grid = FrequencyGrid(carrier=carrier, subcarrier_count=n_f, symbol_period=1.0 / subcarrier_spacing)
    if samples_per_symbol is None:
        samples_per_symbol = max(100, n_f)
    return Scenario(
        geometry=geometry,
        grid=grid,
        paths=paths or PathConfig(),
        samples_per_symbol=samples_per_symbol,
        delta=delta,
        k_factor=k_factor,
        snr_db=snr_db,
        trials=trials,
        seed=seed,
        estimators=tuple(estimators),
        j_mode=j_mode,
    )


@dataclass
class TrialResult:
    trial_index: int
    ratios: dict
    failures: dict
    clamps: int


def _trial_rng(scenario, trial_index):
    return np.random.default_rng(np.random.SeedSequence(scenario.seed, spawn_key=(trial_index,)))


def _unit_fields(scenario, snapshot):
    """Per-unit noiseless object-wave samples over the 2L instants."""
    times = hologram_sample_times(scenario.samples_per_symbol, scenario.grid)
    basis = np.exp(2j * np.pi * np.outer(times, scenario.grid.frequencies))
    return times, snapshot.matrix @ basis.T


def run_trial(scenario, trial_index):
    """One seeded trial: draw a channel, record holograms per unit, run the
    configured estimators, and return per-unit squared-error ratios.

    Estimator failures are recorded, not raised. Fully deterministic given
    (scenario.seed, trial_index).
    """
    rng = _trial_rng(scenario, trial_index)
    paths = generate_paths(scenario.paths, rng)
    snapshot = assemble_channel(paths, scenario.geometry, scenario.grid, t=0.0)
    times, fields = _unit_fields(scenario, snapshot)
    n_units = scenario.geometry.n_units
    global_peak = float(np.max(np.abs(fields)))

    ratios = {name: np.full(n_units, np.nan) for name in scenario.estimators}
    failures = {name: 0 for name in scenario.estimators}
    clamps = 0

    run_whml = "whml" in scenario.estimators and not scenario.noiseless
    if "whml" in scenario.estimators and scenario.noiseless:
        # The chi-squared likelihood is undefined at zero noise; only the
        # closed-form pipeline runs.
        ratios.pop("whml")
        failures.pop("whml")

    for idx in range(n_units):
        h_row = snapshot.matrix[idx]
        e_o = fields[idx]
        peak = global_peak if scenario.global_reference_scaling else float(np.max(np.abs(e_o)))
        if peak <= 0.0:
            for name in failures:
                failures[name] += 1
            continue
        a_r = scenario.k_factor * peak
        sigma2 = scenario.noise_variance_for(float(np.mean(np.abs(e_o) ** 2)))
        ref = reference_for_phase_step(scenario.grid, scenario.delta, a_r)

        field_total = a_r * np.exp(2j * np.pi * ref.frequency * times) + e_o
        if sigma2 > 0.0:
            scale = math.sqrt(0.5 * sigma2)
            field_total = field_total + scale * (
                rng.standard_normal(times.size) + 1j * rng.standard_normal(times.size)
            )
        record = HologramRecord(
            unit=(idx // scenario.geometry.n_rows, idx % scenario.geometry.n_rows),
            sample_times=times,
            intensities=field_total.real**2 + field_total.imag**2,
            noise_variance=sigma2,
            samples_per_symbol=scenario.samples_per_symbol,
        )

        grows_est = None
        if "grows" in scenario.estimators:
            try:
                settings = GrowsSettings(scenario.samples_per_symbol, scenario.grid, ref)
                grows_est = grows_estimate(record, settings)
                clamps += grows_est.clamps
                ratios["grows"][idx] = error_ratio(grows_est.h_hat, h_row)
            except (HolosenseError, np.linalg.LinAlgError):
                failures["grows"] += 1
        if run_whml:
            try:
                if grows_est is None:
                    settings = GrowsSettings(scenario.samples_per_symbol, scenario.grid, ref)
                    grows_est = grows_estimate(record, settings)
                ctx = likelihood_context(record, scenario.grid, ref)
                est = whml_estimate(grows_est.h_hat, ctx, scenario.solver)
                ratios["whml"][idx] = error_ratio(est.h_hat, h_row)
            except (HolosenseError, np.linalg.LinAlgError):
                failures["whml"] += 1

    return TrialResult(trial_index=trial_index, ratios=ratios, failures=failures, clamps=clamps)


def representative_crlb_db(scenario):
    """CRLB NMSE floor for the trial-0 channel draw, averaged (linearly) over
    units; None when undefined (noiseless scenario or singular information)."""
    if scenario.noiseless:
        return None
    rng = _trial_rng(scenario, 0)
    paths = generate_paths(scenario.paths, rng)
    snapshot = assemble_channel(paths, scenario.geometry, scenario.grid, t=0.0)
    times, fields = _unit_fields(scenario, snapshot)
    global_peak = float(np.max(np.abs(fields)))
    floors = []
    for idx in range(scenario.geometry.n_units):
        h_row = snapshot.matrix[idx]
        e_o = fields[idx]
        peak = global_peak if scenario.global_reference_scaling else float(np.max(np.abs(e_o)))
        if peak <= 0.0:
            continue
        a_r = scenario.k_factor * peak
        sigma2 = scenario.noise_variance_for(float(np.mean(np.abs(e_o) ** 2)))
        ref = reference_for_phase_step(scenario.grid, scenario.delta, a_r)
        ctx = LikelihoodContext(
            intensities=np.abs(a_r * np.exp(2j * np.pi * ref.frequency * times) + e_o) ** 2,
            sample_times=times,
            reference=a_r * np.exp(2j * np.pi * ref.frequency * times),
            basis=np.exp(2j * np.pi * np.outer(scenario.grid.frequencies, times)),
            noise_variance=sigma2,
        )
        try:
            info, pseudo = information_matrices(h_row, ctx, j_mode=scenario.j_mode)
            report = crlb_matrix(info, pseudo)
        except (HolosenseError, np.linalg.LinAlgError):
            continue
        power = float(np.vdot(h_row, h_row).real)
        if power > 0.0:
            floors.append(report.trace_floor / power)
    if not floors:
        return None
    return ratio_to_db(float(np.mean(floors)))


@dataclass(frozen=True)
class SweepConfig:
    base: Scenario
    variable: str
    values: tuple

    def __post_init__(self):
        if self.variable not in SWEEP_VARIABLES:
            raise ConfigError(f"sweep.variable: must be one of {SWEEP_VARIABLES}")
        if not self.values:
            raise ConfigError("sweep.values: must be a non-empty list")


def scenario_for_value(base, variable, value):
    if variable == "snr":
        return replace(base, snr_db=float(value))
    if variable == "k":
        return replace(base, k_factor=float(value))
    if variable == "rb":
        n_f = SUBCARRIERS_PER_RB * int(value)
        grid = replace(base.grid, subcarrier_count=n_f)
        return replace(base, grid=grid, samples_per_symbol=max(base.samples_per_symbol, n_f))
    raise ConfigError(f"sweep.variable: must be one of {SWEEP_VARIABLES}")


@dataclass
class ResultRow:
    sweep_var: str
    value: float
    estimator: str
    nmse_db: object
    crlb_db: object
    trials: int
    failures: int
    clamps: int


def _run_point(scenario, workers):
    indices = list(range(scenario.trials))
    if workers > 1:
        with multiprocessing.get_context("fork").Pool(workers) as pool:
            results = pool.starmap(run_trial, [(scenario, i) for i in indices])
    else:
        results = [run_trial(scenario, i) for i in indices]
    results.sort(key=lambda r: r.trial_index)
    return results


def _aggregate_point(sweep_var, value, scenario, results, crlb_db):
    rows = []
    names = list(results[0].ratios) if results else list(scenario.estimators)
    for name in names:
        stacked = np.concatenate([r.ratios[name] for r in results])
        valid = stacked[np.isfinite(stacked)]
        nmse_db = ratio_to_db(float(np.mean(valid))) if valid.size else None
        rows.append(
            ResultRow(
                sweep_var=sweep_var,
                value=value,
                estimator=name,
                nmse_db=nmse_db,
                crlb_db=crlb_db,
                trials=scenario.trials,
                failures=sum(r.failures[name] for r in results),
                clamps=sum(r.clamps for r in results) if name == "grows" else 0,
            )
        )
    return rows


def run_sweep(config, workers=1):
    """Run every sweep point and return the aggregated ResultRows."""
    rows = []
    for value in config.values:
        scenario = scenario_for_value(config.base, config.variable, value)
        results = _run_point(scenario, workers)
        crlb_db = representative_crlb_db(scenario)
        rows.extend(_aggregate_point(config.variable, value, scenario, results, crlb_db))
    return rows


def _format_field(value):
    if value is None or (isinstance(value, float) and not math.isfinite(value)):
        return ""
    if isinstance(value, float):
        return f"{value:.10g}"
    return str(value)


CSV_HEADER = "sweep_var,value,estimator,nmse_db,crlb_db,trials,failures,clamps"


def rows_to_csv(rows):
    lines = [CSV_HEADER]
    for row in rows:
        lines.append(
            ",".join(
                [
                    row.sweep_var,
                    _format_field(float(row.value)),
                    row.estimator,
                    _format_field(row.nmse_db),
                    _format_field(row.crlb_db),
                    str(row.trials),
                    str(row.failures),
                    str(row.clamps),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def write_csv(rows, path):
    text = rows_to_csv(rows)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return text
