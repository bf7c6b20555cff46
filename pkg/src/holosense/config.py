"""JSON scenario/sweep configuration parsing with field-path diagnostics."""

import json
import math

from .channel import ArrayGeometry, FrequencyGrid, PathConfig, SPEED_OF_LIGHT
from .errors import ConfigError
from .harness import KNOWN_ESTIMATORS, Scenario, SweepConfig, SWEEP_VARIABLES
from .whml import SolverOptions


def _section(doc, name):
    value = doc.get(name, {})
    if not isinstance(value, dict):
        raise ConfigError(f"{name}: must be an object")
    return value


def _number(section, path, key, default=None, minimum=None, exclusive=False, allow_none=False):
    if key not in section or section[key] is None:
        if key in section and section[key] is None and allow_none:
            return None
        if default is not None or allow_none:
            return default
        raise ConfigError(f"{path}.{key}: required")
    value = section[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}.{key}: must be a number")
    value = float(value)
    if not math.isfinite(value):
        raise ConfigError(f"{path}.{key}: must be finite")
    if minimum is not None and (value <= minimum if exclusive else value < minimum):
        bound = "greater than" if exclusive else "at least"
        raise ConfigError(f"{path}.{key}: must be {bound} {minimum}")
    return value


def _integer(section, path, key, default=None, minimum=1):
    value = _number(section, path, key, default=default, minimum=minimum)
    if value != int(value):
        raise ConfigError(f"{path}.{key}: must be an integer")
    return int(value)


def sweep_from_config(doc, seed=None, sweep=None, trials=None):
    """Build a SweepConfig from a parsed JSON document; keyword arguments
    override the corresponding config fields (CLI flags)."""
    if not isinstance(doc, dict):
        raise ConfigError("config: top level must be an object")

    grid_sec = _section(doc, "grid")
    carrier = _number(grid_sec, "grid", "carrier_hz", default=3.5e9, minimum=0.0, exclusive=True)
    spacing = _number(grid_sec, "grid", "subcarrier_spacing_hz", default=30e3, minimum=0.0, exclusive=True)
    n_f = _integer(grid_sec, "grid", "subcarrier_count", default=132)
    grid = FrequencyGrid(carrier=carrier, subcarrier_count=n_f, symbol_period=1.0 / spacing)

    wavelength = SPEED_OF_LIGHT / carrier
    geom_sec = _section(doc, "geometry")
    geometry = ArrayGeometry(
        n_rows=_integer(geom_sec, "geometry", "n_rows", default=4),
        n_cols=_integer(geom_sec, "geometry", "n_cols", default=4),
        spacing_v=_number(geom_sec, "geometry", "spacing_v", default=wavelength / 2, minimum=0.0, exclusive=True),
        spacing_h=_number(geom_sec, "geometry", "spacing_h", default=wavelength / 2, minimum=0.0, exclusive=True),
        carrier_wavelength=wavelength,
    )

    paths_sec = _section(doc, "paths")
    paths = PathConfig(
        n_clusters=_integer(paths_sec, "paths", "clusters", default=2),
        rays_per_cluster=_integer(paths_sec, "paths", "rays_per_cluster", default=20),
        delay_spread=_number(paths_sec, "paths", "delay_spread_s", default=100e-9, minimum=0.0),
        zoa_spread=math.radians(_number(paths_sec, "paths", "zoa_spread_deg", default=82.0, minimum=0.0)),
        aoa_spread=math.radians(_number(paths_sec, "paths", "aoa_spread_deg", default=98.0, minimum=0.0)),
    )

    holo_sec = _section(doc, "hologram")
    samples = _integer(holo_sec, "hologram", "L", default=max(100, n_f))
    delta = _number(holo_sec, "hologram", "delta_rad", default=math.pi / 2)
    k_factor = _number(holo_sec, "hologram", "K", default=4.0, minimum=0.0, exclusive=True)

    snr_db = _number(doc, "config", "snr_db", default=10.0, allow_none=True)
    trials_value = trials if trials is not None else _integer(doc, "config", "trials", default=100)

    if seed is None:
        if "seed" not in doc:
            raise ConfigError("seed: required (config field or --seed)")
        seed = _integer(doc, "config", "seed", minimum=0)

    estimators = doc.get("estimators", list(KNOWN_ESTIMATORS))
    if not isinstance(estimators, (list, tuple)) or not estimators:
        raise ConfigError("estimators: must be a non-empty list")
    for name in estimators:
        if name not in KNOWN_ESTIMATORS:
            raise ConfigError(f"estimators: unknown {name!r}")

    j_mode = doc.get("j_mode", "approx")
    if j_mode not in ("approx", "quadrature"):
        raise ConfigError("j_mode: must be 'approx' or 'quadrature'")

    solver_sec = _section(doc, "solver")
    solver = SolverOptions(
        armijo_alpha=_number(solver_sec, "solver", "armijo_alpha", default=0.1, minimum=0.0, exclusive=True),
        reduction=_number(solver_sec, "solver", "reduction", default=0.5, minimum=0.0, exclusive=True),
        max_iterations=_integer(solver_sec, "solver", "max_iterations", default=100),
        gradient_tolerance=_number(solver_sec, "solver", "gradient_tolerance", default=1e-6, minimum=0.0, exclusive=True),
        step_tolerance=_number(solver_sec, "solver", "step_tolerance", default=1e-8, minimum=0.0, exclusive=True),
        hessian_damping=_number(solver_sec, "solver", "hessian_damping", default=0.0, minimum=0.0),
    )

    base = Scenario(
        geometry=geometry,
        grid=grid,
        paths=paths,
        samples_per_symbol=samples,
        delta=delta,
        k_factor=k_factor,
        snr_db=snr_db,
        trials=int(trials_value),
        seed=int(seed),
        estimators=tuple(estimators),
        j_mode=j_mode,
        solver=solver,
    )

    sweep_sec = _section(doc, "sweep")
    variable = sweep if sweep is not None else sweep_sec.get("variable")
    if variable not in SWEEP_VARIABLES:
        raise ConfigError(f"sweep.variable: must be one of {SWEEP_VARIABLES}")
    values = sweep_sec.get("values")
    if not isinstance(values, (list, tuple)) or not values:
        raise ConfigError("sweep.values: must be a non-empty list")
    for i, value in enumerate(values):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"sweep.values[{i}]: must be a number")
    return SweepConfig(base=base, variable=variable, values=tuple(values))


def load_sweep_config(path, seed=None, sweep=None, trials=None):
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    return sweep_from_config(doc, seed=seed, sweep=sweep, trials=trials)
