"""Estimator output: the per-unit channel vector plus solver diagnostics."""

import math
from dataclasses import dataclass, field

import numpy as np


@dataclass
class Estimate:
    h_hat: np.ndarray
    method: str
    iterations: int = 0
    final_log_likelihood: float = math.nan
    termination: str = ""
    clamps: int = 0
    likelihood_path: tuple = field(default_factory=tuple)
