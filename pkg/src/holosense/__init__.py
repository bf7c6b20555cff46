"""Intensity-only wideband channel sensing toolkit.

Synthesizes multipath OFDM channels over a planar array, records noisy
hologram (intensity) samples per unit, and estimates per-subcarrier channel
coefficients by closed-form recovery, a derotate-and-DFT pipeline, and a
Wirtinger-Newton maximum-likelihood solver, with Cramer-Rao bounds for
benchmarking.
"""

from .channel import (
    ArrayGeometry,
    ChannelSnapshot,
    FrequencyGrid,
    PathConfig,
    PathSet,
    assemble_channel,
    delay_response,
    doppler_coefficient,
    generate_paths,
    load_paths,
    save_paths,
    steering_vector,
)
from .crlb import (
    CrlbReport,
    crlb_matrix,
    crlb_nmse_floor,
    information_matrices,
    j_gamma_approx,
    j_gamma_quadrature,
)
from .errors import (
    CirclesDoNotIntersectError,
    ConfigError,
    DegenerateMeanError,
    HolosenseError,
    IllConditionedDeltaError,
    InconsistentIntensitiesError,
    NotAscentError,
    QuadratureAccuracyError,
    RecoveryError,
    SingularInformationError,
)
from .estimate import Estimate
from .grows import GrowsSettings, derotate, extract_channel, grows_estimate, recover_sequence
from .harness import (
    Scenario,
    SweepConfig,
    default_scenario,
    nmse,
    representative_crlb_db,
    run_sweep,
    run_trial,
    write_csv,
)
from .holography import (
    HologramRecord,
    ReferenceWave,
    hologram_intensity,
    hologram_records_to_csv,
    hologram_sample_times,
    object_wave,
    phase_step,
    reference_for_phase_step,
    reference_wave,
    sample_holograms,
)
from .recovery import RecoveryContext, context_at, recover_geometric, recover_quadratic
from .specfun import (
    bessel_i0,
    bessel_i1,
    bessel_ratio,
    bessel_ratio_complement,
    bessel_ratio_derivative,
    log_bessel_i0,
)
from .whml import (
    LikelihoodContext,
    SolverOptions,
    armijo_search,
    hessian_blocks,
    likelihood_context,
    log_likelihood,
    newton_step,
    whml_estimate,
    wirtinger_gradient,
)

__version__ = "0.1.0"
