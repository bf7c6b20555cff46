"""Closed-form recovery of the complex object wave from two intensities
taken one symbol period apart.

Both formulations solve the same two-circle intersection: the hologram pair
fixes the distances from the object wave to -E_r(t) and to -e^{j delta}
E_r(t). The quadratic route solves for b = A_o^2 + A_r^2 first; the
geometric route parametrizes the chord directly. Of the two intersections,
the one closer to the origin is returned (valid while |E_o| < A_r cos(delta/2),
which the reference-dominant operating regime guarantees).
"""

import cmath
import math
from dataclasses import dataclass

from .errors import (
    CirclesDoNotIntersectError,
    IllConditionedDeltaError,
    InconsistentIntensitiesError,
)
from .holography import phase_step, reference_wave

SIN_DELTA_TOLERANCE = 1e-6
CLAMP_RTOL = 1e-9


@dataclass(frozen=True)
class RecoveryContext:
    """Reference amplitude, phase step delta, and the reference value at the
    first sample instant."""

    amplitude: float
    delta: float
    e_r_at_t: complex
    sin_tolerance: float = SIN_DELTA_TOLERANCE

    def __post_init__(self):
        if self.amplitude <= 0.0:
            raise ValueError("recovery: reference amplitude must be positive")
        if abs(math.sin(self.delta)) <= self.sin_tolerance:
            raise IllConditionedDeltaError(
                f"|sin(delta)| = {abs(math.sin(self.delta)):.3g} is below "
                f"{self.sin_tolerance:.3g}; the two circles nearly coincide"
            )

    @property
    def q(self):
        """Distance between the two circle centers, 2 |sin(delta/2)| A_r."""
        return 2.0 * abs(math.sin(0.5 * self.delta)) * self.amplitude


def context_at(ref, grid, t):
    """Recovery context for the sample pair starting at time t."""
    return RecoveryContext(
        amplitude=ref.amplitude,
        delta=phase_step(ref, grid),
        e_r_at_t=reference_wave(ref, t),
    )


def _check_intensities(e_i1, e_i2):
    if e_i1 < 0.0 or e_i2 < 0.0:
        raise ValueError("recovery: intensities must be nonnegative")


def recover_quadratic(e_i1, e_i2, ctx, t, f_r):
    """Quadratic-root object-wave estimate from the intensity pair.

    Solves u' b^2 + v' b + w' = 0 for b = A_o^2 + A_r^2 (minus root, the
    intersection closer to the origin) and rebuilds amplitude and phase.
    Noiseless inputs with A_r dominant reproduce E_o(t) exactly.
    """
    _check_intensities(e_i1, e_i2)
    a_r = ctx.amplitude
    cos_d = math.cos(ctx.delta)
    sin_d = math.sin(ctx.delta)
    u = 2.0 - 2.0 * cos_d
    v = -2.0 * (1.0 - cos_d) * (e_i1 + e_i2) - 4.0 * a_r**2 * sin_d**2
    w = e_i1**2 + e_i2**2 - 2.0 * e_i1 * e_i2 * cos_d + 4.0 * a_r**4 * sin_d**2
    disc = v * v - 4.0 * u * w
    scale = max(v * v, abs(4.0 * u * w))
    if disc < -CLAMP_RTOL * scale:
        raise InconsistentIntensitiesError(
            f"discriminant {disc:.6g} below tolerance; intensities are not "
            "consistent with any object wave"
        )
    b = (-v - math.sqrt(max(disc, 0.0))) / (2.0 * u)
    re = (e_i1 - b) / (2.0 * a_r)
    im = (e_i2 - e_i1 * cos_d - (1.0 - cos_d) * b) / (2.0 * a_r * sin_d)
    return complex(re, im) * cmath.exp(2j * math.pi * f_r * t)


def recover_geometric(e_i1, e_i2, ctx):
    """Geometric-rotation object-wave estimate from the intensity pair.

    Both square-root branches are evaluated and the candidate with the
    smaller modulus wins; the printed branch choice depends on the chord
    orientation, min-modulus does not. A radicand below -tolerance means the
    two circles do not intersect (heavy noise) and raises.
    """
    _check_intensities(e_i1, e_i2)
    q2 = ctx.q**2
    s1 = (e_i1 - e_i2) / (2.0 * q2)
    a = (e_i1 + e_i2) / (2.0 * q2)
    rad = a - s1 * s1 - 0.25
    scale = max(a, s1 * s1, 0.25)
    if rad < -CLAMP_RTOL * scale:
        raise CirclesDoNotIntersectError(
            f"radicand {rad:.6g} below tolerance; the hologram pair is "
            "inconsistent (noise pushed the circles apart)"
        )
    s2 = math.sqrt(max(rad, 0.0))
    rot = cmath.exp(1j * ctx.delta)
    w = 1.0 - rot
    shift = 0.5 * (rot + 1.0)
    lo = w * complex(s1, -s2) - shift
    hi = w * complex(s1, s2) - shift
    best = lo if abs(lo) <= abs(hi) else hi
    return best * ctx.e_r_at_t
