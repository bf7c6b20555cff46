"""Hot numeric kernels, built twice: numba @njit and pure numpy.

Every kernel in a backend namespace takes contiguous 1-D float64 (or
complex128) arrays. The active backend is numba when importable; setting
HOLOSENSE_NO_NUMBA=1 (or "true"/"yes") forces the numpy path.
``benchmarks/kernel_bench.py`` times the two backends against each other.

Kernels:
  i0, i1, log_i0            modified Bessel functions of the first kind
  ratio_and_complement      R(z) = I1(z)/I0(z) and 1 - R(z), cancellation-free
  recover_pairs             batched two-hologram geometric recovery
  likelihood_parts          per-sample log-likelihood term and the three
                            diagonal weights of the gradient/Hessian
  loglik_sum                per-sample log-likelihood terms only
"""

import os
from types import SimpleNamespace

import numpy as np

# Power series below the cutoff, exponentially scaled asymptotic series above.
# 15 is where the two branches agree to >= 12 significant digits.
SERIES_CUTOFF = 15.0
_SERIES_TERMS = 64
_ASYM_TERMS = 40


def numba_disabled_by_env():
    value = os.environ.get("HOLOSENSE_NO_NUMBA", "").strip().lower()
    return value in ("1", "true", "yes")


# ---------------------------------------------------------------------------
# numpy backend
# ---------------------------------------------------------------------------

def _np_i0_series(x):
    q = 0.25 * x * x
    term = np.ones_like(x)
    total = np.ones_like(x)
    for k in range(1, _SERIES_TERMS):
        term = term * q / (k * k)
        total = total + term
    return total


def _np_i1_series(x):
    q = 0.25 * x * x
    term = 0.5 * x
    total = 0.5 * np.array(x, copy=True)
    for k in range(1, _SERIES_TERMS):
        term = term * q / (k * (k + 1))
        total = total + term
    return total


def _np_asym_sums(x):
    """Scaled large-x sums: I0 ~ e^x/sqrt(2 pi x) * s0, I1 likewise with s1.

    The difference d = s0 - s1 is accumulated term by term so that the ratio
    complement 1 - I1/I0 = d/s0 keeps full relative precision (the terms of d
    are all positive; direct subtraction of s0 - s1 would cancel). Terms are
    truncated at the smallest one, the optimal point for asymptotic series.
    """
    u = np.ones_like(x)
    v = np.ones_like(x)
    dterm = np.zeros_like(x)
    s0 = np.ones_like(x)
    s1 = np.ones_like(x)
    dsum = np.zeros_like(x)
    active = np.ones(x.shape, dtype=bool)
    for k in range(_ASYM_TERMS):
        denom = 8.0 * (k + 1) * x
        odd2 = float((2 * k + 1) ** 2)
        u_next = u * odd2 / denom
        v_next = v * (odd2 - 4.0) / denom
        d_next = (dterm * odd2 + 4.0 * v) / denom
        active = active & (np.abs(u_next) < np.abs(u))
        s0 = np.where(active, s0 + u_next, s0)
        s1 = np.where(active, s1 + v_next, s1)
        dsum = np.where(active, dsum + d_next, dsum)
        u = np.where(active, u_next, u)
        v = np.where(active, v_next, v)
        dterm = np.where(active, d_next, dterm)
    return s0, s1, dsum


def np_i0(x):
    out = np.empty_like(x)
    small = x < SERIES_CUTOFF
    if small.any():
        out[small] = _np_i0_series(x[small])
    big = ~small
    if big.any():
        xb = x[big]
        s0, _, _ = _np_asym_sums(xb)
        with np.errstate(over="ignore"):
            out[big] = np.exp(xb) * s0 / np.sqrt(2.0 * np.pi * xb)
    return out


def np_i1(x):
    out = np.empty_like(x)
    small = x < SERIES_CUTOFF
    if small.any():
        out[small] = _np_i1_series(x[small])
    big = ~small
    if big.any():
        xb = x[big]
        _, s1, _ = _np_asym_sums(xb)
        with np.errstate(over="ignore"):
            out[big] = np.exp(xb) * s1 / np.sqrt(2.0 * np.pi * xb)
    return out


def np_log_i0(x):
    out = np.empty_like(x)
    small = x < SERIES_CUTOFF
    if small.any():
        out[small] = np.log(_np_i0_series(x[small]))
    big = ~small
    if big.any():
        xb = x[big]
        s0, _, _ = _np_asym_sums(xb)
        out[big] = xb - 0.5 * np.log(2.0 * np.pi * xb) + np.log(s0)
    return out


def _np_ratio_cf(z):
    # Continued fraction for I1/I0 from the three-term recurrence
    # I_{nu-1} = (2 nu / z) I_nu + I_{nu+1}, evaluated backward. Fixed depth
    # converges past machine precision for z < SERIES_CUTOFF.
    depth = 30 + int(2.0 * SERIES_CUTOFF)
    r = np.zeros_like(z)
    for nu in range(depth, 0, -1):
        r = 1.0 / (2.0 * nu / z + r)
    return r


def np_ratio_and_complement(z):
    r = np.zeros_like(z)
    c = np.ones_like(z)
    small = (z > 0.0) & (z < SERIES_CUTOFF)
    if small.any():
        rs = _np_ratio_cf(z[small])
        r[small] = rs
        c[small] = 1.0 - rs
    big = z >= SERIES_CUTOFF
    if big.any():
        s0, s1, d = _np_asym_sums(z[big])
        r[big] = s1 / s0
        c[big] = d / s0
    return r, c


def np_recover_pairs(e1, e2, er, delta, q, clamp_rtol):
    """Geometric two-hologram recovery for sample pairs one symbol apart.

    Negative radicands are clamped to zero; those beyond -clamp_rtol * scale
    are counted (heavy-noise non-intersection). Both square-root branches are
    evaluated and the candidate closer to the origin wins.
    """
    q2 = q * q
    s1 = (e1 - e2) / (2.0 * q2)
    a = (e1 + e2) / (2.0 * q2)
    rad = a - s1 * s1 - 0.25
    scale = np.maximum(np.maximum(a, s1 * s1), 0.25)
    n_clamped = int(np.count_nonzero(rad < -clamp_rtol * scale))
    s2 = np.sqrt(np.maximum(rad, 0.0))
    rot = np.exp(1j * delta)
    w = 1.0 - rot
    shift = 0.5 * (rot + 1.0)
    lo = w * (s1 - 1j * s2) - shift
    hi = w * (s1 + 1j * s2) - shift
    out = np.where(np.abs(lo) <= np.abs(hi), lo, hi) * er
    return out, n_clamped


def np_likelihood_parts(e_i, mu_abs, sigma2):
    """Log-likelihood terms and the three diagonal derivative weights.

    Returns (ll, r1, r2, r3num) where ll omits the -L log sigma2 constant,
    r1/r2 are the real gradient/mixed-Hessian diagonals and r3num is the
    numerator of the unconjugated-Hessian diagonal (caller divides by
    4 mu^2). 1 - R^2 is computed from the stable complement so large z does
    not cancel.
    """
    root = np.sqrt(e_i)
    z = 2.0 * root * mu_abs / sigma2
    r, c = np_ratio_and_complement(z)
    ll = float(np.sum(np_log_i0(z) - (e_i + mu_abs * mu_abs) / sigma2))
    r1 = (root * r / mu_abs - 1.0) / sigma2
    one_minus_r2 = c * (1.0 + r)
    r2 = (e_i * one_minus_r2 - sigma2) / (sigma2 * sigma2)
    r3num = z * z * one_minus_r2 - 2.0 * z * r
    return ll, r1, r2, r3num


def np_loglik_sum(e_i, mu_abs, sigma2):
    z = 2.0 * np.sqrt(e_i) * mu_abs / sigma2
    return float(np.sum(np_log_i0(z) - (e_i + mu_abs * mu_abs) / sigma2))


numpy_backend = SimpleNamespace(
    name="numpy",
    i0=np_i0,
    i1=np_i1,
    log_i0=np_log_i0,
    ratio_and_complement=np_ratio_and_complement,
    recover_pairs=np_recover_pairs,
    likelihood_parts=np_likelihood_parts,
    loglik_sum=np_loglik_sum,
)


# ---------------------------------------------------------------------------
# numba backend (optional twin, same contracts)
# ---------------------------------------------------------------------------

try:
    from . import _kernels_numba

    numba_backend = _kernels_numba.backend
except (ImportError, AttributeError):  # pragma: no cover - only without numba
    numba_backend = None

if numba_backend is None or numba_disabled_by_env():
    active = numpy_backend
else:
    active = numba_backend


def get_backend(name=None):
    """Return a kernel namespace: "numpy", "numba", or the active default."""
    if name is None:
        return active
    if name == "numpy":
        return numpy_backend
    if name == "numba":
        if numba_backend is None:
            raise RuntimeError("numba backend unavailable (numba not importable)")
        return numba_backend
    raise ValueError(f"unknown backend {name!r}")
