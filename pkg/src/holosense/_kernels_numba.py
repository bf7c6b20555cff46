"""numba twin of the numpy kernels; scalar cores plus 1-D array loops."""

import math
from types import SimpleNamespace

import numpy as np
from numba import njit

from .kernels import SERIES_CUTOFF, _ASYM_TERMS, _SERIES_TERMS


@njit(cache=True)
def _i0_series(x):
    q = 0.25 * x * x
    term = 1.0
    total = 1.0
    for k in range(1, _SERIES_TERMS):
        term *= q / (k * k)
        total += term
        if term < 1e-17 * total:
            break
    return total


@njit(cache=True)
def _i1_series(x):
    q = 0.25 * x * x
    term = 0.5 * x
    total = 0.5 * x
    for k in range(1, _SERIES_TERMS):
        term *= q / (k * (k + 1))
        total += term
        if term < 1e-17 * total:
            break
    return total


@njit(cache=True)
def _asym_sums(x):
    # Scaled asymptotic sums for I0 (s0), I1 (s1) and their difference
    # (dsum, accumulated directly to avoid cancellation), truncated at the
    # smallest term.
    u = 1.0
    v = 1.0
    dterm = 0.0
    s0 = 1.0
    s1 = 1.0
    dsum = 0.0
    for k in range(_ASYM_TERMS):
        denom = 8.0 * (k + 1) * x
        odd2 = (2.0 * k + 1.0) ** 2
        u_next = u * odd2 / denom
        v_next = v * (odd2 - 4.0) / denom
        d_next = (dterm * odd2 + 4.0 * v) / denom
        if abs(u_next) >= abs(u):
            break
        s0 += u_next
        s1 += v_next
        dsum += d_next
        u = u_next
        v = v_next
        dterm = d_next
    return s0, s1, dsum


@njit(cache=True)
def _i0_scalar(x):
    if x < SERIES_CUTOFF:
        return _i0_series(x)
    s0, _, _ = _asym_sums(x)
    return math.exp(x) * s0 / math.sqrt(2.0 * math.pi * x)


@njit(cache=True)
def _i1_scalar(x):
    if x < SERIES_CUTOFF:
        return _i1_series(x)
    _, s1, _ = _asym_sums(x)
    return math.exp(x) * s1 / math.sqrt(2.0 * math.pi * x)


@njit(cache=True)
def _log_i0_scalar(x):
    if x < SERIES_CUTOFF:
        return math.log(_i0_series(x))
    s0, _, _ = _asym_sums(x)
    return x - 0.5 * math.log(2.0 * math.pi * x) + math.log(s0)


@njit(cache=True)
def _ratio_complement_scalar(z):
    if z <= 0.0:
        return 0.0, 1.0
    if z < SERIES_CUTOFF:
        depth = 30 + int(2.0 * z)
        r = 0.0
        for nu in range(depth, 0, -1):
            r = 1.0 / (2.0 * nu / z + r)
        return r, 1.0 - r
    s0, s1, dsum = _asym_sums(z)
    return s1 / s0, dsum / s0


@njit(cache=True)
def nb_i0(x):
    out = np.empty(x.size)
    for i in range(x.size):
        out[i] = _i0_scalar(x[i])
    return out


@njit(cache=True)
def nb_i1(x):
    out = np.empty(x.size)
    for i in range(x.size):
        out[i] = _i1_scalar(x[i])
    return out


@njit(cache=True)
def nb_log_i0(x):
    out = np.empty(x.size)
    for i in range(x.size):
        out[i] = _log_i0_scalar(x[i])
    return out


@njit(cache=True)
def nb_ratio_and_complement(z):
    r = np.empty(z.size)
    c = np.empty(z.size)
    for i in range(z.size):
        r[i], c[i] = _ratio_complement_scalar(z[i])
    return r, c


@njit(cache=True)
def nb_recover_pairs(e1, e2, er, delta, q, clamp_rtol):
    n = e1.size
    out = np.empty(n, np.complex128)
    rot = complex(math.cos(delta), math.sin(delta))
    w = 1.0 - rot
    shift = 0.5 * (rot + 1.0)
    q2 = q * q
    n_clamped = 0
    for i in range(n):
        s1 = (e1[i] - e2[i]) / (2.0 * q2)
        a = (e1[i] + e2[i]) / (2.0 * q2)
        rad = a - s1 * s1 - 0.25
        scale = max(max(a, s1 * s1), 0.25)
        if rad < -clamp_rtol * scale:
            n_clamped += 1
            rad = 0.0
        elif rad < 0.0:
            rad = 0.0
        s2 = math.sqrt(rad)
        lo = w * complex(s1, -s2) - shift
        hi = w * complex(s1, s2) - shift
        c = lo if abs(lo) <= abs(hi) else hi
        out[i] = c * er[i]
    return out, n_clamped


@njit(cache=True)
def nb_likelihood_parts(e_i, mu_abs, sigma2):
    n = e_i.size
    r1 = np.empty(n)
    r2 = np.empty(n)
    r3num = np.empty(n)
    ll = 0.0
    for i in range(n):
        root = math.sqrt(e_i[i])
        z = 2.0 * root * mu_abs[i] / sigma2
        r, c = _ratio_complement_scalar(z)
        ll += _log_i0_scalar(z) - (e_i[i] + mu_abs[i] * mu_abs[i]) / sigma2
        r1[i] = (root * r / mu_abs[i] - 1.0) / sigma2
        one_minus_r2 = c * (1.0 + r)
        r2[i] = (e_i[i] * one_minus_r2 - sigma2) / (sigma2 * sigma2)
        r3num[i] = z * z * one_minus_r2 - 2.0 * z * r
    return ll, r1, r2, r3num


@njit(cache=True)
def nb_loglik_sum(e_i, mu_abs, sigma2):
    ll = 0.0
    for i in range(e_i.size):
        z = 2.0 * math.sqrt(e_i[i]) * mu_abs[i] / sigma2
        ll += _log_i0_scalar(z) - (e_i[i] + mu_abs[i] * mu_abs[i]) / sigma2
    return ll


backend = SimpleNamespace(
    name="numba",
    i0=nb_i0,
    i1=nb_i1,
    log_i0=nb_log_i0,
    ratio_and_complement=nb_ratio_and_complement,
    recover_pairs=nb_recover_pairs,
    likelihood_parts=nb_likelihood_parts,
    loglik_sum=nb_loglik_sum,
)
