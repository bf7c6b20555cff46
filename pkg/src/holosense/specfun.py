"""Modified Bessel functions of the first kind (orders 0 and 1) and the
ratio R(z) = I1(z)/I0(z) with its derivative.

All functions are pure and accept a nonnegative scalar or ndarray. The heavy
lifting lives in :mod:`holosense.kernels`; this module owns domain checks and
scalar/array dispatch.
"""

import numpy as np

from . import kernels


def _prepare(x, name, positive=False):
    arr = np.asarray(x, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name}: argument must be finite")
    if positive:
        if np.any(arr <= 0.0):
            raise ValueError(f"{name}: argument must be strictly positive")
    elif np.any(arr < 0.0):
        raise ValueError(f"{name}: argument must be nonnegative")
    return arr


def _dispatch(func, arr):
    flat = np.ascontiguousarray(arr.reshape(-1))
    out = func(flat)
    if arr.shape == ():
        return float(out[0])
    return out.reshape(arr.shape)


def bessel_i0(x):
    """I0(x) for x >= 0.

    Accurate to >= 12 significant digits; the direct value overflows to inf
    past x ~ 709, use :func:`log_bessel_i0` there.
    """
    return _dispatch(kernels.active.i0, _prepare(x, "bessel_i0"))


def bessel_i1(x):
    """I1(x) for x >= 0; I1(x)/x tends to 1/2 as x tends to 0."""
    return _dispatch(kernels.active.i1, _prepare(x, "bessel_i1"))


def log_bessel_i0(x):
    """ln I0(x), finite for every finite x >= 0."""
    return _dispatch(kernels.active.log_i0, _prepare(x, "log_bessel_i0"))


def bessel_ratio(z):
    """R(z) = I1(z)/I0(z) in [0, 1), overflow-free for any finite z >= 0.

    Continued fraction below the series cutoff, scaled asymptotic series
    above.
    """
    arr = _prepare(z, "bessel_ratio")
    return _dispatch(lambda flat: kernels.active.ratio_and_complement(flat)[0], arr)


def bessel_ratio_complement(z):
    """1 - R(z) without cancellation, even where R(z) is within eps of 1."""
    arr = _prepare(z, "bessel_ratio_complement")
    return _dispatch(lambda flat: kernels.active.ratio_and_complement(flat)[1], arr)


def bessel_ratio_derivative(z):
    """R'(z) = 1 - R(z)^2 - R(z)/z for z > 0 (the identity is singular at 0)."""
    arr = _prepare(z, "bessel_ratio_derivative", positive=True)

    def compute(flat):
        r, c = kernels.active.ratio_and_complement(flat)
        return c * (1.0 + r) - r / flat

    return _dispatch(compute, arr)
