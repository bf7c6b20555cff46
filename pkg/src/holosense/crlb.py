"""Cramer-Rao lower bound for hologram-based channel estimation.

The per-sample score (d/dh_m*) log f = (sqrt(E_l) R(z_l)/|mu_l| - 1)
mu_l Phi*_{l,m} / s2 has zero mean (E[sqrt(E) R(z)/|mu|] = 1) and second
moment J(gamma_l) - 1 with gamma_l = |mu_l|^2 / s2, so the complex
information and pseudo-information matrices are

    I_h = (1/s4) Phi* diag{(J(g_l) - 1) |mu_l|^2} Phi^T,
    P_h = (1/s4) Phi* diag{(J(g_l) - 1) mu_l^2} Phi^H.

The bound matrix is the partitioned inverse of [[I_h, P_h], [P_h*, I_h*]],
assembled from the Schur complement R_h = I_h - P_h (I_h^{-1})* P_h*; any
unbiased estimator's covariance dominates R_h^{-1}. In the strong-reference
limit (J - 1) |mu|^2 -> s2/2, i.e. intensity-only sensing retains exactly
half the information of a coherent Gaussian observation.

J(gamma) is an expectation over the non-central chi-squared intensity; it is
available by adaptive quadrature and by a closed-form approximation that is
asymptotically exact for large gamma.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .errors import DegenerateMeanError, QuadratureAccuracyError, SingularInformationError
from .specfun import bessel_ratio, log_bessel_i0

J_QUAD_ABS_TOL = 1e-6
_COND_LIMIT = 1e12


@dataclass
class CrlbReport:
    info_matrix: np.ndarray
    pseudo_info: np.ndarray
    bound_matrix: np.ndarray
    schur: np.ndarray
    nmse_floor_db: float = math.nan

    @property
    def trace_floor(self):
        """Per-unit error-power floor tr Re R_h^{-1} for unbiased estimators."""
        n = self.schur.shape[0]
        return float(np.trace(np.real(self.bound_matrix[:n, :n])))


def _check_gamma(gamma):
    g = float(gamma)
    if not math.isfinite(g) or g <= 0.0:
        raise ValueError("gamma must be a positive finite real")
    return g


def j_gamma_quadrature(gamma):
    """J(gamma) = int_0^inf gamma t exp(-gamma(1+t)) I0(2 gamma sqrt(t))
    R^2(2 gamma sqrt(t)) dt by adaptive quadrature.

    The integrand is assembled in the log domain (log I0 folded into the
    exponent) so large gamma never overflows. The upper limit is set where
    the analytic tail bound exp(-gamma (1 - sqrt(t))^2) falls 30+ decades
    below the peak.
    """
    g = _check_gamma(gamma)

    def integrand(t):
        if t <= 0.0:
            return 0.0
        z = 2.0 * g * math.sqrt(t)
        r = bessel_ratio(z)
        if r == 0.0:
            return 0.0
        log_val = math.log(g * t) - g * (1.0 + t) + log_bessel_i0(z) + 2.0 * math.log(r)
        return math.exp(log_val)

    guess = 1.0 + math.sqrt(40.0 / g)
    margin = 35.0 + abs(math.log(g)) + 2.0 * math.log1p(guess * guess)
    t_max = (1.0 + math.sqrt(margin / g)) ** 2
    peak_half_width = 8.0 / math.sqrt(g)
    interior = [t for t in ((1.0 - peak_half_width) ** 2, 1.0, (1.0 + peak_half_width) ** 2) if 0.0 < t < t_max]
    value, abserr = quad(integrand, 0.0, t_max, points=interior or None, limit=400, epsabs=1e-10, epsrel=1e-10)
    if not math.isfinite(value) or abserr > J_QUAD_ABS_TOL:
        raise QuadratureAccuracyError(
            f"J({g:.6g}) quadrature reached {abserr:.3g} absolute error, "
            f"needed {J_QUAD_ABS_TOL:.0e}",
            value=value,
            error=abserr,
        )
    return value


def _j_approx_minus_one(gamma):
    # J_hat(gamma) - 1 evaluated directly so that the information-matrix
    # weights 4 (J - 1) |mu|^2 keep precision when gamma is huge. The scaled
    # products exp(-g/2) I(g/2) come from the log-domain Bessel evaluations.
    gamma = np.asarray(gamma, dtype=np.float64)
    half = 0.5 * gamma
    i0e = np.exp(log_bessel_i0(half) - half)
    i1e = bessel_ratio(half) * i0e
    return 1.0 / gamma - 0.25 * np.sqrt(np.pi / gamma) * ((1.0 + 1.0 / gamma) * i0e + i1e)


def j_gamma_approx(gamma):
    """Closed-form approximation of J(gamma), asymptotically exact in gamma."""
    if np.ndim(gamma) == 0:
        _check_gamma(gamma)
        return 1.0 + float(_j_approx_minus_one(float(gamma)))
    arr = np.asarray(gamma, dtype=np.float64)
    if np.any(~np.isfinite(arr)) or np.any(arr <= 0.0):
        raise ValueError("gamma must be positive and finite")
    return 1.0 + _j_approx_minus_one(arr)


def information_matrices(h, ctx, j_mode="approx"):
    """(I_h, P_h) at the true channel h for a given sample context.

    j_mode selects the J(gamma) route: "approx" (closed form, default) or
    "quadrature". I_h is Hermitian and P_h symmetric by construction; both
    are symmetrized to remove roundoff.
    """
    mu = ctx.reference + ctx.basis.T @ np.asarray(h, dtype=np.complex128)
    mu_abs = np.abs(mu)
    bad = np.flatnonzero(mu_abs <= ctx.mean_tolerance)
    if bad.size:
        raise DegenerateMeanError("information matrices undefined at vanishing means", indices=bad)
    s2 = ctx.noise_variance
    gammas = mu_abs**2 / s2
    if j_mode == "approx":
        jm1 = _j_approx_minus_one(gammas)
    elif j_mode == "quadrature":
        jm1 = np.array([j_gamma_quadrature(g) - 1.0 for g in gammas])
    else:
        raise ValueError(f"unknown j_mode {j_mode!r}")
    j_info = jm1 * mu_abs**2
    j_pseudo = jm1 * mu * mu

    phi_conj = ctx.basis.conj()
    s4 = s2 * s2
    info = (phi_conj * j_info) @ ctx.basis.T / s4
    pseudo = (phi_conj * j_pseudo) @ phi_conj.T / s4
    info = 0.5 * (info + info.conj().T)
    pseudo = 0.5 * (pseudo + pseudo.T)
    return info, pseudo


def crlb_matrix(info, pseudo):
    """CrlbReport with the partitioned 2N_f bound assembled from the Schur
    complement; verifies the block inverse against the full system."""
    n = info.shape[0]
    if np.linalg.cond(info) > _COND_LIMIT:
        raise SingularInformationError("information matrix numerically singular")
    info_inv_conj = np.linalg.inv(info).conj()
    q_h = pseudo @ info_inv_conj
    schur = info - q_h @ pseudo.conj()
    if np.linalg.cond(schur) > _COND_LIMIT:
        raise SingularInformationError("Schur complement numerically singular")
    schur_inv = np.linalg.inv(schur)
    bound = np.block(
        [
            [schur_inv, -schur_inv @ q_h],
            [-q_h.conj().T @ schur_inv, schur_inv.conj()],
        ]
    )
    full = np.block([[info, pseudo], [pseudo.conj(), info.conj()]])
    residual = np.linalg.norm(full @ bound - np.eye(2 * n)) / math.sqrt(2 * n)
    if residual > 1e-8:
        raise SingularInformationError(
            f"block inverse verification failed (residual {residual:.3g})"
        )
    return CrlbReport(info_matrix=info, pseudo_info=pseudo, bound_matrix=bound, schur=schur)


def crlb_nmse_floor(report, h_true):
    """Scalar NMSE floor in dB: tr Re R_h^{-1} normalized by ||h_true||^2."""
    h = np.asarray(h_true)
    power = float(np.vdot(h, h).real)
    if power <= 0.0:
        raise ValueError("crlb: true channel must be nonzero")
    floor_db = 10.0 * math.log10(report.trace_floor / power)
    report.nmse_floor_db = floor_db
    return floor_db
