"""Wideband hologram-based maximum-likelihood channel estimation.

The intensity samples are non-central chi-squared; the log-likelihood of the
channel vector h is

    F(h) = sum_l [ log I0(2 sqrt(E_l) |mu_l| / s2) - (E_l + |mu_l|^2) / s2 ]
           - L log s2,        mu_l = E_r(t_l) + Phi(t_l)^T h.

F is maximized by a complex Newton method on the augmented (h, h*) system
with Armijo backtracking. Gradient and the four partial Hessian blocks come
from Wirtinger calculus; their per-sample diagonal weights are computed in
the kernel backend.
"""

import math
from collections import namedtuple
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ConfigError, DegenerateMeanError, NotAscentError
from .estimate import Estimate
from .holography import reference_wave

MU_RTOL = 1e-12

HessianBlocks = namedtuple("HessianBlocks", ["hh", "h_hstar", "hstar_h", "hstar_hstar"])


@dataclass(frozen=True)
class SolverOptions:
    armijo_alpha: float = 0.1
    reduction: float = 0.5
    max_iterations: int = 100
    gradient_tolerance: float = 1e-6
    step_tolerance: float = 1e-8
    hessian_damping: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.armijo_alpha < 0.5:
            raise ConfigError("solver.armijo_alpha: must lie in (0, 0.5)")
        if not 0.0 < self.reduction < 1.0:
            raise ConfigError("solver.reduction: must lie in (0, 1)")
        if self.max_iterations < 1:
            raise ConfigError("solver.max_iterations: must be positive")
        if self.gradient_tolerance <= 0.0 or self.step_tolerance <= 0.0:
            raise ConfigError("solver tolerances must be positive")
        if self.hessian_damping < 0.0:
            raise ConfigError("solver.hessian_damping: must be nonnegative")


@dataclass(frozen=True)
class LikelihoodContext:
    """Intensities, sample instants, reference values, the subcarrier basis
    Phi (N_f x L_tot with unit-modulus entries), and the noise variance."""

    intensities: np.ndarray
    sample_times: np.ndarray
    reference: np.ndarray
    basis: np.ndarray
    noise_variance: float

    def __post_init__(self):
        object.__setattr__(self, "intensities", np.ascontiguousarray(self.intensities, dtype=np.float64))
        object.__setattr__(self, "sample_times", np.asarray(self.sample_times, dtype=np.float64))
        object.__setattr__(self, "reference", np.asarray(self.reference, dtype=np.complex128))
        object.__setattr__(self, "basis", np.asarray(self.basis, dtype=np.complex128))
        n = self.intensities.size
        if n < 1:
            raise ValueError("likelihood: need at least one sample")
        if self.sample_times.size != n or self.reference.size != n or self.basis.shape[1] != n:
            raise ValueError("likelihood: sample arrays and basis columns must align")
        if np.any(self.intensities < 0.0):
            raise ValueError("likelihood: intensities must be nonnegative")
        if self.noise_variance <= 0.0:
            raise ValueError("likelihood: noise variance must be positive")

    @property
    def n_subcarriers(self):
        return self.basis.shape[0]

    @property
    def n_samples(self):
        return self.intensities.size

    @property
    def reference_amplitude(self):
        return float(np.max(np.abs(self.reference)))

    @property
    def mean_tolerance(self):
        return MU_RTOL * max(1.0, self.reference_amplitude)


def likelihood_context(record, grid, ref):
    """Context over a hologram record's full 2L-sample set."""
    times = record.sample_times
    return LikelihoodContext(
        intensities=record.intensities,
        sample_times=times,
        reference=reference_wave(ref, times),
        basis=np.exp(2j * np.pi * np.outer(grid.frequencies, times)),
        noise_variance=record.noise_variance,
    )


def _mean_field(h, ctx):
    mu = ctx.reference + ctx.basis.T @ np.asarray(h, dtype=np.complex128)
    return mu, np.abs(mu)


def _check_degenerate(mu_abs, ctx):
    bad = np.flatnonzero(mu_abs <= ctx.mean_tolerance)
    if bad.size:
        raise DegenerateMeanError(
            f"{bad.size} sample mean(s) below tolerance {ctx.mean_tolerance:.3g}",
            indices=bad,
        )


def log_likelihood(h, ctx):
    """F(h); overflow-safe via log I0."""
    _, mu_abs = _mean_field(h, ctx)
    ll = kernels.active.loglik_sum(ctx.intensities, mu_abs, ctx.noise_variance)
    return ll - ctx.n_samples * math.log(ctx.noise_variance)


def _derivative_parts(h, ctx):
    mu, mu_abs = _mean_field(h, ctx)
    _check_degenerate(mu_abs, ctx)
    ll, r1, r2, r3num = kernels.active.likelihood_parts(ctx.intensities, mu_abs, ctx.noise_variance)
    total = ll - ctx.n_samples * math.log(ctx.noise_variance)
    return mu, total, r1, r2, r3num


def wirtinger_gradient(h, ctx):
    """Gradient with respect to h*: Phi* R1 mu."""
    mu, _, r1, _, _ = _derivative_parts(h, ctx)
    return ctx.basis.conj() @ (r1 * mu)


def hessian_blocks(h, ctx):
    """The four partial Hessians (hh, h_hstar, hstar_h, hstar_hstar).

    hstar_h and hstar_hstar are the elementwise conjugates of h_hstar and hh
    (R2 is real and R3 conjugates with mu^2), so only two products are formed.
    """
    mu, _, _, r2, r3num = _derivative_parts(h, ctx)
    return _blocks_from_parts(ctx, mu, r2, r3num)


def _blocks_from_parts(ctx, mu, r2, r3num):
    phi = ctx.basis
    r3 = r3num / (4.0 * mu * mu)
    hh = (phi * r3) @ phi.T
    h_hstar = (phi * r2) @ phi.conj().T
    return HessianBlocks(hh, h_hstar, h_hstar.conj(), hh.conj())


def newton_step(gradient, blocks, damping=0.0):
    """Ascent step from the augmented 2N_f Newton system.

    A singular system is retried with escalating diagonal damping; a solved
    step that is not an ascent direction falls back to gradient ascent.
    """
    n = gradient.size
    if not np.any(gradient):
        return np.zeros(n, dtype=np.complex128)
    system = np.block([[blocks.hstar_h, blocks.hstar_hstar], [blocks.hh, blocks.h_hstar]])
    rhs = -np.concatenate([gradient.conj(), gradient])
    diag_scale = float(np.mean(np.abs(np.diag(system)))) or 1.0
    lam = damping
    step = None
    for _ in range(7):
        try:
            mat = system if lam == 0.0 else system + lam * np.eye(2 * n)
            solution = np.linalg.solve(mat, rhs)
            if not np.all(np.isfinite(solution)):
                raise np.linalg.LinAlgError("non-finite solution")
            top, bottom = solution[:n], solution[n:]
            mismatch = np.linalg.norm(top - bottom.conj())
            if mismatch > 1e-8 * max(1.0, np.linalg.norm(solution)):
                raise np.linalg.LinAlgError("conjugate pairing lost")
            step = 0.5 * (top + bottom.conj())
            break
        except np.linalg.LinAlgError:
            lam = 1e-8 * diag_scale if lam == 0.0 else 10.0 * lam
    if step is None:
        raise np.linalg.LinAlgError("augmented Newton system singular after damping retries")
    if 2.0 * np.real(np.vdot(gradient, step)) <= 0.0:
        step = gradient.copy()
    return step


def armijo_search(h, step, ctx, opts=None, gradient=None):
    """Largest q = reduction^k satisfying the sufficient-increase condition
    F(h + q step) >= F(h) + alpha q D with D = 2 Re <grad, step>; 0 after 60
    reductions signals stagnation."""
    opts = opts or SolverOptions()
    if gradient is None:
        gradient = wirtinger_gradient(h, ctx)
    d = 2.0 * float(np.real(np.vdot(gradient, step)))
    if d <= 0.0:
        raise NotAscentError("armijo: step is not an ascent direction")
    f0 = log_likelihood(h, ctx)
    q = 1.0
    for _ in range(61):
        if log_likelihood(h + q * step, ctx) >= f0 + opts.armijo_alpha * q * d:
            return q
        q *= opts.reduction
    return 0.0


def _parts_with_retry(h, ctx):
    # A vanishing sample mean is nudged along its basis column by
    # 1e-9 * A_r (bounded retries) rather than dropped, keeping the sample
    # count intact.
    nudge = 1e-9 * max(1.0, ctx.reference_amplitude)
    for _ in range(8):
        try:
            return h, _derivative_parts(h, ctx)
        except DegenerateMeanError as err:
            h = h.copy()
            for l in err.indices:
                column = ctx.basis[:, l]
                h += nudge * column.conj() / ctx.n_subcarriers
    raise DegenerateMeanError("sample means stayed degenerate after retries")


def whml_estimate(init, ctx, opts=None):
    """Newton/Armijo ascent of the hologram log-likelihood from init.

    The likelihood over accepted iterations is non-decreasing by
    construction; the Estimate records the full likelihood path, iteration
    count, and termination reason.
    """
    opts = opts or SolverOptions()
    h = np.array(init, dtype=np.complex128)
    if h.size != ctx.n_subcarriers:
        raise ValueError("whml: init length must match the basis row count")

    h, (mu, f, r1, r2, r3num) = _parts_with_retry(h, ctx)
    path = [f]
    iterations = 0
    termination = "max_iterations"
    for _ in range(opts.max_iterations):
        gradient = ctx.basis.conj() @ (r1 * mu)
        if np.linalg.norm(gradient) < opts.gradient_tolerance:
            termination = "gradient"
            break
        blocks = _blocks_from_parts(ctx, mu, r2, r3num)
        step = newton_step(gradient, blocks, opts.hessian_damping)
        d = 2.0 * float(np.real(np.vdot(gradient, step)))

        q = 1.0
        accepted = False
        trial = h
        f_trial = f
        for _ in range(61):
            trial = h + q * step
            f_trial = log_likelihood(trial, ctx)
            if f_trial >= f + opts.armijo_alpha * q * d:
                accepted = True
                break
            q *= opts.reduction
        if not accepted:
            termination = "stagnation"
            break

        step_size = q * float(np.linalg.norm(step))
        h = trial
        f = f_trial
        path.append(f)
        iterations += 1
        h, (mu, _, r1, r2, r3num) = _parts_with_retry(h, ctx)
        if step_size / max(1.0, float(np.linalg.norm(h))) < opts.step_tolerance:
            termination = "step"
            break

    return Estimate(
        h_hat=h,
        method="whml",
        iterations=iterations,
        final_log_likelihood=f,
        termination=termination,
        likelihood_path=tuple(path),
    )
