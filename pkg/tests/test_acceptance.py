"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines as they
complete.
"""

import cmath
import math
import time

import numpy as np
import pytest

from holosense import (
    GrowsSettings,
    RecoveryContext,
    crlb_matrix,
    default_scenario,
    grows_estimate,
    hessian_blocks,
    information_matrices,
    j_gamma_approx,
    j_gamma_quadrature,
    likelihood_context,
    log_likelihood,
    object_wave,
    recover_geometric,
    recover_quadratic,
    reference_for_phase_step,
    run_trial,
    sample_holograms,
    whml_estimate,
    wirtinger_gradient,
)
from holosense.harness import SweepConfig, run_sweep, write_csv
from tests.conftest import grows_for_record, make_grid, make_instance, random_channel
from tests.test_whml import fd_blocks, fd_gradient


def report(name, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    print(f"[acceptance] {name}: {status}{' (' + detail + ')' if detail else ''}")
    assert ok, f"{name}: {detail}"


def test_noiseless_end_to_end_exactness():
    started = time.monotonic()
    sizes = [4, 32, 132]
    worst = 0.0
    for seed in range(50):
        n_f = sizes[seed % 3]
        scenario = default_scenario(
            n_f=n_f, samples_per_symbol=n_f, snr_db=None, k_factor=4.0,
            trials=1, seed=seed, estimators=("grows",),
        )
        result = run_trial(scenario, 0)
        worst = max(worst, math.sqrt(float(np.max(result.ratios["grows"]))))
    elapsed = time.monotonic() - started
    report(
        "noiseless end-to-end exactness",
        worst < 1e-9 and elapsed < 30.0,
        f"worst rel err {worst:.2e}, {elapsed:.1f}s",
    )


def test_recovery_formula_equivalence():
    started = time.monotonic()
    rng = np.random.default_rng(424242)
    worst = 0.0
    for _ in range(10**4):
        a_r = rng.uniform(0.5, 4.0)
        delta = rng.uniform(0.05, math.pi - 0.05) * rng.choice([-1.0, 1.0])
        e_o = a_r * rng.uniform(0.0, 0.999) * cmath.exp(1j * rng.uniform(-math.pi, math.pi))
        theta_r = rng.uniform(-math.pi, math.pi)
        e_r = a_r * cmath.exp(1j * theta_r)
        e_i1 = abs(e_r + e_o) ** 2
        e_i2 = abs(cmath.exp(1j * delta) * e_r + e_o) ** 2
        ctx = RecoveryContext(amplitude=a_r, delta=delta, e_r_at_t=e_r)
        geo = recover_geometric(e_i1, e_i2, ctx)
        quad = recover_quadratic(e_i1, e_i2, ctx, theta_r / (2 * math.pi), 1.0)
        worst = max(worst, abs(geo - quad))
    elapsed = time.monotonic() - started
    report(
        "recovery formula equivalence",
        worst < 1e-9 and elapsed < 5.0,
        f"worst |diff| {worst:.2e}, {elapsed:.1f}s",
    )


def test_wirtinger_calculus_consistency():
    started = time.monotonic()
    rng = np.random.default_rng(7)
    worst_grad = 0.0
    worst_hess = 0.0
    for i in range(20):
        n_f = 1 + i % 4
        samples = min(4, max(1, 1 + i % 4))  # L_tot = 2 * samples <= 8
        ctx, *_ , h_true = make_instance(rng, n_f=n_f, samples=samples, snr_db=10.0)
        h = h_true + 0.05 * random_channel(rng, n_f)
        grad = wirtinger_gradient(h, ctx)
        fd = fd_gradient(lambda v: log_likelihood(v, ctx), h)
        worst_grad = max(worst_grad, np.linalg.norm(grad - fd) / np.linalg.norm(fd))
        blocks = hessian_blocks(h, ctx)
        fd_b = fd_blocks(lambda v: wirtinger_gradient(v, ctx), h)
        for name in ("hh", "h_hstar", "hstar_h", "hstar_hstar"):
            a, b = getattr(blocks, name), getattr(fd_b, name)
            worst_hess = max(worst_hess, np.linalg.norm(a - b) / np.linalg.norm(b))
    elapsed = time.monotonic() - started
    report(
        "wirtinger calculus vs finite differences",
        worst_grad < 1e-5 and worst_hess < 1e-4 and elapsed < 10.0,
        f"grad {worst_grad:.2e}, hessian {worst_hess:.2e}, {elapsed:.1f}s",
    )


def test_newton_armijo_monotonicity():
    rng = np.random.default_rng(99)
    ok = True
    for _ in range(20):
        ctx, record, grid, ref, _ = make_instance(rng, n_f=4, samples=8, snr_db=10.0)
        init = grows_for_record(record, grid, ref).h_hat
        est = whml_estimate(init, ctx)
        path = np.asarray(est.likelihood_path)
        ok = ok and bool(np.all(np.diff(path) >= 0.0))
    report("newton/armijo log-likelihood monotonicity", ok)


def test_j_approximation_bound():
    started = time.monotonic()
    gammas = np.logspace(0.0, 2.0, 50)
    errors = np.array([abs(j_gamma_approx(g) - j_gamma_quadrature(g)) for g in gammas])
    low = errors[gammas <= 10.0].max()
    high = errors[gammas >= 10.0].max()
    elapsed = time.monotonic() - started
    report(
        "j-approximation bound",
        errors.max() <= 0.07 and high < low and elapsed < 10.0,
        f"max err {errors.max():.4f}, [1,10] {low:.4f} vs [10,100] {high:.6f}, {elapsed:.1f}s",
    )


def test_bound_validity_and_ml_gain():
    started = time.monotonic()
    rng = np.random.default_rng(606)
    n_f = 32
    grid = make_grid(n_f)
    h = random_channel(rng, n_f)
    times = np.concatenate([np.arange(n_f), np.arange(n_f) + n_f]) * grid.symbol_period / n_f
    e_o = object_wave(h, grid, times)
    a_r = 4.0 * float(np.max(np.abs(e_o)))
    sigma2 = float(np.mean(np.abs(e_o) ** 2)) / 10.0  # SNR 10 dB
    ref = reference_for_phase_step(grid, math.pi / 2, a_r)
    settings = GrowsSettings(n_f, grid, ref)

    grows_err = np.empty(500)
    whml_err = np.empty(500)
    for trial in range(500):
        record = sample_holograms(h, grid, ref, n_f, sigma2, rng)
        g_est = grows_estimate(record, settings)
        grows_err[trial] = float(np.sum(np.abs(g_est.h_hat - h) ** 2))
        ctx = likelihood_context(record, grid, ref)
        m_est = whml_estimate(g_est.h_hat, ctx)
        whml_err[trial] = float(np.sum(np.abs(m_est.h_hat - h) ** 2))

    from holosense import LikelihoodContext

    ctx0 = LikelihoodContext(
        intensities=np.abs(a_r * np.exp(2j * np.pi * ref.frequency * times) + e_o) ** 2,
        sample_times=times,
        reference=a_r * np.exp(2j * np.pi * ref.frequency * times),
        basis=np.exp(2j * np.pi * np.outer(grid.frequencies, times)),
        noise_variance=sigma2,
    )
    report_matrix = crlb_matrix(*information_matrices(h, ctx0))
    floor = report_matrix.trace_floor
    se = grows_err.std() / math.sqrt(grows_err.size)
    power = float(np.sum(np.abs(h) ** 2))
    nmse_grows = 10 * math.log10(grows_err.mean() / power)
    nmse_whml = 10 * math.log10(whml_err.mean() / power)
    elapsed = time.monotonic() - started
    report(
        "bound validity and limited ml gain",
        grows_err.mean() >= floor - 3.0 * se
        and nmse_whml <= nmse_grows + 0.5
        and elapsed < 300.0,
        f"err {grows_err.mean():.4g} vs floor {floor:.4g} (se {se:.2g}); "
        f"whml {nmse_whml:.2f} dB vs grows {nmse_grows:.2f} dB, {elapsed:.0f}s",
    )


def test_trend_reproduction_at_desk_scale():
    started = time.monotonic()
    base = default_scenario(n_f=132, trials=100, seed=20260809, estimators=("grows",))
    snr_rows = run_sweep(SweepConfig(base=base, variable="snr", values=(-10.0, 0.0, 10.0, 20.0, 30.0)))
    snr_nmse = [row.nmse_db for row in snr_rows]
    snr_ok = all(b < a for a, b in zip(snr_nmse, snr_nmse[1:]))

    base_k = default_scenario(n_f=132, snr_db=10.0, trials=100, seed=20260809, estimators=("grows",))
    k_rows = run_sweep(SweepConfig(base=base_k, variable="k", values=(2.0, 4.0, 8.0, 16.0)))
    k_nmse = [row.nmse_db for row in k_rows]
    k_crlb = [row.crlb_db for row in k_rows]
    k_ok = all(b <= a for a, b in zip(k_nmse, k_nmse[1:]))
    crlb_ok = all(b <= a for a, b in zip(k_crlb, k_crlb[1:]))
    elapsed = time.monotonic() - started
    report(
        "trend reproduction at desk scale",
        snr_ok and k_ok and crlb_ok and elapsed < 600.0,
        f"snr {['%.2f' % v for v in snr_nmse]}, k {['%.3f' % v for v in k_nmse]}, "
        f"crlb {['%.3f' % v for v in k_crlb]}, {elapsed:.0f}s",
    )


def test_determinism_across_worker_counts(tmp_path):
    base = default_scenario(n_f=8, samples_per_symbol=16, trials=6, seed=31, estimators=("grows", "whml"))
    cfg = SweepConfig(base=base, variable="snr", values=(0.0, 10.0))
    contents = []
    for workers in (1, 2, 3):
        path = tmp_path / f"out_{workers}.csv"
        write_csv(run_sweep(cfg, workers=workers), path)
        contents.append(path.read_bytes())
    report(
        "determinism across worker counts",
        contents[0] == contents[1] == contents[2],
        f"{len(contents[0])} bytes",
    )
