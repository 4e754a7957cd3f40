from __future__ import annotations

import itertools

import numpy as np
import pytest

from sampler_toolkit.analysis.compute_batch_statistics import compute_batch_statistics
from sampler_toolkit.analysis.compute_variance_trace import (
    TRACE_COLUMNS,
    check_variance_identity,
    contraction_constant,
    first_order_contractions,
    first_order_prediction,
    fm_variance_trace,
    gaussian_kl_from_trace,
    inner_contraction,
    isotropic_kl,
    tm_variance_trace,
)
from sampler_toolkit.analysis.fit_convergence_rate import fit_rate
from sampler_toolkit.divergence.compute_gaussian_kl import gaussian_kl
from sampler_toolkit.errors import DomainError


def test_fm_trace_small_step_counts() -> None:
    assert fm_variance_trace(1.0, 1).s_fm[-1] == 0.0
    assert fm_variance_trace(1.0, 2).s_fm[-1] == pytest.approx(0.25, rel=1e-14)


def test_fm_trace_converges_to_target_variance() -> None:
    trace = fm_variance_trace(1.0, 1024)
    assert abs(trace.s_fm[-1] - 1.0) < 0.01


def test_single_fm_step_has_infinite_kl() -> None:
    report = gaussian_kl_from_trace(fm_variance_trace(1.0, 1, d=2))
    assert report.kl_fm == float('inf')
    assert np.isnan(report.kl_tm)


def test_inner_contraction_limits() -> None:
    assert inner_contraction(1.0, None) == 1.0
    for tau in (0.01, 0.5, 1.0, 7.0):
        assert inner_contraction(tau, 1) == 0.0
        values = [inner_contraction(tau, S) for S in (2, 4, 16, 256)]
        assert all(0.0 < v < 1.0 for v in values)
        assert values == sorted(values)


def test_inner_contraction_first_order_rate() -> None:
    ratio = (1 - inner_contraction(1.0, 64)) / (1 - inner_contraction(1.0, 128))
    assert ratio == pytest.approx(2.0, rel=0.1)


def test_exact_inner_sampler_keeps_the_path_variance() -> None:
    trace = tm_variance_trace(1.0, 2, None)
    np.testing.assert_allclose(trace.s_tm, trace.B, rtol=1e-12)
    assert gaussian_kl_from_trace(trace).kl_tm == pytest.approx(0.0, abs=1e-12)


def test_tm_two_by_two_sits_strictly_inside() -> None:
    trace = tm_variance_trace(1.0, 2, 2)
    assert 0.25 < trace.s_tm[-1] < 1.0
    assert trace.s_fm[-1] == pytest.approx(0.25)


def test_tm_with_one_inner_step_matches_fm() -> None:
    trace = tm_variance_trace(0.6, 5, 1)
    np.testing.assert_array_equal(trace.s_tm, trace.s_fm)


def test_variance_sandwich_over_a_grid() -> None:
    violations = 0
    for sigma, N, S in itertools.product((0.05, 0.3, 1.0, 2.0, 6.0), (1, 2, 3, 8, 32), (1, 2, 4, 16, None)):
        trace = tm_variance_trace(sigma, N, S)
        lower = trace.s_fm <= trace.s_tm * (1 + 1e-12)
        upper = trace.s_tm <= trace.B * (1 + 1e-12)
        violations += int(np.sum(~lower) + np.sum(~upper))
        if S is not None and S >= 2 and N >= 2:
            assert trace.s_tm[-1] > trace.s_fm[-1]
        report = gaussian_kl_from_trace(trace)
        assert report.kl_tm <= report.kl_fm
    assert violations == 0


def test_vanishing_variance_removes_the_tm_advantage() -> None:
    for N, S in itertools.product((1, 2, 8, 64), (2, 8, None)):
        trace = tm_variance_trace(1e-8, N, S)
        assert abs(trace.s_tm[-1] - trace.s_fm[-1]) <= 1e-6


def test_trace_frame_and_identity() -> None:
    trace = tm_variance_trace(0.7, 6, 3, d=4)
    frame = trace.to_frame()
    assert list(frame.columns) == TRACE_COLUMNS
    assert len(frame) == 7
    assert np.isnan(frame['a'].iloc[-1])
    assert check_variance_identity(trace) < 1e-12
    np.testing.assert_allclose(trace.injected_variance()[:-1], (1 / 6) ** 2 * trace.c_S[:-1] * trace.tau2[:-1])


def test_trace_mean_offsets_reach_the_target_mean() -> None:
    trace = fm_variance_trace(0.9, 5)
    mu = np.array([1.0, -3.0])
    mean = np.zeros(2)
    for n in range(trace.N):
        mean = trace.a[n] * mean + trace.b(mu)[n]
    np.testing.assert_allclose(mean, mu, rtol=1e-12)


def test_kl_examples() -> None:
    assert isotropic_kl(1.0, 3) == 0.0
    assert isotropic_kl(0.25, 1) == pytest.approx(0.5 * (0.25 - 1 - np.log(0.25)), rel=1e-12)
    assert isotropic_kl(0.25, 1) == pytest.approx(0.31815, abs=1e-5)
    assert isotropic_kl(0.25, 1) == pytest.approx(gaussian_kl([0.0], 0.25, [0.0], 1.0).value, rel=1e-12)
    with pytest.raises(DomainError):
        isotropic_kl(-0.1, 1)


def test_contraction_constant_closed_form_at_unit_sigma() -> None:
    assert contraction_constant(1.0) == pytest.approx(1 + np.pi / 2, rel=1e-9)


def test_first_order_prediction_matches_long_fm_runs() -> None:
    sigma, N = 1.0, 1024
    r_N = fm_variance_trace(sigma, N).r_fm[-1]
    assert r_N == pytest.approx(first_order_prediction(sigma, N), abs=5e-5)


def test_first_order_contractions_track_exact_values() -> None:
    trace = tm_variance_trace(1.0, 4, 256)
    approx = first_order_contractions(trace)
    np.testing.assert_allclose(approx[:-1], trace.c_S[:-1], atol=1e-3)
    assert np.isnan(approx[-1])


def test_fit_rate_on_exact_power_law() -> None:
    steps = np.array([2, 4, 8, 16, 32])
    fit = fit_rate(steps, 3.0 / steps ** 2)
    assert fit.slope == pytest.approx(-2.0, abs=1e-12)
    assert fit.intercept == pytest.approx(np.log(3.0))
    assert fit.residual < 1e-12
    assert fit.fit_range == (2.0, 32.0)


def test_fit_rate_drops_points_at_the_floor() -> None:
    steps = np.array([1, 2, 4, 8, 16])
    kl = np.array([1.0, 0.25, 0.0625, 0.015625, 1e-16])
    fit = fit_rate(steps, kl)
    assert fit.n_excluded == 1
    assert fit.slope == pytest.approx(-2.0)


@pytest.mark.parametrize('kl', [[1.0, 0.5, 0.0, 0.1], [1.0, np.inf, 0.2, 0.1], [1.0, 0.5]])
def test_fit_rate_rejects_bad_input(kl) -> None:
    with pytest.raises(DomainError):
        fit_rate(np.arange(1, len(kl) + 1), kl)


def test_fm_rate_is_quadratic() -> None:
    steps = [64, 128, 256, 512, 1024]
    kl = [gaussian_kl_from_trace(fm_variance_trace(1.0, N)).kl_fm for N in steps]
    assert -2.15 <= fit_rate(steps, kl).slope <= -1.85


def test_tm_rate_in_inner_steps_is_quadratic() -> None:
    steps = [64, 128, 256, 512, 1024]
    kl = [gaussian_kl_from_trace(tm_variance_trace(1.0, 4, S)).kl_tm for S in steps]
    assert -2.15 <= fit_rate(steps, kl).slope <= -1.85


def test_trace_arguments_are_validated() -> None:
    with pytest.raises(DomainError):
        fm_variance_trace(0.0, 4)
    with pytest.raises(DomainError):
        fm_variance_trace(1.0, 0)
    with pytest.raises(DomainError):
        tm_variance_trace(1.0, 4, 0)


def test_batch_statistics_on_known_sample(rng) -> None:
    states = 2.0 + 3.0 * rng.standard_normal((100_000, 2))
    stats = compute_batch_statistics(states)
    assert abs(stats['variance'] - 9.0) < 5 * stats['variance_se']
    assert stats['lower'] < stats['variance'] < stats['upper']
    np.testing.assert_allclose(stats['mean'], 2.0, atol=5 * stats['mean_se'].max())
    with pytest.raises(DomainError):
        compute_batch_statistics(np.zeros((1, 2)))
