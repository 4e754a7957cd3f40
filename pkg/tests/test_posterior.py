from __future__ import annotations

import numpy as np
import pytest

from sampler_toolkit.errors import DomainError
from sampler_toolkit.posterior.compute_posterior import (
    UnimodalPosterior,
    log_density,
    mixture_posterior,
    nearest_mode,
    posterior_mean_batch,
    responsibilities,
    unimodal_posterior,
)
from sampler_toolkit.posterior.sample_posterior import sample_posterior, sample_posterior_batch
from sampler_toolkit.targets.define_gaussian_targets import (
    GaussianMixtureTarget,
    UnimodalGaussianTarget,
    as_mixture,
    circle_mixture,
)


def test_unimodal_posterior_examples() -> None:
    post = unimodal_posterior(UnimodalGaussianTarget([0.0, 0.0], 1.0), 0.5, [0.0, 0.0])
    np.testing.assert_allclose(post.mean, 0.0, atol=1e-15)
    assert post.tau2 == pytest.approx(2.0)

    post = unimodal_posterior(UnimodalGaussianTarget([0.0], 1.0), 0.0, [0.0])
    np.testing.assert_allclose(post.mean, 0.0)
    assert post.tau2 == pytest.approx(1.0)

    # x on the path mean t mu gives posterior mean mu
    post = unimodal_posterior(UnimodalGaussianTarget([2.0], 0.5), 0.8, [1.6])
    np.testing.assert_allclose(post.mean, [2.0], rtol=1e-12)
    assert post.tau2 == pytest.approx(1.25)


def test_unimodal_posterior_endpoints() -> None:
    target = UnimodalGaussianTarget([1.0, -2.0], 0.3)
    x = np.array([0.4, 0.7])
    # at t=0, X0 = x and V = X1 - x
    start = unimodal_posterior(target, 0.0, x)
    np.testing.assert_allclose(start.mean, target.mu - x)
    assert start.tau2 == pytest.approx(0.09)
    # at t=1, X1 = x and V = x - X0
    end = unimodal_posterior(target, 1.0, x)
    np.testing.assert_allclose(end.mean, x, rtol=1e-12)
    assert end.tau2 == pytest.approx(1.0)


def test_unimodal_posterior_rejects_wrong_dimension(unimodal_target) -> None:
    with pytest.raises(DomainError):
        unimodal_posterior(unimodal_target, 0.5, [0.0, 0.0, 0.0])


def test_responsibilities_symmetry_and_single_component(two_mode_target) -> None:
    np.testing.assert_allclose(responsibilities(two_mode_target, 0.6, [0.0]), [0.5, 0.5])
    single = as_mixture(UnimodalGaussianTarget([3.0], 1.0))
    np.testing.assert_array_equal(responsibilities(single, 0.4, [10.0]), [1.0])


def test_responsibilities_at_path_mean_match_closed_form(two_mode_target) -> None:
    t = 0.3
    B = (1 - t) ** 2 + t ** 2
    D = 10.0
    w = responsibilities(two_mode_target, t, [t * -5.0])
    assert w[0] == pytest.approx(1.0 / (1.0 + np.exp(-t ** 2 * D ** 2 / (2 * B))), rel=1e-12)


def test_responsibilities_equal_weights_at_time_zero(rng) -> None:
    target = GaussianMixtureTarget([0.2, 0.3, 0.5], rng.normal(size=(3, 2)), [0.5, 1.0, 2.0])
    np.testing.assert_allclose(responsibilities(target, 0.0, rng.normal(size=2)), target.weights, rtol=1e-12)


def test_responsibilities_stay_finite_far_from_modes(two_mode_target) -> None:
    w = responsibilities(two_mode_target, 0.9, [1e4])
    assert np.all(np.isfinite(w))
    assert w.sum() == pytest.approx(1.0)
    assert w[1] == 1.0


def test_mixture_posterior_collapses_to_unimodal() -> None:
    target = UnimodalGaussianTarget([1.0, 2.0], 0.7)
    x = np.array([0.3, -0.1])
    single = mixture_posterior(as_mixture(target), 0.45, x)
    direct = unimodal_posterior(target, 0.45, x)
    np.testing.assert_allclose(single.mean, direct.mean, rtol=1e-14)
    assert single.component_posteriors[0].tau2 == pytest.approx(direct.tau2, rel=1e-14)


def test_mixture_posterior_mean_is_weighted_component_mean(rng) -> None:
    target = GaussianMixtureTarget([0.25, 0.75], [[-1.0, 0.5], [2.0, 1.0]], [0.6, 1.3])
    X = rng.normal(size=(5, 2))
    batch = posterior_mean_batch(target, 0.35, X)
    for row, x in zip(batch, X):
        post = mixture_posterior(target, 0.35, x)
        expected = sum(w * c.mean for w, c in zip(post.responsibilities, post.component_posteriors))
        np.testing.assert_allclose(row, expected, rtol=1e-12)
        np.testing.assert_allclose(post.mean, expected, rtol=1e-12)


def test_mixture_posterior_deep_in_good_region() -> None:
    target = GaussianMixtureTarget([0.5, 0.5], [[-10.0], [10.0]], [1.0, 1.0])
    post = mixture_posterior(target, 0.9, [9.0])
    assert post.responsibilities[1] > 0.99


def test_nearest_mode_geometry(two_mode_target) -> None:
    info = nearest_mode(two_mode_target, 0.5, [2.5])
    assert info.k_star == 1
    assert info.distance == 0.0
    assert info.margin == pytest.approx(5.0)

    tie = nearest_mode(two_mode_target, 0.5, [0.0])
    assert tie.k_star == 0
    assert tie.margin == 0.0

    single = nearest_mode(UnimodalGaussianTarget([1.0], 1.0), 0.5, [0.0])
    assert single.margin == float('inf')


def test_nearest_mode_on_circle() -> None:
    theta = 2 * np.pi / 9
    target = circle_mixture(theta, sigma=0.1)
    info = nearest_mode(target, 1.0, target.means[0])
    assert info.k_star == 0
    assert info.margin == pytest.approx(2 * np.sin(theta), rel=1e-12)


def test_degenerate_posterior_returns_point_mass(rng) -> None:
    draws = sample_posterior(UnimodalPosterior(mean=np.zeros(3), tau2=0.0), rng, 5)
    np.testing.assert_array_equal(draws, np.zeros((5, 3)))


def test_sample_posterior_moments(unimodal_target) -> None:
    post = unimodal_posterior(unimodal_target, 0.4, [0.2, 0.1])
    M = 200_000
    draws = sample_posterior(post, np.random.default_rng(1), M)
    tau = np.sqrt(post.tau2)
    assert np.all(np.abs(draws.mean(axis=0) - post.mean) < 4 * tau / np.sqrt(M))
    np.testing.assert_allclose(draws.var(axis=0), post.tau2, rtol=0.02)


def test_sample_posterior_is_deterministic_for_a_seed(two_mode_target) -> None:
    post = mixture_posterior(two_mode_target, 0.3, [0.4])
    first = sample_posterior(post, np.random.default_rng(7), 100)
    second = sample_posterior(post, np.random.default_rng(7), 100)
    np.testing.assert_array_equal(first, second)


def test_mixture_sampling_matches_responsibilities(two_mode_target) -> None:
    t = 0.2
    x = np.array([0.3])
    post = mixture_posterior(two_mode_target, t, x)
    M = 100_000
    draws = sample_posterior_batch(two_mode_target, t, np.repeat(x[None, :], M, axis=0), np.random.default_rng(3))
    # component posterior means sit near -6.1 and +5.6 with std ~1.2, so the sign identifies the component
    share = float(np.mean(draws[:, 0] > 0))
    w = post.responsibilities[1]
    assert abs(share - w) < 4 * np.sqrt(w * (1 - w) / M) + 1e-3


def test_sample_posterior_rejects_empty_request(unimodal_target, rng) -> None:
    post = unimodal_posterior(unimodal_target, 0.5, [0.0, 0.0])
    with pytest.raises(DomainError):
        sample_posterior(post, rng, 0)


def test_log_density_of_unimodal_target() -> None:
    target = UnimodalGaussianTarget([1.0, -1.0], 2.0)
    X = np.array([[1.0, -1.0], [3.0, 0.0]])
    sq = np.sum((X - target.mu) ** 2, axis=1)
    expected = -np.log(2 * np.pi * 4.0) - sq / 8.0
    np.testing.assert_allclose(log_density(target, X), expected, rtol=1e-12)
