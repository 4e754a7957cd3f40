from __future__ import annotations

import numpy as np
import pytest

from sampler_toolkit.errors import DomainError
from sampler_toolkit.targets.compute_path_coefficients import (
    path_coefficients,
    path_cross_covariance,
    path_variance,
    variance_minimiser,
)
from sampler_toolkit.targets.define_gaussian_targets import (
    GaussianMixtureTarget,
    Schedule,
    UnimodalGaussianTarget,
    as_mixture,
    circle_mixture,
    grid_mixture,
)


@pytest.mark.parametrize('t, sigma, expected', [(0.0, 0.5, 1.0), (1.0, 0.5, 0.25), (0.5, 1.0, 0.5)])
def test_path_variance_examples(t: float, sigma: float, expected: float) -> None:
    assert path_variance(t, sigma) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize('t, sigma, expected', [(0.0, 2.0, -1.0), (1.0, 2.0, 4.0), (0.5, 1.0, 0.0)])
def test_path_cross_covariance_examples(t: float, sigma: float, expected: float) -> None:
    assert path_cross_covariance(t, sigma) == pytest.approx(expected, abs=1e-15)


def test_path_coefficients_endpoints() -> None:
    start = path_coefficients(0.0, 1.0)
    assert start.k == -1.0
    assert start.tau2 == 1.0

    end = path_coefficients(1.0, 0.1)
    assert end.k == pytest.approx(1.0, rel=1e-12)
    assert end.tau2 == pytest.approx(1.0, rel=1e-12)

    middle = path_coefficients(0.5, 1.0)
    assert middle.k == 0.0
    assert middle.tau2 == pytest.approx(2.0)


def test_path_identity_holds_on_a_grid() -> None:
    for sigma in (1e-4, 0.1, 1.0, 3.0, 50.0):
        for t in np.linspace(0.0, 1.0, 41):
            c = path_coefficients(t, sigma)
            assert c.A ** 2 + sigma ** 2 == pytest.approx((1 + sigma ** 2) * c.B, rel=1e-10)
            assert c.tau2 == pytest.approx(sigma ** 2 / c.B)


@pytest.mark.parametrize('t, sigma', [(-0.1, 1.0), (1.01, 1.0), (0.5, 0.0), (0.5, -1.0), (float('nan'), 1.0)])
def test_path_functions_reject_bad_domain(t: float, sigma: float) -> None:
    with pytest.raises(DomainError):
        path_variance(t, sigma)
    with pytest.raises(DomainError):
        path_coefficients(t, sigma)


def test_variance_minimiser_is_grid_minimum() -> None:
    sigma = 0.7
    t_star, b_star = variance_minimiser(sigma)
    grid = np.linspace(0, 1, 2001)
    assert b_star == pytest.approx(sigma ** 2 / (1 + sigma ** 2))
    assert b_star <= min(path_variance(t, sigma) for t in grid) + 1e-15
    assert path_variance(t_star, sigma) == pytest.approx(b_star)


def test_schedule_grid_ends_exactly_at_one() -> None:
    for N in (1, 3, 7, 10, 1000):
        schedule = Schedule(N, 4)
        assert schedule.grid[-1] == 1.0
        assert np.all(np.diff(schedule.grid) > 0)
        assert schedule.dt_exact * N == 1
        assert schedule.ds == 0.25


@pytest.mark.parametrize('n_outer, n_inner', [(0, 1), (2, 0), (1.5, 1), (True, 1)])
def test_schedule_rejects_non_positive_integers(n_outer, n_inner) -> None:
    with pytest.raises(DomainError):
        Schedule(n_outer, n_inner)


def test_unimodal_target_validation() -> None:
    target = UnimodalGaussianTarget([1.0, 2.0, 3.0], 2)
    assert target.d == 3
    assert target.sigma == 2.0
    with pytest.raises(DomainError):
        UnimodalGaussianTarget([0.0], 0.0)
    with pytest.raises(DomainError):
        UnimodalGaussianTarget([], 1.0)


def test_mixture_target_validation() -> None:
    with pytest.raises(DomainError):
        GaussianMixtureTarget([0.5, 0.6], [[0.0], [1.0]], [1.0, 1.0])
    with pytest.raises(DomainError):
        GaussianMixtureTarget([0.5, 0.5], [[0.0], [0.0]], [1.0, 1.0])
    with pytest.raises(DomainError):
        GaussianMixtureTarget([0.5, 0.5], [[0.0], [1.0]], [1.0, -1.0])

    # a shared mean is allowed when the sigmas differ
    nested = GaussianMixtureTarget([0.5, 0.5], [[0.0], [0.0]], [1.0, 2.0])
    assert nested.min_separation == 0.0


def test_single_component_mixture_has_infinite_separation() -> None:
    mixture = as_mixture(UnimodalGaussianTarget([1.0, -1.0], 0.5))
    assert mixture.n_components == 1
    assert np.isinf(mixture.min_separation)
    np.testing.assert_array_equal(mixture.means[0], [1.0, -1.0])


def test_geometry_builders() -> None:
    circle = circle_mixture(2 * np.pi / 9, sigma=0.1, d=4)
    assert circle.d == 4
    assert circle.min_separation == pytest.approx(2 * np.sin(2 * np.pi / 9))
    np.testing.assert_array_equal(circle.means[:, 2:], 0.0)

    lattice = grid_mixture(8.0, half_width=2, d=2)
    assert lattice.n_components == 25
    assert lattice.min_separation == pytest.approx(8.0)
    assert lattice.weights.sum() == pytest.approx(1.0, abs=1e-12)
