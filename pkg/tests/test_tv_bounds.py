from __future__ import annotations

import numpy as np
import pytest
from scipy.stats import norm

from sampler_toolkit.bounds.compute_tv_bounds import (
    BoundValue,
    brute_force_tv,
    cor2_bound,
    posterior_tv,
    tv_bound,
)
from sampler_toolkit.errors import DomainError, PreconditionError
from sampler_toolkit.experiments.run_bounds_check import (
    TV_QUADRATURE_SLACK,
    check_cor2_bound,
    check_tv_bound,
)
from sampler_toolkit.posterior.compute_posterior import MixturePosterior, UnimodalPosterior, unimodal_posterior
from sampler_toolkit.targets.define_gaussian_targets import GaussianMixtureTarget, UnimodalGaussianTarget


def test_tv_bound_reference_configuration(two_mode_target) -> None:
    report = tv_bound(two_mode_target, 0.8, [4.0], with_brute_force=True)
    assert report.c_pi == pytest.approx(1.0)
    assert report.k_star == 1
    assert report.b_min == report.b_max
    assert report.brute_force_tv <= report.bound_value + TV_QUADRATURE_SLACK


def test_tv_bound_with_equal_variances_reduces_to_margin_term(two_mode_target) -> None:
    t, x = 0.5, np.array([2.0])
    report = tv_bound(two_mode_target, t, x)
    B = (1 - t) ** 2 + t ** 2
    assert report.bound_value == pytest.approx(report.c_pi * np.exp(-report.margin ** 2 / (2 * B)), rel=1e-12)


def test_tv_bound_single_component() -> None:
    report = tv_bound(UnimodalGaussianTarget([0.0, 1.0], 1.0), 0.5, [0.0, 0.0], with_brute_force=True)
    assert report.bound_value == 0.0
    assert report.c_pi == 0.0
    assert report.brute_force_tv == 0.0
    assert not report.vacuous


def test_tv_bound_rejects_time_zero(two_mode_target) -> None:
    with pytest.raises(DomainError):
        tv_bound(two_mode_target, 0.0, [0.0])


def test_unequal_weights_raise_c_pi() -> None:
    target = GaussianMixtureTarget([0.2, 0.8], [[-3.0], [3.0]], [1.0, 1.0])
    assert tv_bound(target, 0.9, [-2.7]).c_pi == pytest.approx(4.0)
    assert tv_bound(target, 0.9, [2.7]).c_pi == pytest.approx(0.25)


def test_cor2_bound_is_one_when_exponent_vanishes() -> None:
    half = np.sqrt(2.0)
    target = GaussianMixtureTarget([0.5, 0.5], [[-half], [half]], [1.0, 1.0])
    bound = cor2_bound(target, 1.0, [-half])
    assert bound.value == pytest.approx(1.0, rel=1e-12)


def test_cor2_bound_decays_with_separation() -> None:
    target = GaussianMixtureTarget([0.5, 0.5], [[-50.0], [50.0]], [1.0, 1.0])
    assert cor2_bound(target, 1.0, [-50.0]).value < 1e-100


def test_cor2_bound_above_brute_force_for_separated_modes(two_mode_target) -> None:
    t = 0.9
    x = [t * 5.0]
    assert brute_force_tv(two_mode_target, t, x) < cor2_bound(two_mode_target, t, x).value


@pytest.mark.parametrize('target, x, condition', [
    (GaussianMixtureTarget([0.5, 0.5], [[-2.0], [2.0]], [1.0, 2.0]), [-1.0], 'equal_variance'),
    (GaussianMixtureTarget([0.5, 0.5], [[-2.0], [2.0]], [1.0, 1.0]), [0.0], 'near_path_mean'),
    (UnimodalGaussianTarget([0.0], 1.0), [0.0], 'components'),
])
def test_cor2_bound_preconditions(target, x, condition) -> None:
    with pytest.raises(PreconditionError) as info:
        cor2_bound(target, 0.5, x)
    assert info.value.condition == condition


def test_brute_force_tv_edge_cases() -> None:
    assert brute_force_tv(UnimodalGaussianTarget([0.0], 1.0), 0.5, [0.0]) == 0.0
    target = GaussianMixtureTarget([0.5, 0.5], [[0.0, 0.0, 0.0], [1.0, 1.0, 1.0]], [1.0, 1.0])
    with pytest.raises(DomainError):
        brute_force_tv(target, 0.5, np.zeros(3))


def test_posterior_tv_of_split_identical_components() -> None:
    post = unimodal_posterior(UnimodalGaussianTarget([1.0, -1.0], 0.5), 0.4, [0.2, 0.3])
    split = MixturePosterior(responsibilities=np.array([0.5, 0.5]), component_posteriors=[post, post])
    assert posterior_tv(split, post) == pytest.approx(0.0, abs=1e-12)


def test_posterior_tv_of_shifted_gaussians() -> None:
    '''TV(N(0, 1), N(1, 1)) = 2 Phi(1/2) - 1.'''
    p = UnimodalPosterior(mean=np.array([0.0]), tau2=1.0)
    q = UnimodalPosterior(mean=np.array([1.0]), tau2=1.0)
    assert posterior_tv(p, q) == pytest.approx(2 * norm.cdf(0.5) - 1, abs=1e-3)


def test_bound_value_vacuous_flag() -> None:
    assert BoundValue(1.0).vacuous
    assert BoundValue(3.5).vacuous
    assert not BoundValue(0.999).vacuous
    assert float(BoundValue(0.25)) == 0.25


@pytest.mark.parametrize('config_id', range(4))
def test_random_tv_configurations_respect_the_bound(config_id: int) -> None:
    assert all(row['pass'] for row in check_tv_bound(0, config_id))
    assert all(row['pass'] for row in check_cor2_bound(0, config_id))


@pytest.mark.slow
def test_many_random_tv_configurations_respect_the_bound() -> None:
    rows = [row for i in range(4, 60) for row in check_tv_bound(1, i) + check_cor2_bound(1, i)]
    assert all(row['pass'] for row in rows)
