from __future__ import annotations

import numpy as np
import pytest

from sampler_toolkit.analysis.compute_variance_trace import fm_variance_trace, gaussian_kl_from_trace
from sampler_toolkit.bounds.compare_mixture_kl import (
    COMPARISON_COLUMNS,
    dominant_log_responsibility,
    hitting_step,
    kl_gap_decomposition,
    mixture_kl_comparison,
)
from sampler_toolkit.cost.compute_cost_model import IMAGE_TASK, cost
from sampler_toolkit.errors import DomainError, PreconditionError
from sampler_toolkit.experiments.run_bounds_check import check_kl_gap
from sampler_toolkit.experiments.run_mixture_kl import matched_cost_pairs
from sampler_toolkit.samplers.run_euler_samplers import SamplerKind
from sampler_toolkit.targets.define_gaussian_targets import (
    GaussianMixtureTarget,
    Schedule,
    UnimodalGaussianTarget,
    circle_mixture,
)


def test_gap_vanishes_for_far_apart_modes(rng) -> None:
    target = GaussianMixtureTarget([0.5, 0.5], [[-1000.0], [1000.0]], [1.0, 1.0])
    q = -1000.0 + rng.standard_normal((4000, 1))
    report = kl_gap_decomposition(q, target, 0, 0.0)
    assert report.delta == pytest.approx(0.0, abs=1e-12)
    assert report.min_responsibility == 1.0
    assert report.log_inv_pi == pytest.approx(np.log(2.0))
    assert report.residual == pytest.approx(0.0, abs=1e-9)
    assert abs(report.kl_vs_component) < 4 * report.kl_std_error + 0.01


def test_gap_for_single_component(rng) -> None:
    target = UnimodalGaussianTarget([0.0, 0.0], 1.0)
    report = kl_gap_decomposition(rng.standard_normal((2000, 2)), target, 0, 0.0)
    assert report.log_inv_pi == 0.0
    assert report.delta == 0.0
    assert report.residual == pytest.approx(0.0, abs=1e-9)


def test_residual_matches_delta_for_separated_modes(rng) -> None:
    target = GaussianMixtureTarget([0.3, 0.7], [[-6.0], [6.0]], [1.0, 1.0])
    q = -6.0 + rng.standard_normal((5000, 1))
    report = kl_gap_decomposition(q, target, 0, 0.01)
    low, high = report.delta_interval
    assert low <= report.delta <= high
    assert report.residual == pytest.approx(report.delta, abs=1e-9)
    assert report.log_inv_pi == pytest.approx(-np.log(0.3))


def test_dominance_precondition(two_mode_target, rng) -> None:
    q = 0.5 * rng.standard_normal((2000, 1))
    with pytest.raises(PreconditionError) as info:
        kl_gap_decomposition(q, two_mode_target, 1, 0.1)
    assert info.value.condition == 'dominance'


def test_gap_argument_validation(two_mode_target, rng) -> None:
    q = 5.0 + rng.standard_normal((2000, 1))
    with pytest.raises(DomainError):
        kl_gap_decomposition(q, two_mode_target, 2, 0.1)
    with pytest.raises(DomainError):
        kl_gap_decomposition(q, two_mode_target, 1, 1.0)


@pytest.mark.parametrize('config_id', range(3))
def test_random_kl_gap_configurations(config_id: int) -> None:
    rows = check_kl_gap(0, config_id, samples=4000)
    assert all(row['pass'] for row in rows)


def test_dominant_log_responsibility_of_single_component() -> None:
    target = GaussianMixtureTarget([1.0], [[0.0, 1.0]], [1.0])
    assert dominant_log_responsibility(target, np.zeros((5, 2))) == 0.0


def test_hitting_step() -> None:
    assert hitting_step(0.75, 4) == 3
    assert hitting_step(0.5, 8) == 4
    assert hitting_step(0.1, 4) == 0


def test_comparison_on_single_component_matches_closed_form() -> None:
    target = GaussianMixtureTarget([1.0], [[0.5, -1.0]], [0.8])
    table = mixture_kl_comparison(target, [(SamplerKind.fm(), Schedule(4))], M=20_000, seed=3,
                                  cost_model=IMAGE_TASK)
    assert list(table.columns) == COMPARISON_COLUMNS
    row = table.iloc[0]
    expected = gaussian_kl_from_trace(fm_variance_trace(0.8, 4, d=2)).kl_fm
    assert abs(row['kl'] - expected) < 4 * row['kl_se'] + 0.01
    assert row['method'] == 'FM'
    assert row['inner_mode'] == ''
    assert np.isnan(row['S'])
    assert np.isnan(row['retention'])
    assert row['M_used'] == 20_000
    assert row['delta'] == 0.0
    assert row['modeled_cost'] == pytest.approx(cost(IMAGE_TASK, 'fm', 4))


def test_comparison_with_good_region_conditioning(two_mode_target) -> None:
    configs = [(SamplerKind.fm(), Schedule(4)), (SamplerKind.tm(4), Schedule(4, 4))]
    table = mixture_kl_comparison(two_mode_target, configs, M=6000, seed=11, conditioning=(0.4, 0.75))
    assert list(table['method']) == ['FM', 'TM(S=4)']
    assert table['S'].iloc[1] == 4
    assert np.isnan(table['modeled_cost']).all()
    assert ((table['retention'] > 0.5) & (table['retention'] <= 1.0)).all()
    assert (table['M_used'] <= 6000).all()
    assert np.isfinite(table['kl']).all()


@pytest.fixture(scope='module')
def matched_by_geometry():
    '''Matched-cost FM/TM pair on each circle geometry, image cost model.'''
    configs = [(SamplerKind.fm(), Schedule(1)), (SamplerKind.fm(), Schedule(2)), (SamplerKind.tm(4), Schedule(1, 4))]
    pairs = {}
    for degrees in (40.0, 80.0):
        target = circle_mixture(np.deg2rad(degrees), sigma=0.1)
        table = mixture_kl_comparison(target, configs, M=100_000, seed=5, cost_model=IMAGE_TASK, n_jobs=3)
        table.insert(1, 'geometry', f'theta=+-{degrees:g}deg')
        table.insert(2, 'D_min', target.min_separation)
        table.insert(3, 'family', ['FM', 'FM', 'TM N=1'])
        pairs[degrees] = matched_cost_pairs(table).iloc[0]
    return pairs


@pytest.mark.slow
@pytest.mark.parametrize('degrees', [40.0, 80.0])
def test_tm_one_outer_step_beats_cost_matched_fm(matched_by_geometry, degrees) -> None:
    pair = matched_by_geometry[degrees]
    assert pair['tm_method'] == 'TM(S=4)'
    assert pair['fm_N'] == 2
    assert pair['tm_below_fm']


@pytest.mark.slow
def test_tm_advantage_grows_with_mode_separation(matched_by_geometry) -> None:
    assert matched_by_geometry[80.0]['D_min'] > matched_by_geometry[40.0]['D_min']
    assert matched_by_geometry[80.0]['gap'] > matched_by_geometry[40.0]['gap']
