from __future__ import annotations

import numpy as np
import pytest

from sampler_toolkit.cost.compute_cost_model import (
    IMAGE_TASK,
    VIDEO_TASK,
    ComputeCostModel,
    cost,
    cost_model_from_spec,
    cost_table,
    delta_inner_steps,
    matched_fm_steps,
)
from sampler_toolkit.errors import ConfigError, DomainError
from sampler_toolkit.samplers.run_euler_samplers import SamplerKind


def test_tm_cost_on_image_preset() -> None:
    assert cost(IMAGE_TASK, 'tm', 16, 8) == 16 * 0.01120 + 128 * 0.00238
    assert cost(IMAGE_TASK, 'fm', 16) == 16 * 0.01120


def test_cost_accepts_sampler_kind() -> None:
    assert cost(VIDEO_TASK, SamplerKind.tm(4), 8) == pytest.approx(8 * 0.00965 + 32 * 0.00024)
    assert cost(VIDEO_TASK, SamplerKind.fm(), 8) == pytest.approx(8 * 0.00965)


@pytest.mark.parametrize('kwargs', [
    {'kind': 'fm', 'N': 0},
    {'kind': 'tm', 'N': 4, 'S': 0},
    {'kind': 'tm', 'N': 4},
    {'kind': 'ode', 'N': 4},
    {'kind': 'fm', 'N': 2.5},
])
def test_cost_rejects_bad_arguments(kwargs) -> None:
    with pytest.raises(DomainError):
        cost(IMAGE_TASK, **kwargs)


def test_preset_kappas() -> None:
    assert IMAGE_TASK.kappa == 4.70
    assert VIDEO_TASK.kappa == 40.08
    # the tabulated ratio is not the ratio of the rounded costs
    assert VIDEO_TASK.c_backbone / VIDEO_TASK.c_head != pytest.approx(VIDEO_TASK.kappa, rel=1e-3)


def test_delta_inner_steps() -> None:
    assert delta_inner_steps(VIDEO_TASK, 4) == pytest.approx(10.02)
    assert delta_inner_steps(IMAGE_TASK, 4.70) == pytest.approx(1.0)
    assert delta_inner_steps(IMAGE_TASK, np.inf) == 0.0
    with pytest.raises(DomainError):
        delta_inner_steps(IMAGE_TASK, 0.5)


def test_matched_fm_steps_has_equal_cost() -> None:
    model = ComputeCostModel(c_backbone=0.02, c_head=0.005)
    assert model.kappa == pytest.approx(4.0)
    matched = matched_fm_steps(model, 8, 4)
    assert matched == pytest.approx(16.0)
    assert matched * model.c_backbone == pytest.approx(cost(model, 'tm', 8, 4))


def test_model_validation() -> None:
    with pytest.raises(DomainError):
        ComputeCostModel(c_backbone=0.0, c_head=0.1)
    with pytest.raises(DomainError):
        ComputeCostModel(c_backbone=0.1, c_head=0.1, kappa=-1.0)


def test_cost_model_from_spec() -> None:
    assert cost_model_from_spec(None) is None
    assert cost_model_from_spec({'preset': 'video'}) is VIDEO_TASK
    custom = cost_model_from_spec({'c_backbone': 0.3, 'c_head': 0.1, 'name': 'toy'})
    assert custom.kappa == pytest.approx(3.0)
    assert custom.name == 'toy'


@pytest.mark.parametrize('spec', [
    {'preset': 'audio'},
    {'preset': 'image', 'c_head': 0.1},
    {'c_backbone': 0.3},
    {'c_backbone': 0.3, 'c_head': 0.1, 'speed': 2},
    {'c_backbone': -0.3, 'c_head': 0.1},
    ['image'],
])
def test_cost_model_from_spec_rejects(spec) -> None:
    with pytest.raises(ConfigError):
        cost_model_from_spec(spec)


def test_cost_table_rows() -> None:
    rows = cost_table(IMAGE_TASK, [1, 2], [1], [2, 4])
    assert [row['method'] for row in rows] == ['FM', 'FM', 'TM', 'TM']
    assert rows[3]['modeled_cost'] == pytest.approx(0.01120 + 4 * 0.00238)
    assert np.isnan(rows[0]['S'])
    assert rows[1]['delta_S'] == pytest.approx(4.70 / 2)
