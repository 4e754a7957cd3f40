'''Shared fixtures for the test suite.'''

from __future__ import annotations

import json

import numpy as np
import pytest

from sampler_toolkit.targets.define_gaussian_targets import (
    GaussianMixtureTarget,
    UnimodalGaussianTarget,
    circle_mixture,
)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240607)


@pytest.fixture
def unimodal_target() -> UnimodalGaussianTarget:
    return UnimodalGaussianTarget(np.array([0.5, -1.0]), 0.8)


@pytest.fixture
def two_mode_target() -> GaussianMixtureTarget:
    '''d=1, modes at -5 and +5 with unit variance and equal weights.'''
    return GaussianMixtureTarget(np.array([0.5, 0.5]), np.array([[-5.0], [5.0]]), np.array([1.0, 1.0]))


@pytest.fixture
def circle_target() -> GaussianMixtureTarget:
    return circle_mixture(np.deg2rad(80.0), sigma=0.1)


@pytest.fixture
def write_config(tmp_path):
    '''Write a config dict to tmp_path/config.json and return its path.'''
    def _write(raw: dict) -> str:
        path = tmp_path / 'config.json'
        path.write_text(json.dumps(raw), encoding='utf-8')
        return str(path)
    return _write
