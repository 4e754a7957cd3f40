'''
load_experiment_config.py

Parse and validate a JSON experiment configuration.

Every field is checked at load time: the target is built, the sampler grid is
expanded into (SamplerKind, Schedule) pairs, the cost model is resolved and
the experiment options are merged with their defaults (unknown keys are
rejected). Anything wrong raises ConfigError before a single sample is drawn.

Example:
    {
      "kind": "unimodal_kl",
      "target": {"kind": "unimodal", "mu": [0.0], "sigma": 1.0},
      "sampler_grid": [
        {"method": "fm", "N": [1, 2, 4, 8]},
        {"method": "tm", "N": [1], "S": [1, 2, 4, 8]}
      ],
      "M": 100000,
      "seed": 0,
      "cost_model": {"preset": "image"}
    }
'''

from __future__ import annotations

import copy
import json
import logging
import os
from dataclasses import dataclass, field

import numpy as np

from sampler_toolkit.cost.compute_cost_model import cost_model_from_spec
from sampler_toolkit.errors import ConfigError, DomainError
from sampler_toolkit.samplers.run_euler_samplers import INNER_MODES, SamplerKind
from sampler_toolkit.targets.define_gaussian_targets import (
    GaussianMixtureTarget,
    Schedule,
    UnimodalGaussianTarget,
    circle_mixture,
    grid_mixture,
)

logger = logging.getLogger(__name__)

EXPERIMENT_KINDS = ('unimodal_kl', 'mixture_kl', 'posterior_hist', 'bounds_check', 'cost_model')
TOP_LEVEL_KEYS = {'kind', 'target', 'sampler_grid', 'M', 'seed', 'cost_model', 'out_dir', 'threads', 'options'}
OVERRIDABLE_KEYS = {'seed', 'threads', 'out_dir'}

# kinds that build their own targets may omit "target"
TARGET_REQUIRED = {'unimodal_kl': 'unimodal', 'mixture_kl': 'mixture'}

DEFAULT_OPTIONS = {
    'unimodal_kl': {
        'monte_carlo': False,
        'trace_N': 8,
        'trace_S': 4,
        'scatter': True,
        'scatter_M': 2000,
        'n_bootstrap': 200,
    },
    'mixture_kl': {
        'geometries': None,
        'conditioning': None,
        'n_bootstrap': 200,
    },
    'posterior_hist': {
        'spacings': [8.0, 45.0],
        'sigmas': [1.0],
        'times': [0.05, 0.1, 0.25, 0.5, 0.9],
        'd': 2,
        'half_width': 2,
        'bins': 80,
    },
    'bounds_check': {
        'tv_configs': 200,
        'region_configs': 50,
        'escape_draws': 100000,
        'region_points': 1000,
        'zeta_points': 200,
        'kl_gap_configs': 20,
        'kl_gap_samples': 20000,
        'attraction': False,
        'attraction_trajectories': 4000,
    },
    'cost_model': {},
}


# ============================================
# Config types
# ============================================
@dataclass(frozen=True)
class TargetSpec:
    '''
    Declarative target description.

    kinds: unimodal (mu, sigma), mixture (components: [{weight, mu, sigma}]),
    circle (half_angle in radians or half_angle_deg, sigma, radius, d, weights),
    grid (spacing, half_width, d, sigma).
    '''
    kind: str
    params: dict = field(default_factory=dict)

    def build(self):
        p = self.params
        try:
            if self.kind == 'unimodal':
                return UnimodalGaussianTarget(p['mu'], p['sigma'])
            if self.kind == 'mixture':
                return GaussianMixtureTarget.from_components(
                    [(c['weight'], c['mu'], c['sigma']) for c in p['components']]
                )
            if self.kind == 'circle':
                angle = p['half_angle'] if 'half_angle' in p else np.deg2rad(p['half_angle_deg'])
                return circle_mixture(angle, p.get('sigma', 0.1), p.get('radius', 1.0),
                                      p.get('d', 2), p.get('weights'))
            if self.kind == 'grid':
                return grid_mixture(p['spacing'], p.get('half_width', 2), p.get('d', 2), p.get('sigma', 1.0))
        except KeyError as e:
            raise ConfigError(f'{self.kind} target is missing {e.args[0]!r}') from None
        except (TypeError, ValueError) as e:
            raise ConfigError(f'invalid {self.kind} target: {e}') from None
        raise ConfigError(f'unknown target kind {self.kind!r}')

    def as_dict(self):
        return {'kind': self.kind, **self.params}


@dataclass(frozen=True)
class SamplerGridEntry:
    '''One line of the sampler grid: a method with its N values (and S values for TM).'''
    method: str
    N: tuple
    S: tuple = (1,)
    inner_mode: str = 'euler'

    def configs(self):
        '''Expand into (SamplerKind, Schedule) pairs in N-major order.'''
        if self.method == 'fm':
            return [(SamplerKind.fm(), Schedule(N)) for N in self.N]
        if self.inner_mode == 'exact':
            return [(SamplerKind.tm(inner_mode='exact'), Schedule(N)) for N in self.N]
        return [(SamplerKind.tm(S), Schedule(N, S)) for N in self.N for S in self.S]

    def as_dict(self):
        out = {'method': self.method, 'N': list(self.N)}
        if self.method == 'tm':
            out.update(S=list(self.S), inner_mode=self.inner_mode)
        return out


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    target: TargetSpec | None
    sampler_grid: tuple
    M: int
    seed: int
    cost_model: object
    out_dir: str
    threads: int
    options: dict
    source: str | None = None

    def build_target(self):
        return None if self.target is None else self.target.build()

    def sampler_configs(self):
        return [pair for entry in self.sampler_grid for pair in entry.configs()]

    def resolved(self):
        '''JSON-ready echo of every resolved field, defaults included.'''
        return {
            'kind': self.kind,
            'target': None if self.target is None else self.target.as_dict(),
            'sampler_grid': [entry.as_dict() for entry in self.sampler_grid],
            'M': self.M,
            'seed': self.seed,
            'cost_model': None if self.cost_model is None else self.cost_model.as_dict(),
            'out_dir': self.out_dir,
            'threads': self.threads,
            'options': copy.deepcopy(self.options),
            'source': self.source,
        }


# ============================================
# Field parsers
# ============================================
def _positive_int(value, name):
    if isinstance(value, bool) or not isinstance(value, (int, float)) or int(value) != value or value < 1:
        raise ConfigError(f'{name} must be a positive integer, got {value!r}')
    return int(value)


def _int_list(values, name):
    if not isinstance(values, list) or not values:
        raise ConfigError(f'{name} must be a non-empty list')
    return tuple(_positive_int(v, name) for v in values)


def _parse_target(raw):
    if not isinstance(raw, dict) or 'kind' not in raw:
        raise ConfigError('target must be an object with a "kind"')
    params = {k: v for k, v in raw.items() if k != 'kind'}
    spec = TargetSpec(raw['kind'], params)
    spec.build()
    return spec


def _parse_grid_entry(raw, index):
    if not isinstance(raw, dict):
        raise ConfigError(f'sampler_grid[{index}] must be an object')
    unknown = set(raw) - {'method', 'N', 'S', 'inner_mode'}
    if unknown:
        raise ConfigError(f'sampler_grid[{index}] has unknown keys {sorted(unknown)}')
    method = raw.get('method')
    if method not in ('fm', 'tm'):
        raise ConfigError(f"sampler_grid[{index}].method must be 'fm' or 'tm', got {method!r}")
    N = _int_list(raw.get('N'), f'sampler_grid[{index}].N')
    if method == 'fm':
        if 'S' in raw or 'inner_mode' in raw:
            raise ConfigError(f'sampler_grid[{index}]: FM entries take no S or inner_mode')
        return SamplerGridEntry('fm', N)
    inner_mode = raw.get('inner_mode', 'euler')
    if inner_mode not in INNER_MODES:
        raise ConfigError(f'sampler_grid[{index}].inner_mode must be one of {INNER_MODES}')
    if inner_mode == 'exact':
        if 'S' in raw:
            raise ConfigError(f'sampler_grid[{index}]: exact inner mode takes no S')
        return SamplerGridEntry('tm', N, (), 'exact')
    return SamplerGridEntry('tm', N, _int_list(raw.get('S'), f'sampler_grid[{index}].S'), 'euler')


def _parse_options(kind, raw):
    defaults = DEFAULT_OPTIONS[kind]
    raw = {} if raw is None else raw
    if not isinstance(raw, dict):
        raise ConfigError('options must be an object')
    unknown = set(raw) - set(defaults)
    if unknown:
        raise ConfigError(f'unknown options for {kind}: {sorted(unknown)}')
    options = copy.deepcopy(defaults)
    options.update(copy.deepcopy(raw))

    if kind == 'mixture_kl':
        if options['geometries'] is not None:
            if not isinstance(options['geometries'], list) or not options['geometries']:
                raise ConfigError('options.geometries must be a non-empty list of targets')
            for geometry in options['geometries']:
                _parse_target(geometry)
        conditioning = options['conditioning']
        if conditioning is not None:
            if not isinstance(conditioning, dict) or set(conditioning) != {'beta', 'hit_time'}:
                raise ConfigError('options.conditioning must be {"beta": ..., "hit_time": ...}')
            if not 0 < conditioning['beta'] < 0.5 or not 0 < conditioning['hit_time'] <= 1:
                raise ConfigError('conditioning needs 0 < beta < 1/2 and 0 < hit_time <= 1')
    if kind == 'posterior_hist':
        times = np.asarray(options['times'], dtype=float)
        if times.size == 0 or np.any(times <= 0) or np.any(times > 1):
            raise ConfigError('options.times must be a non-empty list in (0, 1]')
        if any(not s > 0 for s in options['spacings']) or any(not s > 0 for s in options['sigmas']):
            raise ConfigError('options.spacings and options.sigmas must be positive')
        _positive_int(options['d'], 'options.d')
        _positive_int(options['bins'], 'options.bins')
    for name in ('trace_N', 'trace_S', 'scatter_M', 'n_bootstrap', 'tv_configs', 'region_configs',
                 'escape_draws', 'region_points', 'zeta_points', 'kl_gap_configs', 'kl_gap_samples',
                 'attraction_trajectories'):
        if name in options:
            _positive_int(options[name], f'options.{name}')
    return options


def _check_target_kind(kind, target):
    expected = TARGET_REQUIRED.get(kind)
    if expected is None:
        return
    if target is None:
        raise ConfigError(f'{kind} needs a target')
    built = target.build()
    if expected == 'unimodal' and not isinstance(built, UnimodalGaussianTarget):
        raise ConfigError(f'{kind} needs a unimodal target, got {target.kind!r}')
    if expected == 'mixture' and not isinstance(built, GaussianMixtureTarget):
        raise ConfigError(f'{kind} needs a mixture target, got {target.kind!r}')


# ============================================
# Function: Build a config from a dict
# ============================================
def parse_experiment_config(raw, overrides=None, source=None, expected_kind=None):
    '''
    Validate a config mapping and apply CLI overrides (seed, threads, out_dir).

    expected_kind fills a missing "kind" and rejects a different one.

    Returns:
    - ExperimentConfig
    '''
    if not isinstance(raw, dict):
        raise ConfigError('config root must be a JSON object')
    raw = dict(raw)
    for key, value in (overrides or {}).items():
        if key not in OVERRIDABLE_KEYS:
            raise ConfigError(f'{key!r} cannot be overridden')
        if value is not None:
            raw[key] = value
    if expected_kind is not None:
        if raw.setdefault('kind', expected_kind) != expected_kind:
            raise ConfigError(f"config kind {raw['kind']!r} does not match {expected_kind!r}")

    unknown = set(raw) - TOP_LEVEL_KEYS
    if unknown:
        raise ConfigError(f'unknown config keys {sorted(unknown)}')
    kind = raw.get('kind')
    if kind not in EXPERIMENT_KINDS:
        raise ConfigError(f'kind must be one of {EXPERIMENT_KINDS}, got {kind!r}')

    target = None if raw.get('target') is None else _parse_target(raw['target'])
    _check_target_kind(kind, target)

    grid_raw = raw.get('sampler_grid', [])
    if not isinstance(grid_raw, list):
        raise ConfigError('sampler_grid must be a list')
    grid = tuple(_parse_grid_entry(entry, i) for i, entry in enumerate(grid_raw))
    if kind in ('unimodal_kl', 'mixture_kl', 'cost_model') and not grid:
        raise ConfigError(f'{kind} needs a non-empty sampler_grid')

    seed = raw.get('seed', 0)
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
        raise ConfigError(f'seed must be a non-negative integer, got {seed!r}')
    threads = raw.get('threads', 1)
    if isinstance(threads, bool) or not isinstance(threads, int) or threads == 0 or threads < -1:
        raise ConfigError(f'threads must be a positive integer or -1, got {threads!r}')

    cost_model = cost_model_from_spec(raw.get('cost_model'))
    if kind == 'cost_model' and cost_model is None:
        raise ConfigError('cost_model experiments need a cost_model')

    try:
        for entry in grid:
            entry.configs()
    except DomainError as e:
        raise ConfigError(f'invalid sampler grid: {e}') from None

    return ExperimentConfig(
        kind=kind,
        target=target,
        sampler_grid=grid,
        M=_positive_int(raw.get('M', 100000), 'M'),
        seed=seed,
        cost_model=cost_model,
        out_dir=str(raw.get('out_dir', os.path.join('runs', kind))),
        threads=threads,
        options=_parse_options(kind, raw.get('options')),
        source=source,
    )


# ============================================
# Function: Load a config file
# ============================================
def load_experiment_config(path, overrides=None, expected_kind=None):
    '''
    Read a JSON config from disk and validate it.

    Parameters:
    - path (str): Config file path
    - overrides (dict): Optional seed / threads / out_dir values from the CLI
    - expected_kind (str): Experiment kind the caller runs

    Returns:
    - ExperimentConfig
    '''
    try:
        with open(path, 'r', encoding='utf-8') as f:
            raw = json.load(f)
    except FileNotFoundError:
        raise ConfigError(f'config file not found: {path}') from None
    except json.JSONDecodeError as e:
        raise ConfigError(f'config file {path} is not valid JSON: {e}') from None

    config = parse_experiment_config(raw, overrides, os.path.abspath(path), expected_kind)
    logger.info('Loaded %s config from %s', config.kind, path)
    return config
