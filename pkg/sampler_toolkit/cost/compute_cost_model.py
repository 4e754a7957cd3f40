'''
compute_cost_model.py

Linear compute-cost accounting for FM and TM samplers.

    cost_FM(N)    = N C_B
    cost_TM(N, S) = N C_B + N S C_H

C_B is the time of one backbone evaluation and C_H the time of one flow-head
evaluation. At equal cost, TM with N outer steps can afford
Delta S = kappa / N extra inner steps per outer step, kappa = C_B / C_H.
'''

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from sampler_toolkit.errors import ConfigError, DomainError


# ============================================
# Type: Cost model
# ============================================
@dataclass(frozen=True)
class ComputeCostModel:
    '''
    Seconds per backbone (C_B) and flow-head (C_H) evaluation.

    kappa defaults to C_B / C_H. The presets carry the tabulated kappa, which
    differs from the ratio of the rounded C_B, C_H in the third digit.
    '''
    c_backbone: float
    c_head: float
    kappa: float = field(default=None)
    name: str = 'custom'

    def __post_init__(self):
        if not self.c_backbone > 0 or not self.c_head > 0:
            raise DomainError(f'costs must be positive, got C_B={self.c_backbone}, C_H={self.c_head}')
        if self.kappa is None:
            object.__setattr__(self, 'kappa', self.c_backbone / self.c_head)
        elif not self.kappa > 0:
            raise DomainError(f'kappa must be positive, got {self.kappa}')

    def as_dict(self):
        return {'name': self.name, 'c_backbone': self.c_backbone, 'c_head': self.c_head, 'kappa': self.kappa}


IMAGE_TASK = ComputeCostModel(c_backbone=0.01120, c_head=0.00238, kappa=4.70, name='image')
VIDEO_TASK = ComputeCostModel(c_backbone=0.00965, c_head=0.00024, kappa=40.08, name='video')

PRESETS = {'image': IMAGE_TASK, 'video': VIDEO_TASK}


def _method_of(kind):
    method = getattr(kind, 'method', kind)
    if method not in ('fm', 'tm'):
        raise DomainError(f"sampler kind must be 'fm' or 'tm', got {kind!r}")
    return method


def _check_count(name, value):
    if isinstance(value, bool) or int(value) != value or value < 1:
        raise DomainError(f'{name} must be a positive integer, got {value!r}')
    return int(value)


# ============================================
# Function: Modeled cost of one sampler run
# ============================================
def cost(model, kind, N, S=None):
    '''
    Modeled seconds for one sample.

    Parameters:
    - model (ComputeCostModel): C_B and C_H
    - kind (str or SamplerKind): 'fm' or 'tm'
    - N (int): Outer steps, >= 1
    - S (int): Inner steps for TM, >= 1

    Returns:
    - float: N C_B for FM, N C_B + N S C_H for TM
    '''
    method = _method_of(kind)
    N = _check_count('N', N)
    if method == 'fm':
        return N * model.c_backbone
    S = _check_count('S', S if S is not None else getattr(kind, 'inner_steps', None) or 0)
    return N * model.c_backbone + (N * S) * model.c_head


def delta_inner_steps(model, N):
    '''Extra inner steps Delta S = kappa / N affordable at FM cost; real-valued, not rounded.'''
    if not N >= 1:
        raise DomainError(f'N must be >= 1, got {N!r}')
    return model.kappa / N


def matched_fm_steps(model, N, S):
    '''FM step count with the same modeled cost as TM(N, S): N (1 + S / kappa).'''
    return N * (1.0 + S / model.kappa)


# ============================================
# Function: Build from a config block
# ============================================
def cost_model_from_spec(spec):
    '''
    Build a ComputeCostModel from {"preset": "image"|"video"} or
    {"c_backbone": ..., "c_head": ...}; None passes through.
    '''
    if spec is None:
        return None
    if not isinstance(spec, dict):
        raise ConfigError(f'cost_model must be an object, got {type(spec).__name__}')
    if 'preset' in spec:
        if set(spec) != {'preset'}:
            raise ConfigError('cost_model with a preset takes no other keys')
        try:
            return PRESETS[spec['preset']]
        except KeyError:
            raise ConfigError(f"unknown cost preset {spec['preset']!r}; choose from {sorted(PRESETS)}") from None
    unknown = set(spec) - {'c_backbone', 'c_head', 'kappa', 'name'}
    if unknown:
        raise ConfigError(f'unknown cost_model keys {sorted(unknown)}')
    try:
        return ComputeCostModel(float(spec['c_backbone']), float(spec['c_head']),
                                None if spec.get('kappa') is None else float(spec['kappa']),
                                spec.get('name', 'custom'))
    except KeyError as e:
        raise ConfigError(f'cost_model is missing {e.args[0]!r}') from None
    except (TypeError, DomainError) as e:
        raise ConfigError(f'invalid cost_model: {e}') from None


def cost_table(model, fm_steps, tm_steps, inner_steps):
    '''Modeled cost and Delta S for every FM and TM grid point, as rows of dicts.'''
    rows = [{'method': 'FM', 'N': N, 'S': np.nan, 'modeled_cost': cost(model, 'fm', N),
             'delta_S': delta_inner_steps(model, N)} for N in fm_steps]
    rows += [{'method': 'TM', 'N': N, 'S': S, 'modeled_cost': cost(model, 'tm', N, S),
              'delta_S': delta_inner_steps(model, N)} for N in tm_steps for S in inner_steps]
    return rows


# ============================================
# Optional Test Block
# ============================================
if __name__ == '__main__':
    for preset in PRESETS.values():
        print(preset.name, 'kappa =', preset.kappa, 'TM(16, 8) =', cost(preset, 'tm', 16, 8))
