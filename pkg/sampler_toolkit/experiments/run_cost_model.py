'''
run_cost_model.py

Modeled cost of every sampler grid point under one cost model.

Output cost_model.csv: (method, N, S, modeled_cost, delta_S, matched_fm_N, c_backbone, c_head, kappa)
with delta_S = kappa / N and matched_fm_N the FM step count of equal cost.
'''

import logging

import numpy as np
import pandas as pd

from sampler_toolkit.cost.compute_cost_model import cost, delta_inner_steps, matched_fm_steps
from sampler_toolkit.plot.plot_kl_curves import plot_kl_curves

logger = logging.getLogger(__name__)

# ============================================
# Function: Run the cost model experiment
# ============================================
def run_cost_model(config, collector):
    '''
    Tabulate modeled costs for the sampler grid.

    Parameters:
    - config (ExperimentConfig): kind 'cost_model' with a cost model
    - collector (ArtifactCollector): Receives the CSV and plot
    '''
    model = config.cost_model
    rows = []
    for kind, schedule in config.sampler_configs():
        N = schedule.n_outer
        S = kind.resolve_inner_steps(schedule) if kind.is_tm and kind.inner_mode == 'euler' else None
        if kind.is_tm and S is None:
            logger.warning('exact inner sampler has no modeled cost; N=%d skipped', N)
            continue
        rows.append({
            'method': 'TM' if kind.is_tm else 'FM',
            'N': N,
            'S': np.nan if S is None else S,
            'modeled_cost': cost(model, kind.method, N, S),
            'delta_S': delta_inner_steps(model, N),
            'matched_fm_N': matched_fm_steps(model, N, S) if S is not None else float(N),
        })

    table = pd.DataFrame(rows)
    table['c_backbone'] = model.c_backbone
    table['c_head'] = model.c_head
    table['kappa'] = model.kappa
    collector.table('cost_model', table, {
        'modeled_cost': 'experiment-harness.cost',
        'delta_S': 'experiment-harness.delta_inner_steps',
        'matched_fm_N': 'experiment-harness.cost (equal-cost FM step count)',
    })

    curves = table.assign(curve=table['method'] + table['S'].map(lambda s: '' if np.isnan(s) else f' S={s:g}'))
    collector.plot('cost_model', plot_kl_curves, curves, 'N', 'modeled_cost', 'curve',
                   title=f'Modeled cost ({model.name}, kappa={model.kappa:g})')
    logger.info('cost_model: %d grid points, kappa=%g', len(table), model.kappa)
    return table
