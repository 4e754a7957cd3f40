'''
run_mixture_kl.py

FM vs TM on Gaussian mixture targets, one or more geometries.

Outputs:
- mixture_kl.csv:   kNN KL(generated || target) per geometry and sampler grid point
- matched_cost.csv: each TM point against the FM point of closest modeled cost,
                    with the KL gap and its combined standard error

Grid points of a geometry run on config.threads joblib threads (see
mixture_kl_comparison); the tables do not depend on the thread count.
'''

from __future__ import annotations

import logging

import numpy as np
import pandas as pd

from sampler_toolkit.bounds.compare_mixture_kl import mixture_kl_comparison
from sampler_toolkit.experiments.run_unimodal_kl import sampler_family
from sampler_toolkit.io.load_experiment_config import TargetSpec
from sampler_toolkit.plot.plot_kl_curves import plot_kl_curves

logger = logging.getLogger(__name__)

MIXTURE_PROVENANCE = {
    'modeled_cost': 'experiment-harness.cost',
    'kl': 'mixture-bounds.mixture_kl_comparison (divergence-estimators.knn_kl)',
    'kl_se': 'divergence-estimators.knn_kl',
    'M_used': 'mixture-bounds.mixture_kl_comparison',
    'retention': 'mixture-bounds.good_region_membership',
    'delta': 'mixture-bounds.mixture_kl_comparison (mean log dominant responsibility)',
    'D_min': 'gaussian-core.GaussianMixtureTarget',
}

MATCHED_COLUMNS = ['geometry', 'D_min', 'tm_method', 'tm_N', 'tm_S', 'tm_cost', 'fm_N', 'fm_cost',
                   'kl_tm', 'kl_fm', 'gap', 'gap_se', 'tm_below_fm']


def geometry_label(spec, target):
    if spec.kind == 'circle' and 'half_angle_deg' in spec.params:
        return f"theta=+-{spec.params['half_angle_deg']:g}deg"
    return f'D_min={target.min_separation:.4g}'


def matched_cost_pairs(table):
    '''
    Pair every TM row with the FM row of the same geometry whose modeled cost
    is closest in log scale (ties go to the cheaper FM row).
    '''
    rows = []
    for geometry, subset in table.groupby('geometry', sort=False):
        fm = subset[(subset['family'] == 'FM') & np.isfinite(subset['modeled_cost'])]
        tm = subset[(subset['family'] != 'FM') & np.isfinite(subset['modeled_cost'])]
        if fm.empty:
            continue
        fm_log_cost = np.log(fm['modeled_cost'].to_numpy())
        for _, row in tm.iterrows():
            match = fm.iloc[int(np.argmin(np.abs(fm_log_cost - np.log(row['modeled_cost']))))]
            gap = match['kl'] - row['kl']
            gap_se = float(np.hypot(match['kl_se'], row['kl_se']))
            rows.append({
                'geometry': geometry, 'D_min': row['D_min'], 'tm_method': row['method'],
                'tm_N': row['N'], 'tm_S': row['S'], 'tm_cost': row['modeled_cost'],
                'fm_N': match['N'], 'fm_cost': match['modeled_cost'],
                'kl_tm': row['kl'], 'kl_fm': match['kl'], 'gap': gap, 'gap_se': gap_se,
                'tm_below_fm': bool(gap > 3.0 * gap_se),
            })
    return pd.DataFrame(rows, columns=MATCHED_COLUMNS)


# ============================================
# Function: Run the mixture KL experiment
# ============================================
def run_mixture_kl(config, collector):
    '''
    Estimate KL for every geometry x sampler grid point and write the tables.

    Parameters:
    - config (ExperimentConfig): kind 'mixture_kl'
    - collector (ArtifactCollector): Receives every CSV and plot
    '''
    options = config.options
    specs = [config.target]
    if options['geometries'] is not None:
        specs = [TargetSpec(g['kind'], {k: v for k, v in g.items() if k != 'kind'}) for g in options['geometries']]
    conditioning = options['conditioning']
    if conditioning is not None:
        conditioning = (conditioning['beta'], conditioning['hit_time'])

    families = {}
    configs = []
    for entry in config.sampler_grid:
        for kind, schedule in entry.configs():
            S = kind.resolve_inner_steps(schedule) if kind.is_tm and kind.inner_mode == 'euler' else None
            families[len(configs)] = sampler_family(entry, schedule.n_outer, S)
            configs.append((kind, schedule))

    frames = []
    for spec in specs:
        target = spec.build()
        label = geometry_label(spec, target)
        logger.info('mixture_kl: %s (K=%d, d=%d), %d configurations', label, target.n_components,
                    target.d, len(configs))
        frame = mixture_kl_comparison(target, configs, config.M, config.seed, config.cost_model,
                                      conditioning, n_jobs=config.threads, n_bootstrap=options['n_bootstrap'])
        frame.insert(1, 'geometry', label)
        frame.insert(2, 'D_min', target.min_separation)
        frame.insert(3, 'family', frame['config_id'].map(families))
        frames.append(frame)

    table = pd.concat(frames, ignore_index=True)
    collector.table('mixture_kl', table, MIXTURE_PROVENANCE)

    if config.cost_model is not None:
        matched = matched_cost_pairs(table)
        collector.table('matched_cost', matched, {
            'gap': 'mixture-bounds.mixture_kl_comparison', 'gap_se': 'divergence-estimators.knn_kl',
            'kl_tm': 'divergence-estimators.knn_kl', 'kl_fm': 'divergence-estimators.knn_kl',
            'tm_cost': 'experiment-harness.cost', 'fm_cost': 'experiment-harness.cost',
            'tm_below_fm': 'mixture-bounds.mixture_kl_comparison',
        })
    else:
        logger.info('no cost model configured; matched-cost summary skipped')

    curves = table.assign(curve=table['family'] + ' / ' + table['geometry'])
    x_col = 'modeled_cost' if config.cost_model is not None else 'N'
    collector.plot('kl_vs_cost', plot_kl_curves, curves, x_col, 'kl', 'curve', err_col='kl_se',
                   title='KL(generated || target) on mixture targets', log_y=False)
    return table
