'''
run_unimodal_kl.py

KL of FM and TM samplers on a unimodal Gaussian target.

Outputs:
- unimodal_kl.csv:   one row per sampler grid point; closed-form KL from the
                     variance recursions, optional Monte Carlo kNN KL, modeled cost
                     and the FM KL interpolated at the same cost
- rates.csv:         log-log slopes per sampler family (when >= 4 usable points)
- variance_trace.csv per-step recursion quantities for one (N, S)
- samples.csv        FM(N=2) and TM(N=1, S=2) samples in the first two coordinates (d >= 2)

Grid points run in parallel over config.threads workers; rows keep grid order.
'''

from __future__ import annotations

import logging

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from sampler_toolkit.analysis.compute_variance_trace import (
    contraction_constant,
    first_order_contractions,
    fm_variance_trace,
    gaussian_kl_from_trace,
    tm_variance_trace,
)
from sampler_toolkit.analysis.fit_convergence_rate import fit_rate
from sampler_toolkit.cost.compute_cost_model import cost
from sampler_toolkit.divergence.estimate_knn_kl import knn_kl
from sampler_toolkit.errors import DomainError
from sampler_toolkit.plot.plot_kl_curves import plot_kl_curves
from sampler_toolkit.plot.plot_sample_scatter import plot_sample_scatter
from sampler_toolkit.plot.plot_variance_trace import plot_variance_trace
from sampler_toolkit.posterior.compute_posterior import log_density
from sampler_toolkit.samplers.run_euler_samplers import SamplerKind, run_sampler
from sampler_toolkit.targets.define_gaussian_targets import Schedule

logger = logging.getLogger(__name__)

KL_COLUMNS = ['config_id', 'family', 'method', 'N', 'S', 'inner_mode', 'modeled_cost',
              'kl_closed_form', 'kl_mc', 'mc_se', 'M', 'kl_fm_matched']

KL_PROVENANCE = {
    'modeled_cost': 'experiment-harness.cost',
    'kl_closed_form': 'recursion-analysis.gaussian_kl_from_trace',
    'kl_mc': 'divergence-estimators.knn_kl(samplers.run_sampler)',
    'mc_se': 'divergence-estimators.knn_kl',
    'kl_fm_matched': 'recursion-analysis.gaussian_kl_from_trace (log-log interpolation over FM rows)',
}


def sampler_family(entry, N, S):
    '''
    Curve a grid point belongs to.

    A TM entry with a single N is an S-sweep at that N; with several N it is
    an N-sweep at fixed S (one family per S).
    '''
    if entry.method == 'fm':
        return 'FM'
    if entry.inner_mode == 'exact':
        return 'TM exact'
    return f'TM N={N}' if len(entry.N) == 1 else f'TM S={S}'


def closed_form_kl(sigma, d, kind, schedule):
    if not kind.is_tm:
        return gaussian_kl_from_trace(fm_variance_trace(sigma, schedule.n_outer, d)).kl_fm
    S = None if kind.inner_mode == 'exact' else kind.resolve_inner_steps(schedule)
    return gaussian_kl_from_trace(tm_variance_trace(sigma, schedule.n_outer, S, d)).kl_tm


def interpolate_fm_kl(fm_rows, at_cost):
    '''FM KL at a given modeled cost, interpolated linearly in log-log; NaN outside the FM range.'''
    usable = fm_rows[np.isfinite(fm_rows['kl_closed_form']) & (fm_rows['kl_closed_form'] > 0)
                     & np.isfinite(fm_rows['modeled_cost'])].sort_values('modeled_cost')
    if len(usable) < 2 or not np.isfinite(at_cost):
        return np.nan
    x = np.log(usable['modeled_cost'].to_numpy())
    if not x[0] <= np.log(at_cost) <= x[-1]:
        return np.nan
    return float(np.exp(np.interp(np.log(at_cost), x, np.log(usable['kl_closed_form'].to_numpy()))))


def grid_point_row(target, config, config_id, entry, kind, schedule):
    '''One unimodal_kl row; the sampler and kNN search run single-threaded inside a grid worker.'''
    N = schedule.n_outer
    S = kind.resolve_inner_steps(schedule) if kind.is_tm and kind.inner_mode == 'euler' else None
    modeled = np.nan
    if config.cost_model is not None and (not kind.is_tm or S is not None):
        modeled = cost(config.cost_model, kind.method, N, S)

    kl_mc = mc_se = np.nan
    if config.options['monte_carlo']:
        run = run_sampler(target, kind, schedule, config.M, config.seed)
        estimate = knn_kl(run.final.states, lambda Y: log_density(target, Y),
                          n_bootstrap=config.options['n_bootstrap'], seed=config.seed)
        kl_mc, mc_se = estimate.value, estimate.std_error

    kl = closed_form_kl(target.sigma, target.d, kind, schedule)
    logger.debug('%s N=%d: closed-form KL %.6g', kind.label(schedule), N, kl)
    return {
        'config_id': config_id,
        'family': sampler_family(entry, N, S),
        'method': kind.label(schedule),
        'N': N,
        'S': np.nan if S is None else S,
        'inner_mode': kind.inner_mode if kind.is_tm else '',
        'modeled_cost': modeled,
        'kl_closed_form': kl,
        'kl_mc': kl_mc,
        'mc_se': mc_se,
        'M': config.M if config.options['monte_carlo'] else 0,
    }


# ============================================
# Function: Run the unimodal KL experiment
# ============================================
def run_unimodal_kl(config, collector):
    '''
    Sweep the sampler grid on N(mu, sigma^2 I_d) and write the result tables.

    Parameters:
    - config (ExperimentConfig): kind 'unimodal_kl' with a unimodal target
    - collector (ArtifactCollector): Receives every CSV and plot
    '''
    target = config.build_target()
    sigma, d = target.sigma, target.d
    options = config.options
    logger.info('unimodal_kl: sigma=%g, d=%d, %d grid points', sigma, d, len(config.sampler_configs()))

    points = [(entry, kind, schedule) for entry in config.sampler_grid for kind, schedule in entry.configs()]
    parallel = Parallel(n_jobs=config.threads, prefer='threads')
    rows = parallel(delayed(grid_point_row)(target, config, config_id, *point)
                    for config_id, point in enumerate(points))

    table = pd.DataFrame(rows)
    fm_rows = table[table['family'] == 'FM']
    table['kl_fm_matched'] = [
        np.nan if fam == 'FM' else interpolate_fm_kl(fm_rows, c)
        for fam, c in zip(table['family'], table['modeled_cost'])
    ]
    table = table[KL_COLUMNS]
    collector.table('unimodal_kl', table, KL_PROVENANCE)

    x_col = 'modeled_cost' if config.cost_model is not None else 'N'
    collector.plot('kl_vs_cost', plot_kl_curves, table, x_col, 'kl_closed_form', 'family',
                   title=f'Closed-form KL, sigma={sigma:g}, d={d}')

    _write_rates(table, sigma, d, collector)
    _write_trace(sigma, d, options, collector)
    if options['scatter']:
        _write_samples(target, config, collector)
    return table


def _write_rates(table, sigma, d, collector):
    rows = []
    for family, subset in table.groupby('family', sort=True):
        step_col = 'S' if family.startswith('TM N=') else 'N'
        kl = subset['kl_closed_form'].to_numpy(dtype=float)
        steps = subset[step_col].to_numpy(dtype=float)
        usable = np.isfinite(kl) & (kl > 0)
        if usable.sum() < 4:
            continue
        try:
            fit = fit_rate(steps[usable], kl[usable])
        except DomainError as e:
            logger.warning('rate fit skipped for %s: %s', family, e)
            continue
        rows.append({'family': family, 'step': step_col, 'slope': fit.slope, 'intercept': fit.intercept,
                     'fit_min': fit.fit_range[0], 'fit_max': fit.fit_range[1],
                     'residual': fit.residual, 'n_points': fit.n_points})
    if not rows:
        return
    rates = pd.DataFrame(rows)
    rates['sigma'] = sigma
    rates['d'] = d
    rates['contraction_constant'] = contraction_constant(sigma)
    collector.table('rates', rates, {
        'slope': 'recursion-analysis.fit_rate', 'intercept': 'recursion-analysis.fit_rate',
        'fit_min': 'recursion-analysis.fit_rate', 'fit_max': 'recursion-analysis.fit_rate',
        'residual': 'recursion-analysis.fit_rate', 'n_points': 'recursion-analysis.fit_rate',
        'contraction_constant': 'recursion-analysis.contraction_constant',
    })


def _write_trace(sigma, d, options, collector):
    trace = tm_variance_trace(sigma, options['trace_N'], options['trace_S'], d)
    frame = trace.to_frame()
    frame['c_S_first_order'] = first_order_contractions(trace)
    collector.table('variance_trace', frame, {
        **{col: 'recursion-analysis.tm_variance_trace' for col in frame.columns if col != 'n'},
        'c_S_first_order': 'recursion-analysis.contraction_constant',
    })
    collector.plot('variance_trace', plot_variance_trace, frame,
                   title=f'Variance trace, sigma={sigma:g}, N={trace.N}, S={trace.S}')


def _write_samples(target, config, collector):
    if target.d < 2:
        logger.debug('sample scatter needs d >= 2; skipped')
        return
    count = config.options['scatter_M']
    frames = []
    for kind, schedule in ((SamplerKind.fm(), Schedule(2)), (SamplerKind.tm(2), Schedule(1, 2))):
        states = run_sampler(target, kind, schedule, count, config.seed, n_jobs=config.threads).final.states
        frames.append(pd.DataFrame({'sampler': f'{kind.label(schedule)} N={schedule.n_outer}',
                                    'x': states[:, 0], 'y': states[:, 1]}))
    samples = pd.concat(frames, ignore_index=True)
    collector.table('samples', samples, {'x': 'samplers.run_sampler', 'y': 'samplers.run_sampler'})
    collector.plot('samples', plot_sample_scatter, samples, means=target.mu[None, :2],
                   title='FM(N=2) vs TM(N=1, S=2)')
