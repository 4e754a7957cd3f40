'''
run_bounds_check.py

Check every mixture bound against a numerical oracle on random configurations.

| bound_name                     | oracle                                               |
|--------------------------------|------------------------------------------------------|
| tv_bound                       | brute_force_tv at a point near a random path mean    |
| cor2_bound                     | brute_force_tv on the equal-variance precondition set|
| good_region_escape_bound       | MC frequency of X_t outside G (pass: <= bound + 3 SE)|
| responsibility_dominance_bound | max over in-region points of 1 - w_t(x, k)           |
| zeta_bound                     | direct mixture density correction, max over points   |
| kl_gap_decomposition           | |residual| vs -log(1 - eps) + 2 SE                   |
| attraction_failure_bound       | MC escape frequency of TM trajectories (optional)    |

Each configuration draws from its own SeedSequence(seed, spawn_key=(check, config_id)),
and configurations run in parallel with joblib.

Outputs:
- bounds_check.csv:   (config_id, bound_name, bound_value, oracle_value, vacuous_flag, pass)
- bounds_summary.csv: per bound counts of configurations, violations and vacuous bounds
'''

from __future__ import annotations

import logging

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from sampler_toolkit.bounds.compare_mixture_kl import kl_gap_decomposition
from sampler_toolkit.bounds.compute_good_region_bounds import (
    attraction_failure_bound,
    good_region_escape_bound,
    good_region_mask,
    mixture_density_correction,
    responsibility_dominance_bound,
    zeta_bound,
)
from sampler_toolkit.bounds.compute_tv_bounds import brute_force_tv, cor2_bound, tv_bound
from sampler_toolkit.posterior.compute_posterior import (
    log_component_responsibility,
    log_responsibilities_batch,
)
from sampler_toolkit.samplers.run_euler_samplers import SamplerKind, run_sampler
from sampler_toolkit.targets.define_gaussian_targets import Schedule
from sampler_toolkit.test.generate_test_targets import (
    random_cor2_config,
    random_good_region_points,
    random_mixture,
    random_point_near_mode,
    random_region_config,
    separated_mixture,
)

logger = logging.getLogger(__name__)

CHECK_COLUMNS = ['config_id', 'bound_name', 'bound_value', 'oracle_value', 'vacuous_flag', 'pass']

# absolute slack for the quadrature error of the brute-force TV oracle
TV_QUADRATURE_SLACK = 1e-6

CHECK_IDS = {
    'tv_bound': 0,
    'cor2_bound': 1,
    'good_region_escape_bound': 2,
    'responsibility_dominance_bound': 3,
    'zeta_bound': 4,
    'kl_gap_decomposition': 5,
    'attraction_failure_bound': 6,
}


def config_rng(seed, check, config_id):
    seq = np.random.SeedSequence(entropy=int(seed), spawn_key=(CHECK_IDS[check], int(config_id)))
    return np.random.default_rng(seq)


def _row(config_id, name, bound, oracle, passed):
    return {'config_id': config_id, 'bound_name': name, 'bound_value': float(bound),
            'oracle_value': float(oracle), 'vacuous_flag': not float(bound) < 1.0, 'pass': bool(passed)}


def _shape(rng):
    '''Random (d, K) with d in {1, 2} and K in {2, 3}.'''
    return int(rng.integers(1, 3)), int(rng.integers(2, 4))


# ============================================
# Per-configuration checks
# ============================================
def check_tv_bound(seed, config_id):
    rng = config_rng(seed, 'tv_bound', config_id)
    d, K = _shape(rng)
    target = random_mixture(rng, d, K)
    t = rng.uniform(0.2, 1.0)
    x = random_point_near_mode(rng, target, t)
    report = tv_bound(target, t, x, with_brute_force=True)
    passed = report.brute_force_tv <= min(1.0, report.bound_value) + TV_QUADRATURE_SLACK
    return [_row(config_id, 'tv_bound', report.bound_value, report.brute_force_tv, passed)]


def check_cor2_bound(seed, config_id):
    rng = config_rng(seed, 'cor2_bound', config_id)
    d, K = _shape(rng)
    target, t, x = random_cor2_config(rng, d, K)
    bound = cor2_bound(target, t, x)
    oracle = brute_force_tv(target, t, x)
    passed = oracle <= min(1.0, bound.value) + TV_QUADRATURE_SLACK
    return [_row(config_id, 'cor2_bound', bound.value, oracle, passed)]


def escape_frequency(target, spec, draws, rng):
    '''MC frequency of X_t = (1 - t) X0 + t X1 falling outside G, with its SE.'''
    labels = rng.choice(target.n_components, size=draws, p=target.weights)
    x1 = target.means[labels] + target.sigmas[labels, None] * rng.standard_normal((draws, target.d))
    x0 = rng.standard_normal((draws, target.d))
    inside, _ = good_region_mask(target, spec, (1.0 - spec.t) * x0 + spec.t * x1)
    freq = 1.0 - float(inside.mean())
    return freq, float(np.sqrt(freq * (1.0 - freq) / draws))


def check_region_bounds(seed, config_id, escape_draws, region_points, zeta_points):
    '''Escape, dominance and zeta bounds on one equal-variance configuration.'''
    rng = config_rng(seed, 'good_region_escape_bound', config_id)
    d, K = _shape(rng)
    target, spec = random_region_config(rng, d, K)
    rows = []

    bound = good_region_escape_bound(target, spec)
    freq, se = escape_frequency(target, spec, escape_draws, rng)
    rows.append(_row(config_id, 'good_region_escape_bound', bound.value, freq, freq <= bound.value + 3.0 * se))

    points = random_good_region_points(rng, target, spec, region_points)
    eps = responsibility_dominance_bound(target, spec.t, spec)
    _, k_star = good_region_mask(target, spec, points)
    log_w = log_responsibilities_batch(target, spec.t, points)
    worst = float(np.max(-np.expm1(log_w[np.arange(len(points)), k_star])))
    rows.append(_row(config_id, 'responsibility_dominance_bound', eps.value, worst, worst <= eps.value + 1e-12))

    zeta_worst, zeta_gap = 0.0, np.inf
    for x in points[:zeta_points]:
        direct = mixture_density_correction(target, spec.t, x)
        bound_x = zeta_bound(target, spec.t, x, spec).value
        zeta_worst = max(zeta_worst, direct)
        zeta_gap = min(zeta_gap, bound_x * (1.0 + 1e-9) - direct)
    rows.append(_row(config_id, 'zeta_bound', zeta_bound(target, spec.t, points[0], spec).value,
                     zeta_worst, zeta_gap >= 0))
    return rows


def check_kl_gap(seed, config_id, samples):
    rng = config_rng(seed, 'kl_gap_decomposition', config_id)
    d, K = _shape(rng)
    target = separated_mixture(rng, d, K, separation=14.0)
    k = int(rng.integers(K))
    q = target.means[k] + target.sigmas[k] * rng.standard_normal((samples, d))
    min_w = float(np.exp(log_component_responsibility(target, k, q).min()))
    epsilon = min(max(1.0 - min_w, 0.0), 0.5)
    report = kl_gap_decomposition(q, target, k, epsilon, seed=int(seed) + config_id)
    allowed = -np.log1p(-epsilon) + 2.0 * report.kl_std_error
    return [_row(config_id, 'kl_gap_decomposition', allowed, abs(report.residual),
                 abs(report.residual) <= allowed)]


def check_attraction(seed, config_id, trajectories, N=8, hit_step=4, S=4, n_jobs=1):
    '''
    Escape frequency of TM trajectories that are in G at the hitting step:
    fraction whose later states leave the r-ball around their mode's path mean.
    '''
    rng = config_rng(seed, 'attraction_failure_bound', config_id)
    d, K = _shape(rng)
    target, spec = random_region_config(rng, d, K, t_range=(hit_step / N, hit_step / N))
    run = run_sampler(target, SamplerKind.tm(S), Schedule(N, S), trajectories, int(seed) + config_id,
                      record_trajectory=True, n_jobs=n_jobs)
    inside, k_star = good_region_mask(target, spec, run.trajectory[hit_step].states)
    if not inside.any():
        return []
    escaped = np.zeros(int(inside.sum()), dtype=bool)
    for n in range(hit_step + 1, N + 1):
        states = run.trajectory[n].states[inside]
        centres = (n / N) * target.means[k_star[inside]]
        escaped |= np.linalg.norm(states - centres, axis=1) > spec.r
    freq = float(escaped.mean())
    se = float(np.sqrt(freq * (1.0 - freq) / escaped.size))
    delta = attraction_failure_bound(target, spec, N, hit_step)
    return [_row(config_id, 'attraction_failure_bound', delta.value, freq, freq <= delta.value + 3.0 * se)]


def summarise_checks(table):
    summary = table.groupby('bound_name', sort=False).agg(
        configs=('pass', 'size'),
        violations=('pass', lambda s: int((~s.astype(bool)).sum())),
        vacuous=('vacuous_flag', lambda s: int(s.astype(bool).sum())),
    )
    return summary.reset_index()


# ============================================
# Function: Run the bounds check
# ============================================
def run_bounds_check(config, collector):
    '''
    Evaluate every bound and its oracle, write the per-check and summary tables.

    Parameters:
    - config (ExperimentConfig): kind 'bounds_check'
    - collector (ArtifactCollector): Receives every CSV
    '''
    o = config.options
    seed = config.seed
    parallel = Parallel(n_jobs=config.threads, prefer='threads')

    tasks = [delayed(check_tv_bound)(seed, i) for i in range(o['tv_configs'])]
    tasks += [delayed(check_cor2_bound)(seed, i) for i in range(o['tv_configs'])]
    tasks += [delayed(check_region_bounds)(seed, i, o['escape_draws'], o['region_points'], o['zeta_points'])
              for i in range(o['region_configs'])]
    tasks += [delayed(check_kl_gap)(seed, i, o['kl_gap_samples']) for i in range(o['kl_gap_configs'])]
    if o['attraction']:
        tasks += [delayed(check_attraction)(seed, i, o['attraction_trajectories'])
                  for i in range(o['region_configs'])]
    logger.info('bounds_check: %d configuration tasks', len(tasks))

    rows = [row for result in parallel(tasks) for row in result]
    table = pd.DataFrame(rows, columns=CHECK_COLUMNS)
    collector.table('bounds_check', table, {
        'bound_value': 'mixture-bounds (named in bound_name)',
        'oracle_value': 'mixture-bounds.brute_force_tv / Monte Carlo oracle per bound_name',
        'vacuous_flag': 'mixture-bounds.BoundValue.vacuous',
        'pass': 'oracle <= bound comparison',
    })

    summary = summarise_checks(table)
    collector.table('bounds_summary', summary, {'configs': 'count', 'violations': 'count', 'vacuous': 'count'})
    for _, row in summary.iterrows():
        if row['vacuous']:
            logger.warning('%s: %d of %d bounds vacuous', row['bound_name'], row['vacuous'], row['configs'])
        if row['violations']:
            logger.warning('%s: %d violations', row['bound_name'], row['violations'])
    return table
