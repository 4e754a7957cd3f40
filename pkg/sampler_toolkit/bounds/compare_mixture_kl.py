'''
compare_mixture_kl.py

KL of generated samples against a Gaussian mixture target.

kl_gap_decomposition splits KL(q || p1) into the KL against the dominant
component and the mixture correction:

    KL(q || p1) = KL(q || phi_k) + log(1 / pi_k) + Delta,  Delta = E_q[log w(x, k)]

with w(x, k) = pi_k phi_k(x) / p1(x). When w >= 1 - eps on the support of q,
Delta lies in [log(1 - eps), 0].

mixture_kl_comparison runs FM and TM configurations on the same target and
estimates KL(generated || target) for each with the kNN estimator, optionally
conditioned on trajectories that sit in the good region at a hitting step.
Configurations run on joblib threads and rows come back in config order.
'''

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from sampler_toolkit.bounds.compute_good_region_bounds import GoodRegionSpec, good_region_mask
from sampler_toolkit.cost.compute_cost_model import cost
from sampler_toolkit.divergence.estimate_knn_kl import knn_kl
from sampler_toolkit.errors import DomainError, PreconditionError
from sampler_toolkit.posterior.compute_posterior import (
    as_state_batch,
    component_log_density,
    log_component_responsibility,
    log_density,
    log_responsibilities_batch,
    nearest_mode_batch,
)
from sampler_toolkit.samplers.run_euler_samplers import run_sampler
from sampler_toolkit.targets.define_gaussian_targets import as_mixture

logger = logging.getLogger(__name__)

COMPARISON_COLUMNS = ['config_id', 'method', 'N', 'S', 'inner_mode', 'modeled_cost',
                      'kl', 'kl_se', 'M_used', 'retention', 'delta']


# ============================================
# Type: KL gap report
# ============================================
@dataclass(frozen=True)
class KLGapReport:
    '''
    Pieces of KL(q || p1) = KL(q || phi_k) + log(1/pi_k) + Delta.

    residual is the measured KL(q || p1) - KL(q || phi_k) - log(1/pi_k); both
    KL terms share the same entropy estimate, so it equals delta up to rounding.
    '''
    kl_vs_mixture: float
    kl_vs_component: float
    log_inv_pi: float
    delta: float
    residual: float
    delta_se: float
    epsilon: float
    min_responsibility: float
    kl_std_error: float

    @property
    def delta_interval(self):
        return (float(np.log1p(-self.epsilon)) if self.epsilon < 1 else -np.inf, 0.0)


# ============================================
# Function: Mixture vs dominant component KL
# ============================================
def kl_gap_decomposition(q_samples, target, k, epsilon, seed=0, n_bootstrap=200):
    '''
    Estimate both KL terms for samples of q and check the dominance condition.

    Parameters:
    - q_samples (np.ndarray): (M, d) draws from q, M >= 1000
    - target: GaussianMixtureTarget (or unimodal, treated as K=1)
    - k (int): Dominant component index
    - epsilon (float): Dominance slack in [0, 1)
    - seed (int): Bootstrap seed for the kNN estimator

    Returns:
    - KLGapReport

    Raises PreconditionError('dominance') when some sample has w(x, k) < 1 - epsilon.
    '''
    mixture = as_mixture(target)
    if not 0 <= k < mixture.n_components:
        raise DomainError(f'component index {k} out of range for K={mixture.n_components}')
    if not 0 <= epsilon < 1:
        raise DomainError(f'epsilon must lie in [0, 1), got {epsilon!r}')
    X = as_state_batch(q_samples, mixture.d)

    log_w = log_component_responsibility(mixture, k, X)
    min_w = float(np.exp(log_w.min()))
    if min_w < 1.0 - epsilon:
        raise PreconditionError('dominance', f'min w(x, {k}) = {min_w:.6g} is below 1 - eps = {1.0 - epsilon:.6g}')

    kl_mix = knn_kl(X, lambda Y: log_density(mixture, Y), n_bootstrap=n_bootstrap, seed=seed)
    kl_comp = knn_kl(X, lambda Y: component_log_density(mixture, k, Y), n_bootstrap=n_bootstrap, seed=seed)
    log_inv_pi = float(-np.log(mixture.weights[k]))

    return KLGapReport(
        kl_vs_mixture=kl_mix.value,
        kl_vs_component=kl_comp.value,
        log_inv_pi=log_inv_pi,
        delta=float(log_w.mean()),
        residual=kl_mix.value - kl_comp.value - log_inv_pi,
        delta_se=float(log_w.std(ddof=1) / np.sqrt(X.shape[0])),
        epsilon=float(epsilon),
        min_responsibility=min_w,
        kl_std_error=max(kl_mix.std_error, kl_comp.std_error),
    )


def dominant_log_responsibility(target, X):
    '''Mean over rows of log w(x, k(x)) at t=1, k(x) the nearest component mean.'''
    mixture = as_mixture(target)
    log_w = log_responsibilities_batch(mixture, 1.0, X)
    k_star, _, _ = nearest_mode_batch(mixture, 1.0, X)
    return float(log_w[np.arange(X.shape[0]), k_star].mean())


def hitting_step(hit_time, N):
    '''Outer step index M = floor(hit_time N) at which the good region is checked.'''
    return int(np.floor(hit_time * N + 1e-12))


def _condition_on_good_region(target, run, N, beta, hit_time):
    '''Keep trajectories in G at step M; returns (states, retention), retention NaN when M = 0.'''
    m_hit = hitting_step(hit_time, N)
    if m_hit == 0:
        return run.final.states, np.nan
    spec = GoodRegionSpec.from_beta(target, beta, m_hit / N)
    mask, _ = good_region_mask(target, spec, run.trajectory[m_hit].states)
    retention = float(mask.mean())
    logger.info('good-region retention at step %d of %d: %.4f', m_hit, N, retention)
    return run.final.states[mask], retention


# ============================================
# Function: FM vs TM KL on a mixture target
# ============================================
def mixture_kl_comparison(target, configs, M, seed, cost_model=None, conditioning=None, n_jobs=1,
                          n_bootstrap=200):
    '''
    Simulate every (SamplerKind, Schedule) pair and estimate KL(generated || target).

    Parameters:
    - target (GaussianMixtureTarget): Target p1
    - configs (list): (SamplerKind, Schedule) pairs
    - M (int): Trajectories per configuration
    - seed (int): Master seed, shared by all configurations
    - cost_model (ComputeCostModel): Fills modeled_cost when given
    - conditioning (tuple): Optional (beta, hit_time) for good-region rejection
    - n_jobs (int): joblib thread workers over configurations

    Returns:
    - pd.DataFrame: one row per configuration with COMPARISON_COLUMNS, in config order
    '''
    parallel = Parallel(n_jobs=n_jobs, prefer='threads')
    rows = parallel(delayed(_comparison_row)(target, config_id, kind, schedule, M, seed, cost_model,
                                             conditioning, n_bootstrap)
                    for config_id, (kind, schedule) in enumerate(configs))
    return pd.DataFrame(rows, columns=COMPARISON_COLUMNS)


def _comparison_row(target, config_id, kind, schedule, M, seed, cost_model, conditioning, n_bootstrap):
    N = schedule.n_outer
    S = kind.resolve_inner_steps(schedule) if kind.is_tm and kind.inner_mode == 'euler' else None
    run = run_sampler(target, kind, schedule, M, seed, record_trajectory=conditioning is not None)
    if conditioning is None:
        states, retention = run.final.states, np.nan
    else:
        states, retention = _condition_on_good_region(target, run, N, *conditioning)

    estimate = knn_kl(states, lambda Y: log_density(target, Y), n_bootstrap=n_bootstrap, seed=seed)
    modeled = np.nan
    if cost_model is not None and (not kind.is_tm or S is not None):
        modeled = cost(cost_model, kind.method, N, S)
    logger.debug('%s N=%d: KL = %.5f +/- %.5f', kind.label(schedule), N, estimate.value, estimate.std_error)

    return {
        'config_id': config_id,
        'method': kind.label(schedule),
        'N': N,
        'S': np.nan if S is None else S,
        'inner_mode': kind.inner_mode if kind.is_tm else '',
        'modeled_cost': modeled,
        'kl': estimate.value,
        'kl_se': estimate.std_error,
        'M_used': estimate.sample_count,
        'retention': retention,
        'delta': dominant_log_responsibility(target, states),
    }
