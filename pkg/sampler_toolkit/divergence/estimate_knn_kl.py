'''
estimate_knn_kl.py

Monte Carlo estimate of KL(p || q) from samples of p and the exact log-density of q:

    KL = -H(p) - mean_i log q(x_i)

H(p) is the Kozachenko-Leonenko first-nearest-neighbour entropy estimate

    H = psi(M) - psi(1) + log V_d + (d / M) sum_i log eps_i

with eps_i the distance from x_i to its nearest other sample and V_d the
volume of the unit d-ball. The standard error is a bootstrap over the
per-point terms.
'''

from __future__ import annotations

import logging

import numpy as np
from scipy.special import digamma, gammaln
from sklearn.neighbors import NearestNeighbors

from sampler_toolkit.divergence.compute_gaussian_kl import KLEstimate
from sampler_toolkit.errors import DomainError

logger = logging.getLogger(__name__)

MIN_SAMPLES = 1000
N_BOOTSTRAP = 200
JITTER_SCALE = 1e-12


def log_unit_ball_volume(d):
    return 0.5 * d * np.log(np.pi) - gammaln(0.5 * d + 1.0)


def nearest_neighbour_distances(samples, n_jobs=1):
    '''Distance from each sample to its nearest other sample.'''
    model = NearestNeighbors(n_neighbors=2, n_jobs=n_jobs).fit(samples)
    distances, _ = model.kneighbors(samples)
    return distances[:, 1]


def knn_entropy_terms(samples, seed=0, n_jobs=1):
    '''
    Per-point Kozachenko-Leonenko entropy contributions and a jitter flag.

    Duplicate samples (zero distance) are perturbed by Gaussian noise at 1e-12
    times the sample scale before the distances are recomputed.
    '''
    M, d = samples.shape
    eps = nearest_neighbour_distances(samples, n_jobs)
    jittered = False
    if np.any(eps == 0):
        jittered = True
        scale = max(1.0, float(np.max(np.abs(samples))))
        rng = np.random.default_rng(seed)
        logger.warning('%d duplicate samples; applying %.0e jitter', int(np.sum(eps == 0)), JITTER_SCALE)
        samples = samples + JITTER_SCALE * scale * rng.standard_normal(samples.shape)
        eps = nearest_neighbour_distances(samples, n_jobs)
        eps = np.maximum(eps, np.finfo(float).tiny)

    constant = digamma(M) - digamma(1) + log_unit_ball_volume(d)
    return constant + d * np.log(eps), jittered


# ============================================
# Function: Nearest-neighbour KL estimate
# ============================================
def knn_kl(samples, log_density, n_bootstrap=N_BOOTSTRAP, seed=0, n_jobs=1):
    '''
    Estimate KL(p || q) from samples of p and the exact log-density of q.

    Parameters:
    - samples (np.ndarray): (M, d) draws from p, M >= 1000
    - log_density (callable): Maps an (M, d) array to (M,) values of log q
    - n_bootstrap (int): Bootstrap resamples for the standard error
    - seed (int): Seed for the bootstrap (and jitter, if needed)
    - n_jobs (int): Workers for the neighbour search

    Returns:
    - KLEstimate: method 'knn_mc' with bootstrap standard error
    '''
    samples = np.asarray(samples, dtype=float)
    if samples.ndim == 1:
        samples = samples[:, None]
    M = samples.shape[0]
    if M < MIN_SAMPLES:
        raise DomainError(f'knn_kl needs at least {MIN_SAMPLES} samples, got {M}')

    entropy_terms, jittered = knn_entropy_terms(samples, seed, n_jobs)
    log_q = np.asarray(log_density(samples), dtype=float)
    if log_q.shape != (M,) or not np.all(np.isfinite(log_q)):
        raise DomainError('log_density must return M finite values')

    # sorting makes the estimate and its bootstrap independent of sample order
    point_terms = np.sort(-entropy_terms - log_q)
    value = float(point_terms.mean())

    rng = np.random.default_rng(seed)
    boot = np.empty(n_bootstrap)
    for b in range(n_bootstrap):
        boot[b] = point_terms[rng.integers(0, M, M)].mean()
    std_error = float(boot.std(ddof=1)) if n_bootstrap > 1 else 0.0

    return KLEstimate(value=value, method='knn_mc', std_error=std_error, sample_count=M, jittered=jittered)
