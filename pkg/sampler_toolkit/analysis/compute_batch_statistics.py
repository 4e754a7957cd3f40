'''
compute_batch_statistics.py

Summary statistics of a batch of sampler states, with Monte Carlo standard
errors, for comparing simulated trajectories against closed-form traces.

Variance is the per-coordinate unbiased variance averaged over coordinates,
which is the isotropic s_n the recursions predict.
'''

import numpy as np

from sampler_toolkit.errors import DomainError

# ============================================
# Function: Compute batch summary statistics
# ============================================
def compute_batch_statistics(states):
    '''
    Compute mean, isotropic variance and their standard errors.

    Parameters:
    - states (np.ndarray): (M, d) sampler states, M >= 2

    Returns:
    - dict: mean (d,), mean_se (d,), variance, variance_se, lower, upper
            (variance -/+ 3 standard errors)
    '''
    states = np.asarray(states, dtype=float)
    if states.ndim != 2 or states.shape[0] < 2:
        raise DomainError(f'need an (M, d) batch with M >= 2, got {states.shape}')
    M, d = states.shape

    mean = states.mean(axis=0)
    centred = states - mean
    coord_var = (centred ** 2).sum(axis=0) / (M - 1)
    fourth = (centred ** 4).mean(axis=0)

    variance = coord_var.mean()
    # SE of a sample variance is sqrt((m4 - var^2) / M); coordinates treated as independent
    variance_se = np.sqrt(np.sum(np.maximum(fourth - coord_var ** 2, 0.0) / M)) / d

    stats = {
        'mean': mean,
        'mean_se': np.sqrt(coord_var / M),
        'variance': float(variance),
        'variance_se': float(variance_se),
        'lower': float(variance - 3 * variance_se),
        'upper': float(variance + 3 * variance_se),
    }
    return stats
