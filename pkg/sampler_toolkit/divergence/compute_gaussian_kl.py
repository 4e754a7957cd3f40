'''
compute_gaussian_kl.py

Closed-form KL divergence between Gaussians.

gaussian_kl is the isotropic case N(mu_p, s_p I) vs N(mu_q, s_q I);
gaussian_kl_full is the general trace / quadratic / log-det formula.
'''

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from sampler_toolkit.errors import DomainError

METHODS = ('closed_form', 'knn_mc')


@dataclass(frozen=True)
class KLEstimate:
    '''
    A KL value with its provenance.

    std_error and sample_count are set only for Monte Carlo estimates;
    jittered marks a kNN estimate where duplicate samples were perturbed.
    '''
    value: float
    method: str = 'closed_form'
    std_error: float | None = None
    sample_count: int | None = None
    jittered: bool = False

    def __post_init__(self):
        if self.method not in METHODS:
            raise DomainError(f'unknown KL method {self.method!r}')
        if (self.std_error is not None) != (self.method == 'knn_mc'):
            raise DomainError('std_error is required for knn_mc estimates and only for them')


# ============================================
# Function: Isotropic Gaussian KL
# ============================================
def gaussian_kl(mu_p, s_p, mu_q, s_q, d=None):
    '''
    KL(N(mu_p, s_p I_d) || N(mu_q, s_q I_d)).

    Parameters:
    - mu_p, mu_q (array-like): Means of length d
    - s_p, s_q (float): Isotropic variances, > 0
    - d (int): Dimension; defaults to len(mu_p)

    Returns:
    - KLEstimate: exact closed-form value
    '''
    mu_p = np.atleast_1d(np.asarray(mu_p, dtype=float))
    mu_q = np.atleast_1d(np.asarray(mu_q, dtype=float))
    d = mu_p.size if d is None else int(d)
    if mu_p.size != mu_q.size or mu_p.size not in (1, d):
        raise DomainError('mean vectors must match each other and d')
    if not s_p > 0 or not s_q > 0:
        raise DomainError(f'variances must be positive, got s_p={s_p}, s_q={s_q}')

    ratio = s_p / s_q
    excess = ratio - 1.0
    mean_term = float(np.sum((mu_q - mu_p) ** 2)) / (2.0 * s_q)
    value = 0.5 * d * (excess - np.log1p(excess)) + mean_term
    return KLEstimate(value=float(value))


# ============================================
# Function: Full-covariance Gaussian KL
# ============================================
def gaussian_kl_full(mu_p, cov_p, mu_q, cov_q):
    '''KL(N(mu_p, cov_p) || N(mu_q, cov_q)) for positive-definite covariances.'''
    mu_p = np.asarray(mu_p, dtype=float)
    mu_q = np.asarray(mu_q, dtype=float)
    cov_p = np.atleast_2d(np.asarray(cov_p, dtype=float))
    cov_q = np.atleast_2d(np.asarray(cov_q, dtype=float))
    d = mu_p.size

    sign_p, logdet_p = np.linalg.slogdet(cov_p)
    sign_q, logdet_q = np.linalg.slogdet(cov_q)
    if sign_p <= 0 or sign_q <= 0:
        raise DomainError('covariances must be positive definite')

    diff = mu_q - mu_p
    trace_term = np.trace(np.linalg.solve(cov_q, cov_p))
    quad_term = diff @ np.linalg.solve(cov_q, diff)
    value = 0.5 * (trace_term + quad_term - d + logdet_q - logdet_p)
    return KLEstimate(value=float(value))
