'''
sample_posterior.py

Exact ancestral sampling from the posterior of V given X_t.

- Unimodal posterior: mean + sqrt(tau2) * z
- Mixture posterior:  draw a component from the responsibilities, then draw
                      from that component's Gaussian posterior

Degenerate posteriors (tau2 = 0) return point masses.
'''

from __future__ import annotations

import numpy as np

from sampler_toolkit.errors import DomainError
from sampler_toolkit.posterior.compute_posterior import (
    MixturePosterior,
    UnimodalPosterior,
    component_means_batch,
    component_path_terms,
    log_responsibilities_batch,
)
from sampler_toolkit.targets.compute_path_coefficients import path_coefficients
from sampler_toolkit.targets.define_gaussian_targets import UnimodalGaussianTarget


# ============================================
# Function: Draw M samples from one posterior
# ============================================
def sample_posterior(post, rng, count):
    '''
    Draw i.i.d. samples from an exact posterior.

    Parameters:
    - post (UnimodalPosterior or MixturePosterior): Posterior to sample
    - rng (np.random.Generator): Seeded generator
    - count (int): Number of draws M >= 1

    Returns:
    - np.ndarray: (M, d) draws
    '''
    if count < 1:
        raise DomainError(f'count must be >= 1, got {count}')

    if isinstance(post, UnimodalPosterior):
        noise = rng.standard_normal((count, post.d))
        return post.mean[None, :] + np.sqrt(post.tau2) * noise

    if isinstance(post, MixturePosterior):
        labels = rng.choice(post.responsibilities.size, size=count, p=post.responsibilities)
        means = np.stack([c.mean for c in post.component_posteriors])
        stds = np.sqrt([c.tau2 for c in post.component_posteriors])
        noise = rng.standard_normal((count, post.d))
        return means[labels] + stds[labels, None] * noise

    raise DomainError(f'unsupported posterior type {type(post).__name__}')


# ============================================
# Function: One posterior draw per state
# ============================================
def sample_posterior_batch(target, t, X, rng):
    '''
    Draw one V ~ p(V | X_t = x) for every row x of X.

    Component labels come from inverse-CDF sampling of the responsibilities so
    the number of uniforms consumed does not depend on the weights.
    '''
    M, d = X.shape
    if isinstance(target, UnimodalGaussianTarget):
        coeffs = path_coefficients(t, target.sigma)
        mean = target.mu + coeffs.k * (X - target.mu * coeffs.t)
        return mean + np.sqrt(coeffs.tau2) * rng.standard_normal((M, d))

    weights = np.exp(log_responsibilities_batch(target, t, X))
    uniforms = rng.random(M)
    labels = (np.cumsum(weights, axis=1) < uniforms[:, None]).sum(axis=1)
    labels = np.minimum(labels, target.n_components - 1)

    means = component_means_batch(target, t, X)[np.arange(M), labels]
    _, _, tau2 = component_path_terms(target, t)
    return means + np.sqrt(tau2[labels])[:, None] * rng.standard_normal((M, d))
