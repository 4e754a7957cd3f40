'''
compute_posterior.py

Exact conditional law of the difference latent V = X1 - X0 given X_t = x.

Unimodal target N(mu, sigma^2 I):
    V | X_t = x  ~  N(mu + k(t) (x - t mu), tau2(t) I)

Mixture target sum_j pi_j N(mu_j, sigma_j^2 I):
    p(V | X_t = x) = sum_j w_t(x, j) p(V | X_t = x, Z = j)
    w_t(x, j) ∝ pi_j B_t(j)^(-d/2) exp(-||x - t mu_j||^2 / (2 B_t(j)))

Responsibilities are evaluated in log space with scipy's logsumexp. The batch
helpers at the bottom take (M, d) arrays and are what the samplers call; the
single-point functions are thin wrappers around them.
'''

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from sampler_toolkit.errors import DomainError
from sampler_toolkit.targets.compute_path_coefficients import (
    cross_covariance_curve,
    path_coefficients,
    variance_curve,
)
from sampler_toolkit.targets.define_gaussian_targets import (
    UnimodalGaussianTarget,
    as_mixture,
)


# ============================================
# Posterior value types
# ============================================
@dataclass(frozen=True, eq=False)
class UnimodalPosterior:
    mean: np.ndarray
    tau2: float

    @property
    def d(self):
        return int(self.mean.size)


@dataclass(frozen=True, eq=False)
class MixturePosterior:
    '''
    Posterior of V as a mixture of per-component Gaussian posteriors.

    Parameters:
    - responsibilities (np.ndarray): (K,) weights w_t(x, j), summing to 1
    - component_posteriors (list): K UnimodalPosterior values
    '''
    responsibilities: np.ndarray
    component_posteriors: list

    @property
    def mean(self):
        '''Conditional mean E[V | X_t = x] = sum_j w_j mean_j.'''
        means = np.stack([post.mean for post in self.component_posteriors])
        return self.responsibilities @ means

    @property
    def d(self):
        return self.component_posteriors[0].d


@dataclass(frozen=True)
class NearestModeInfo:
    k_star: int
    distance: float
    margin: float


def _check_time(t):
    if not np.isfinite(t) or t < 0 or t > 1:
        raise DomainError(f't must lie in [0, 1], got {t!r}')


def _check_point(x, d):
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size != d:
        raise DomainError(f'x must be a vector of length {d}, got shape {x.shape}')
    return x


def as_state_batch(X, d):
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != d:
        raise DomainError(f'states must have shape (M, {d}), got {X.shape}')
    return X


# ============================================
# Function: Unimodal posterior
# ============================================
def unimodal_posterior(target, t, x):
    '''
    Exact Gaussian posterior of V given X_t = x for a unimodal target.

    Parameters:
    - target (UnimodalGaussianTarget): Target N(mu, sigma^2 I)
    - t (float): Time in [0, 1]
    - x (array-like): Point of length d

    Returns:
    - UnimodalPosterior: mean mu + k(t)(x - t mu), variance tau2(t)
    '''
    x = _check_point(x, target.d)
    coeffs = path_coefficients(t, target.sigma)
    mean = target.mu + coeffs.k * (x - target.mu * coeffs.t)
    return UnimodalPosterior(mean=mean, tau2=coeffs.tau2)


# ============================================
# Function: Mixture responsibilities
# ============================================
def responsibilities(target, t, x):
    '''
    Posterior component probabilities w_t(x, j) for a single point.

    Returns:
    - np.ndarray: (K,) weights summing to 1
    '''
    mixture = as_mixture(target)
    _check_time(t)
    x = _check_point(x, mixture.d)
    return np.exp(log_responsibilities_batch(mixture, t, x[None, :])[0])


# ============================================
# Function: Mixture posterior
# ============================================
def mixture_posterior(target, t, x):
    '''
    Decompose p(V | X_t = x) into responsibilities and per-component posteriors.

    Each component posterior is the unimodal posterior built with that
    component's mean and sigma, so a K=1 mixture reproduces unimodal_posterior.
    '''
    mixture = as_mixture(target)
    weights = responsibilities(mixture, t, x)
    components = [unimodal_posterior(mixture.component(j), t, x) for j in range(mixture.n_components)]
    return MixturePosterior(responsibilities=weights, component_posteriors=components)


# ============================================
# Function: Nearest path mean and margin
# ============================================
def nearest_mode(target, t, x):
    '''
    Nearest scaled mean k_t(x), its distance D_t(x) and the margin rho_t(x).

    The margin is min_{j != k} ||x - t mu_j|| - ||x - t mu_k||; it is +inf for
    K=1. Ties resolve to the lowest component index.
    '''
    mixture = as_mixture(target)
    _check_time(t)
    x = _check_point(x, mixture.d)
    k_star, distance, margin = nearest_mode_batch(mixture, t, x[None, :])
    return NearestModeInfo(k_star=int(k_star[0]), distance=float(distance[0]), margin=float(margin[0]))


# ============================================
# Batch helpers (M points at once)
# ============================================
def component_path_terms(mixture, t):
    '''Per-component (B_j, k_j, tau2_j) arrays of shape (K,) at time t.'''
    B = variance_curve(t, mixture.sigmas)
    A = cross_covariance_curve(t, mixture.sigmas)
    return B, A / B, mixture.sigmas ** 2 / B


def path_distances_batch(mixture, t, X):
    '''(M, K) distances ||x - t mu_j||.'''
    diff = X[:, None, :] - t * mixture.means[None, :, :]
    return np.sqrt(np.einsum('mkd,mkd->mk', diff, diff))


def log_responsibilities_batch(mixture, t, X):
    '''(M, K) log w_t(x, j), normalised with logsumexp along components.'''
    B, _, _ = component_path_terms(mixture, t)
    diff = X[:, None, :] - t * mixture.means[None, :, :]
    sq = np.einsum('mkd,mkd->mk', diff, diff)
    logits = np.log(mixture.weights) - 0.5 * mixture.d * np.log(B) - sq / (2.0 * B)
    return logits - logsumexp(logits, axis=1, keepdims=True)


def component_means_batch(mixture, t, X):
    '''(M, K, d) component posterior means mu_j + k_j (x - t mu_j).'''
    _, k, _ = component_path_terms(mixture, t)
    means = mixture.means[None, :, :]
    return means + k[None, :, None] * (X[:, None, :] - t * means)


def posterior_mean_batch(target, t, X):
    '''
    Conditional mean E[V | X_t = x] for every row of X.

    Unimodal targets (and K=1 mixtures) use the closed form directly.
    '''
    if isinstance(target, UnimodalGaussianTarget):
        coeffs = path_coefficients(t, target.sigma)
        return target.mu + coeffs.k * (X - target.mu * coeffs.t)
    if target.n_components == 1:
        return posterior_mean_batch(target.component(0), t, X)
    log_w = log_responsibilities_batch(target, t, X)
    return np.einsum('mk,mkd->md', np.exp(log_w), component_means_batch(target, t, X))


def nearest_mode_batch(mixture, t, X):
    '''Arrays (k_star, distance, margin) of length M.'''
    dist = path_distances_batch(mixture, t, X)
    k_star = np.argmin(dist, axis=1)
    rows = np.arange(dist.shape[0])
    distance = dist[rows, k_star]
    if mixture.n_components == 1:
        return k_star, distance, np.full(dist.shape[0], np.inf)
    others = dist.copy()
    others[rows, k_star] = np.inf
    margin = others.min(axis=1) - distance
    return k_star, distance, margin


def log_density(target, X):
    '''Log-density of the target at every row of X (mixtures via logsumexp).'''
    mixture = as_mixture(target)
    X = as_state_batch(X, mixture.d)
    sq = np.einsum('mkd,mkd->mk', X[:, None, :] - mixture.means[None], X[:, None, :] - mixture.means[None])
    var = mixture.sigmas ** 2
    log_comp = (np.log(mixture.weights) - 0.5 * mixture.d * np.log(2 * np.pi * var) - sq / (2 * var))
    return logsumexp(log_comp, axis=1)


def component_log_density(target, k, X):
    '''Log-density of mixture component k alone (without its weight).'''
    mixture = as_mixture(target)
    return log_density(mixture.component(k), X)


def log_component_responsibility(target, k, X):
    '''log of the target-level responsibility pi_k phi_k(x) / p(x) at t=1.'''
    mixture = as_mixture(target)
    X = as_state_batch(X, mixture.d)
    return log_responsibilities_batch(mixture, 1.0, X)[:, k]

