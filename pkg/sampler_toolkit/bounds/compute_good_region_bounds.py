'''
compute_good_region_bounds.py

Good-region bounds for mixture targets.

The good region at time t is
    G_t(r, rho*) = {x : ||x - t mu_k(x)|| <= r and rho_t(x) >= rho*}
with k(x) the nearest path mean and rho_t(x) the distance margin to the
other path means. Inside it the mixture posterior behaves like the posterior
of the single component k(x).

- good_region_escape_bound:       P(X_t outside G) <= exp(-r^2/2B) + exp(-(t D_min - rho*)^2 / 8B)
- attraction_failure_bound:       delta = (N - M + 1) exp(-((r / sqrt(B*) - sqrt(d))_+)^2 / 2)
- responsibility_dominance_bound: 1 - w_t(x, k) <= eps for every x in G
- zeta_bound:                     mixture density correction at one x in G

The escape bound as written uses Bmin; its Gaussian tail step is exact for
d <= 2 with equal component variances. use_max_variance=True evaluates it
with Bmax instead, which keeps it valid for unequal variances.
'''

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from sampler_toolkit.bounds.compute_tv_bounds import BoundValue, bounded_exp, check_bound_time
from sampler_toolkit.errors import DomainError, PreconditionError
from sampler_toolkit.posterior.compute_posterior import (
    as_state_batch,
    component_path_terms,
    nearest_mode,
    nearest_mode_batch,
)
from sampler_toolkit.targets.define_gaussian_targets import as_mixture


# ============================================
# Type: Good region parameters
# ============================================
@dataclass(frozen=True)
class GoodRegionSpec:
    '''
    Parameters of G_t(r, rho*).

    Parameters:
    - t (float): Time in (0, 1]
    - r (float): Radius around the nearest path mean, >= 0
    - rho_star (float): Required margin, >= 0
    - beta (float): Set when derived with from_beta (0 < beta < 1/2)
    '''
    t: float
    r: float
    rho_star: float
    beta: float | None = None

    def __post_init__(self):
        check_bound_time(self.t)
        if not self.r >= 0:
            raise DomainError(f'r must be >= 0, got {self.r!r}')
        if not self.rho_star >= 0:
            raise DomainError(f'rho_star must be >= 0, got {self.rho_star!r}')
        if self.beta is not None and not 0 < self.beta < 0.5:
            raise DomainError(f'beta must lie in (0, 1/2), got {self.beta!r}')

    @classmethod
    def from_beta(cls, target, beta, hit_time):
        '''r = beta t_M D_min and rho* = t_M D_min - 2 r, so 2 r + rho* = t_M D_min.'''
        mixture = as_mixture(target)
        if not np.isfinite(mixture.min_separation):
            raise DomainError('beta parameterisation needs at least two components')
        scale = hit_time * mixture.min_separation
        r = beta * scale
        return cls(t=hit_time, r=r, rho_star=scale - 2.0 * r, beta=beta)

    def at(self, t):
        return GoodRegionSpec(t=t, r=self.r, rho_star=self.rho_star, beta=self.beta)


# ============================================
# Function: Region membership
# ============================================
def good_region_membership(target, spec, x):
    '''
    Test x in G_t(r, rho*).

    Returns:
    - (bool, NearestModeInfo)
    '''
    info = nearest_mode(target, spec.t, x)
    return bool(info.distance <= spec.r and info.margin >= spec.rho_star), info


def good_region_mask(target, spec, X):
    '''Boolean membership and nearest component for every row of X.'''
    mixture = as_mixture(target)
    X = as_state_batch(X, mixture.d)
    k_star, distance, margin = nearest_mode_batch(mixture, spec.t, X)
    return (distance <= spec.r) & (margin >= spec.rho_star), k_star


# ============================================
# Function: Escape probability bound
# ============================================
def good_region_escape_bound(target, spec, use_max_variance=False):
    '''
    Upper bound on P(X_t not in G_t(r, rho*)) for X_t on the linear path.

    Raises PreconditionError('margin_threshold') when rho* > t D_min.
    '''
    mixture = as_mixture(target)
    t = spec.t
    if spec.rho_star > t * mixture.min_separation:
        raise PreconditionError(
            'margin_threshold', f'rho*={spec.rho_star:.6g} exceeds t D_min={t * mixture.min_separation:.6g}'
        )
    B, _, _ = component_path_terms(mixture, t)
    b = float(B.max() if use_max_variance else B.min())
    gap = t * mixture.min_separation - spec.rho_star
    radius_term = bounded_exp(-spec.r ** 2 / (2.0 * b))
    margin_term = 0.0 if np.isinf(gap) else bounded_exp(-gap ** 2 / (8.0 * b))
    return BoundValue(radius_term + margin_term)


# ============================================
# Function: Local attraction failure probability
# ============================================
def attraction_failure_bound(target, spec, N, M, d=None):
    '''
    delta = (N - M + 1) exp(-1/2 ((r / sqrt(B*) - sqrt(d))_+)^2), B* = (1 - t_M)^2 + sigma_max^2.

    Probability that a trajectory in G at hitting step M leaves the ball of
    radius r around its mode's path mean before t = 1.
    '''
    mixture = as_mixture(target)
    if not 0 <= M <= N - 1:
        raise DomainError(f'hitting step must satisfy 0 <= M <= N-1, got M={M}, N={N}')
    d = mixture.d if d is None else int(d)
    t_M = M / N
    b_star = (1.0 - t_M) ** 2 + float(mixture.sigmas.max()) ** 2
    excess = max(spec.r / np.sqrt(b_star) - np.sqrt(d), 0.0)
    return BoundValue((N - M + 1) * np.exp(-0.5 * excess ** 2))


# ============================================
# Function: Responsibility dominance
# ============================================
def responsibility_dominance_bound(target, t, spec, k=None):
    '''
    eps with 1 - w_t(x, k) <= eps for every x in G_t(r, rho*).

    When k is None the smallest mixing weight is used, covering every component.
    '''
    mixture = as_mixture(target)
    check_bound_time(t)
    if mixture.n_components == 1:
        return BoundValue(0.0)
    B, _, _ = component_path_terms(mixture, t)
    b_min, b_max = float(B.min()), float(B.max())
    pi_k = mixture.weights.min() if k is None else mixture.weights[k]
    log_eps = (0.5 * mixture.d * np.log(b_max / b_min) + np.log((1.0 - pi_k) / pi_k)
               - spec.rho_star ** 2 / (2.0 * b_max) + spec.r ** 2 / (2.0 * b_min))
    return BoundValue(bounded_exp(log_eps))


# ============================================
# Function: Density correction factor
# ============================================
def mixture_density_correction(target, t, x):
    '''zeta_t(x) = sum_{j != k} pi_j phi_j(x) / (pi_k phi_k(x)) for the nearest k, phi_j = N(t mu_j, B_j I).'''
    mixture = as_mixture(target)
    if mixture.n_components == 1:
        return 0.0
    x = np.asarray(x, dtype=float)
    k = nearest_mode(mixture, t, x).k_star
    B, _, _ = component_path_terms(mixture, t)
    sq = np.sum((x[None, :] - t * mixture.means) ** 2, axis=1)
    logits = np.log(mixture.weights) - 0.5 * mixture.d * np.log(B) - sq / (2.0 * B)
    others = np.delete(logits, k)
    return bounded_exp(logsumexp(others) - logits[k])


def zeta_bound(target, t, x, spec):
    '''
    ((1 - pi_k) / pi_k) max_{j != k} (B_k/B_j)^(d/2) exp(-rho*^2 / (2 B_j) + r^2 / (2 B_k)).

    Raises PreconditionError('good_region') when x is outside G_t(r, rho*).
    '''
    mixture = as_mixture(target)
    check_bound_time(t)
    if mixture.n_components == 1:
        return BoundValue(0.0)
    inside, info = good_region_membership(mixture, spec.at(t), x)
    if not inside:
        raise PreconditionError(
            'good_region', f'x has D_t={info.distance:.6g}, margin={info.margin:.6g} outside (r, rho*)'
        )
    k = info.k_star
    B, _, _ = component_path_terms(mixture, t)
    others = np.delete(np.arange(mixture.n_components), k)
    log_terms = (0.5 * mixture.d * np.log(B[k] / B[others])
                 - spec.rho_star ** 2 / (2.0 * B[others]) + spec.r ** 2 / (2.0 * B[k]))
    odds = (1.0 - mixture.weights[k]) / mixture.weights[k]
    return BoundValue(odds * bounded_exp(log_terms.max()))
