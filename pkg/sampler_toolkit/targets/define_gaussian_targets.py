'''
define_gaussian_targets.py

Target distributions and time discretisation shared by every other module.

- UnimodalGaussianTarget: N(mu, sigma^2 I_d)
- GaussianMixtureTarget:  sum_k pi_k N(mu_k, sigma_k^2 I_d)
- Schedule:               outer grid t_n = n/N plus inner step count S

Also provides the two synthetic geometries used by the experiments: two modes
on a circle and a square lattice of modes.
'''

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from sampler_toolkit.errors import DomainError

WEIGHT_SUM_TOLERANCE = 1e-12


def _as_vector(values, name):
    vec = np.atleast_1d(np.asarray(values, dtype=float))
    if vec.ndim != 1 or vec.size == 0:
        raise DomainError(f'{name} must be a non-empty vector, got shape {vec.shape}')
    if not np.all(np.isfinite(vec)):
        raise DomainError(f'{name} must be finite')
    return vec


# ============================================
# Type: Unimodal Gaussian target
# ============================================
@dataclass(frozen=True, eq=False)
class UnimodalGaussianTarget:
    '''
    Isotropic Gaussian target N(mu, sigma^2 I_d).

    Parameters:
    - mu (array-like): Mean vector of length d
    - sigma (float): Isotropic standard deviation, > 0
    '''
    mu: np.ndarray
    sigma: float

    def __post_init__(self):
        object.__setattr__(self, 'mu', _as_vector(self.mu, 'mu'))
        sigma = float(self.sigma)
        if not sigma > 0 or not np.isfinite(sigma):
            raise DomainError(f'sigma must be positive and finite, got {self.sigma}')
        object.__setattr__(self, 'sigma', sigma)

    @property
    def d(self):
        return int(self.mu.size)


# ============================================
# Type: Isotropic Gaussian mixture target
# ============================================
@dataclass(frozen=True, eq=False)
class GaussianMixtureTarget:
    '''
    Mixture of K isotropic Gaussians.

    Parameters:
    - weights (array-like): Mixing weights pi_k, summing to 1
    - means (array-like): (K, d) component means
    - sigmas (array-like): (K,) component standard deviations

    Components may share a mean only when their sigmas differ.
    '''
    weights: np.ndarray
    means: np.ndarray
    sigmas: np.ndarray
    min_separation: float = field(init=False)

    def __post_init__(self):
        weights = _as_vector(self.weights, 'weights')
        means = np.asarray(self.means, dtype=float)
        if means.ndim == 1:
            means = means[:, None] if weights.size > 1 else means[None, :]
        sigmas = np.broadcast_to(np.asarray(self.sigmas, dtype=float), weights.shape).copy()

        if means.ndim != 2 or means.shape[0] != weights.size:
            raise DomainError(f'means must have shape (K, d) with K={weights.size}, got {means.shape}')
        if not np.all(np.isfinite(means)):
            raise DomainError('component means must be finite')
        if np.any(weights <= 0) or np.any(weights > 1):
            raise DomainError('mixture weights must lie in (0, 1]')
        if abs(weights.sum() - 1.0) > WEIGHT_SUM_TOLERANCE:
            raise DomainError(f'mixture weights must sum to 1, got {weights.sum()!r}')
        if np.any(~np.isfinite(sigmas)) or np.any(sigmas <= 0):
            raise DomainError('component sigmas must be positive and finite')

        gaps = np.linalg.norm(means[:, None, :] - means[None, :, :], axis=-1)
        for j in range(weights.size):
            for k in range(j + 1, weights.size):
                if gaps[j, k] == 0 and sigmas[j] == sigmas[k]:
                    raise DomainError(f'components {j} and {k} are exact duplicates')

        if weights.size > 1:
            off_diagonal = gaps[~np.eye(weights.size, dtype=bool)]
            min_separation = float(off_diagonal.min())
        else:
            min_separation = float('inf')

        object.__setattr__(self, 'weights', weights)
        object.__setattr__(self, 'means', means)
        object.__setattr__(self, 'sigmas', sigmas)
        object.__setattr__(self, 'min_separation', min_separation)

    @property
    def d(self):
        return int(self.means.shape[1])

    @property
    def n_components(self):
        return int(self.weights.size)

    @property
    def components(self):
        '''List of (pi, mu, sigma) tuples.'''
        return [(float(p), m.copy(), float(s)) for p, m, s in zip(self.weights, self.means, self.sigmas)]

    def component(self, j):
        return UnimodalGaussianTarget(self.means[j], self.sigmas[j])

    @classmethod
    def from_components(cls, components):
        weights, means, sigmas = zip(*components)
        return cls(np.asarray(weights), np.vstack([np.atleast_1d(m) for m in means]), np.asarray(sigmas))

    @classmethod
    def from_unimodal(cls, target):
        return cls(np.array([1.0]), target.mu[None, :], np.array([target.sigma]))


def as_mixture(target):
    '''Return target viewed as a GaussianMixtureTarget (K=1 for unimodal targets).'''
    if isinstance(target, GaussianMixtureTarget):
        return target
    if isinstance(target, UnimodalGaussianTarget):
        return GaussianMixtureTarget.from_unimodal(target)
    raise DomainError(f'unsupported target type {type(target).__name__}')


# ============================================
# Type: Outer/inner time discretisation
# ============================================
@dataclass(frozen=True)
class Schedule:
    '''
    Uniform Euler grid on [0, 1].

    Parameters:
    - n_outer (int): Outer step count N >= 1
    - n_inner (int): Inner step count S >= 1 (TM only)
    '''
    n_outer: int
    n_inner: int = 1

    def __post_init__(self):
        for name in ('n_outer', 'n_inner'):
            value = getattr(self, name)
            if isinstance(value, bool) or int(value) != value or value < 1:
                raise DomainError(f'{name} must be a positive integer, got {value!r}')
            object.__setattr__(self, name, int(value))

    @property
    def dt(self):
        return 1.0 / self.n_outer

    @property
    def ds(self):
        return 1.0 / self.n_inner

    @property
    def dt_exact(self):
        return Fraction(1, self.n_outer)

    @property
    def grid(self):
        # n/N rather than cumulative sums so t_N == 1.0 exactly
        return np.arange(self.n_outer + 1) / self.n_outer

    def time(self, n):
        if not 0 <= n <= self.n_outer:
            raise DomainError(f'step index {n} outside 0..{self.n_outer}')
        return n / self.n_outer


# ============================================
# Geometry builders
# ============================================
def circle_mixture(half_angle, sigma=0.1, radius=1.0, d=2, weights=None):
    '''
    Two equally weighted modes on a circle at polar angles +half_angle and -half_angle.

    Coordinates beyond the first two are zero when d > 2.
    '''
    if d < 2:
        raise DomainError('circle_mixture needs d >= 2')
    angles = np.array([half_angle, -half_angle], dtype=float)
    means = np.zeros((2, d))
    means[:, 0] = radius * np.cos(angles)
    means[:, 1] = radius * np.sin(angles)
    if weights is None:
        weights = np.full(2, 0.5)
    return GaussianMixtureTarget(np.asarray(weights, dtype=float), means, np.full(2, float(sigma)))


def grid_mixture(spacing, half_width=2, d=2, sigma=1.0):
    '''
    Equally weighted modes on a square lattice spacing * (i, j), i, j in -half_width..half_width.

    For d = 1 the lattice is a line; for d > 2 the extra coordinates are zero.
    The minimal mean separation D_min equals spacing.
    '''
    offsets = np.arange(-half_width, half_width + 1, dtype=float) * spacing
    if d == 1:
        means = offsets[:, None]
    else:
        ii, jj = np.meshgrid(offsets, offsets, indexing='ij')
        means = np.zeros((ii.size, d))
        means[:, 0] = ii.ravel()
        means[:, 1] = jj.ravel()
    k = means.shape[0]
    return GaussianMixtureTarget(np.full(k, 1.0 / k), means, np.full(k, float(sigma)))


def nearest_lattice_component(target, point):
    '''Index of the mixture component whose mean is closest to point (lowest index on ties).'''
    gaps = np.linalg.norm(target.means - np.asarray(point, dtype=float), axis=1)
    return int(np.argmin(gaps))
