'''
compute_tv_bounds.py

How far is the mixture posterior p(V | X_t = x) from the posterior of its
nearest component p(V | X_t = x, Z = k*)?

- tv_bound:       C_pi (Bmax/Bmin)^(d/2) exp(D^2/2 (1/Bmin - 1/Bmax) - rho^2 / (2 Bmax))
- cor2_bound:     C_pi exp(2 - t^2 D_min^2 / (4 Bmax)), for equal variances and D_t(x) <= sqrt(Bmin)
- brute_force_tv: 1/2 integral |p - p_k| on a dense grid (d <= 2), the numerical oracle

with C_pi = 1/pi_k* - 1, D = D_t(x) and rho = rho_t(x) from nearest_mode.
Bounds above 1 are returned as-is and flagged vacuous.
'''

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy.integrate import trapezoid

from sampler_toolkit.errors import DomainError, PreconditionError
from sampler_toolkit.posterior.compute_posterior import (
    MixturePosterior,
    UnimodalPosterior,
    component_path_terms,
    mixture_posterior,
    nearest_mode,
)
from sampler_toolkit.targets.define_gaussian_targets import as_mixture

logger = logging.getLogger(__name__)

EQUAL_VARIANCE_TOLERANCE = 1e-9


@dataclass(frozen=True)
class BoundValue:
    '''A probability-type upper bound; vacuous when it is not below 1.'''
    value: float

    @property
    def vacuous(self):
        return not self.value < 1.0

    def __float__(self):
        return float(self.value)


@dataclass(frozen=True)
class TVBoundReport:
    bound_value: float
    c_pi: float
    b_min: float
    b_max: float
    distance: float
    margin: float
    k_star: int
    brute_force_tv: float | None = None

    @property
    def vacuous(self):
        return not self.bound_value < 1.0


@dataclass(frozen=True)
class GridSpec:
    '''
    Quadrature grid for brute_force_tv.

    The grid spans span_std posterior stds around every component posterior
    mean, starts at spacing tau_min * spacing_fraction and is halved until two
    successive values differ by less than tolerance.
    '''
    span_std: float = 8.0
    spacing_fraction: float = 1.0 / 20.0
    tolerance: float = 1e-4
    max_refinements: int = 3


def check_bound_time(t):
    if not np.isfinite(t) or t <= 0 or t > 1:
        raise DomainError(f't must lie in (0, 1], got {t!r}')


def bounded_exp(log_value):
    with np.errstate(over='ignore'):
        return float(np.exp(log_value))


# ============================================
# Function: Local-unimodality TV bound
# ============================================
def tv_bound(target, t, x, with_brute_force=False, grid_spec=None):
    '''
    Upper bound on TV(p(V | X_t = x), p(V | X_t = x, Z = k*)).

    A single-component target returns bound 0 with C_pi = 0.

    Returns:
    - TVBoundReport: bound and its constituents; brute_force_tv filled when
      requested (d <= 2 only)
    '''
    mixture = as_mixture(target)
    check_bound_time(t)
    info = nearest_mode(mixture, t, x)
    B, _, _ = component_path_terms(mixture, t)
    b_min, b_max = float(B.min()), float(B.max())

    if mixture.n_components == 1:
        return TVBoundReport(0.0, 0.0, b_min, b_max, info.distance, info.margin, info.k_star,
                             0.0 if with_brute_force else None)

    pi_k = mixture.weights[info.k_star]
    c_pi = 1.0 / pi_k - 1.0
    exponent = (0.5 * info.distance ** 2 * (1.0 / b_min - 1.0 / b_max)
                - info.margin ** 2 / (2.0 * b_max))
    log_bound = np.log(c_pi) + 0.5 * mixture.d * np.log(b_max / b_min) + exponent
    bound = bounded_exp(log_bound)

    brute = brute_force_tv(mixture, t, x, grid_spec) if with_brute_force else None
    return TVBoundReport(bound, c_pi, b_min, b_max, info.distance, info.margin, info.k_star, brute)


# ============================================
# Function: Simplified equal-variance bound
# ============================================
def cor2_bound(target, t, x):
    '''
    C_pi exp(2 - t^2 D_min^2 / (4 Bmax)).

    Preconditions (PreconditionError names the failing one):
    - 'components':      K >= 2
    - 'equal_variance':  Bmax = Bmin within 1e-9 relative
    - 'near_path_mean':  D_t(x) <= sqrt(Bmin)
    '''
    mixture = as_mixture(target)
    check_bound_time(t)
    if mixture.n_components < 2:
        raise PreconditionError('components', 'cor2_bound needs at least two components')

    B, _, _ = component_path_terms(mixture, t)
    b_min, b_max = float(B.min()), float(B.max())
    if b_max - b_min > EQUAL_VARIANCE_TOLERANCE * b_max:
        raise PreconditionError('equal_variance', f'Bmax={b_max!r} differs from Bmin={b_min!r}')

    info = nearest_mode(mixture, t, x)
    if info.distance > np.sqrt(b_min):
        raise PreconditionError(
            'near_path_mean', f'D_t(x)={info.distance:.6g} exceeds sqrt(Bmin)={np.sqrt(b_min):.6g}'
        )

    c_pi = 1.0 / mixture.weights[info.k_star] - 1.0
    return BoundValue(c_pi * bounded_exp(2.0 - t ** 2 * mixture.min_separation ** 2 / (4.0 * b_max)))


# ============================================
# Function: Brute-force TV oracle
# ============================================
def _gaussian_1d(grid, mean, tau):
    return np.exp(-0.5 * ((grid - mean) / tau) ** 2) / (np.sqrt(2 * np.pi) * tau)


def _as_components(post):
    '''(weights, means, taus) of a UnimodalPosterior or MixturePosterior.'''
    if isinstance(post, MixturePosterior):
        means = np.stack([c.mean for c in post.component_posteriors])
        taus = np.sqrt([c.tau2 for c in post.component_posteriors])
        return np.asarray(post.responsibilities), means, taus
    if isinstance(post, UnimodalPosterior):
        return np.ones(1), post.mean[None, :], np.sqrt([post.tau2])
    raise DomainError(f'unsupported posterior type {type(post).__name__}')


def _density_on_grid(axes, weights, means, taus):
    if len(axes) == 1:
        return sum(w * _gaussian_1d(axes[0], m[0], s) for w, m, s in zip(weights, means, taus))
    out = np.zeros((axes[0].size, axes[1].size))
    for w, m, s in zip(weights, means, taus):
        out += w * np.outer(_gaussian_1d(axes[0], m[0], s), _gaussian_1d(axes[1], m[1], s))
    return out


def _half_l1(axes, p, q):
    gap = np.abs(_density_on_grid(axes, *p) - _density_on_grid(axes, *q))
    if len(axes) == 1:
        return 0.5 * trapezoid(gap, axes[0])
    return 0.5 * trapezoid(trapezoid(gap, axes[1], axis=1), axes[0])


def posterior_tv(post_p, post_q, grid_spec=None):
    '''
    TV between two posteriors of V in d <= 2 by refined trapezoidal quadrature.

    Step-by-step:
    1. Cover span_std posterior stds around every component mean of both laws.
    2. Integrate |p - q| / 2 at spacing tau_min * spacing_fraction.
    3. Halve the spacing until successive values differ by less than tolerance.
    '''
    spec = grid_spec or GridSpec()
    p = _as_components(post_p)
    q = _as_components(post_q)
    means = np.vstack([p[1], q[1]])
    taus = np.concatenate([p[2], q[2]])
    if means.shape[1] > 2:
        raise DomainError(f'posterior_tv supports d <= 2, got d={means.shape[1]}')
    if taus.min() <= 0:
        raise DomainError('posterior_tv needs non-degenerate posteriors')

    lo = (means - spec.span_std * taus[:, None]).min(axis=0)
    hi = (means + spec.span_std * taus[:, None]).max(axis=0)

    def evaluate(spacing):
        axes = [np.linspace(a, b, int(np.ceil((b - a) / spacing)) + 1) for a, b in zip(lo, hi)]
        return _half_l1(axes, p, q)

    spacing = taus.min() * spec.spacing_fraction
    value = evaluate(spacing)
    for _ in range(spec.max_refinements):
        spacing /= 2.0
        refined = evaluate(spacing)
        converged = abs(refined - value) < spec.tolerance
        value = refined
        if converged:
            break
    else:
        logger.warning('posterior_tv did not reach tolerance %.1e', spec.tolerance)

    return float(np.clip(value, 0.0, 1.0))


def brute_force_tv(target, t, x, grid_spec=None):
    '''
    Numerical TV between the mixture posterior and its nearest-component posterior.

    Parameters:
    - target: mixture (or unimodal) target with d <= 2
    - t (float): Time in (0, 1]
    - x (array-like): Conditioning point
    - grid_spec (GridSpec): Quadrature settings

    Returns:
    - float: TV in [0, 1]
    '''
    mixture = as_mixture(target)
    if mixture.d > 2:
        raise DomainError(f'brute_force_tv supports d <= 2, got d={mixture.d}')
    check_bound_time(t)
    if mixture.n_components == 1:
        return 0.0

    post = mixture_posterior(mixture, t, x)
    k = nearest_mode(mixture, t, x).k_star
    return posterior_tv(post, post.component_posteriors[k], grid_spec)
