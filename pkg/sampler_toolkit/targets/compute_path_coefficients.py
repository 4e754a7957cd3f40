'''
compute_path_coefficients.py

Scalar functions of the linear (CondOT) path X_t = (1 - t) X0 + t X1 with
X0 ~ N(0, I) and X1 ~ N(mu, sigma^2 I):

- B(t)   = (1 - t)^2 + sigma^2 t^2      variance of X_t
- A(t)   = t (1 + sigma^2) - 1          cross-covariance of X_t and V = X1 - X0
- k(t)   = A(t) / B(t)                  regression coefficient of V on X_t
- tau2(t) = sigma^2 / B(t)              conditional variance of V given X_t

The identity A^2 + sigma^2 = (1 + sigma^2) B is checked on every call.
'''

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from sampler_toolkit.errors import ConsistencyError, DomainError

IDENTITY_TOLERANCE = 1e-10


@dataclass(frozen=True)
class PathCoefficients:
    t: float
    B: float
    A: float
    k: float
    tau2: float


def _check_domain(t, sigma):
    if not np.all(np.isfinite(t)) or np.any(np.asarray(t) < 0) or np.any(np.asarray(t) > 1):
        raise DomainError(f't must lie in [0, 1], got {t!r}')
    if not np.all(np.isfinite(sigma)) or np.any(np.asarray(sigma) <= 0):
        raise DomainError(f'sigma must be positive, got {sigma!r}')


def variance_curve(t, sigma):
    '''Unchecked B(t); broadcasts over array t and sigma.'''
    return (1.0 - t) ** 2 + (sigma * t) ** 2


def cross_covariance_curve(t, sigma):
    '''Unchecked A(t); broadcasts over array t and sigma.'''
    return t * (1.0 + sigma ** 2) - 1.0


# ============================================
# Function: B(t)
# ============================================
def path_variance(t, sigma):
    '''
    Variance of X_t per coordinate.

    Parameters:
    - t (float): Time in [0, 1]
    - sigma (float): Target standard deviation, > 0

    Returns:
    - float: B(t) > 0
    '''
    _check_domain(t, sigma)
    return float(variance_curve(t, sigma))


# ============================================
# Function: A(t)
# ============================================
def path_cross_covariance(t, sigma):
    '''Cross-covariance A(t) = t (1 + sigma^2) - 1 between X_t and V.'''
    _check_domain(t, sigma)
    return float(cross_covariance_curve(t, sigma))


# ============================================
# Function: all path coefficients at one time
# ============================================
def path_coefficients(t, sigma):
    '''
    Compute B, A, k = A/B and tau2 = sigma^2/B at time t.

    Raises ConsistencyError when A^2 + sigma^2 differs from (1 + sigma^2) B by
    more than 1e-10 relative.
    '''
    _check_domain(t, sigma)
    t = float(t)
    sigma = float(sigma)
    B = variance_curve(t, sigma)
    A = cross_covariance_curve(t, sigma)

    lhs = A * A + sigma * sigma
    rhs = (1.0 + sigma * sigma) * B
    if abs(lhs - rhs) > IDENTITY_TOLERANCE * max(abs(rhs), 1e-300):
        raise ConsistencyError(f'path identity violated at t={t}, sigma={sigma}: {lhs!r} vs {rhs!r}')

    return PathCoefficients(t=t, B=B, A=A, k=A / B, tau2=sigma * sigma / B)


def variance_minimiser(sigma):
    '''Return (t*, B(t*)) where B attains its minimum sigma^2/(1+sigma^2).'''
    _check_domain(0.0, sigma)
    t_star = 1.0 / (1.0 + sigma ** 2)
    return t_star, sigma ** 2 / (1.0 + sigma ** 2)
