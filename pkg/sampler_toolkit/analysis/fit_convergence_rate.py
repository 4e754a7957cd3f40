'''
fit_convergence_rate.py

Least-squares slope of log KL against log(step count).

KL values below RATE_FLOOR are dropped before fitting; they sit at the
floating-point floor and would flatten the slope.
'''

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from sampler_toolkit.errors import DomainError

RATE_FLOOR = 1e-14
MIN_POINTS = 4


@dataclass(frozen=True)
class RateFit:
    slope: float
    intercept: float
    fit_range: tuple
    residual: float
    n_points: int
    n_excluded: int


# ============================================
# Function: Fit log-log convergence rate
# ============================================
def fit_rate(steps, kl_values, floor=RATE_FLOOR):
    '''
    Fit log KL = intercept + slope * log(steps).

    Parameters:
    - steps (array-like): Grid of N (or S) values, all positive
    - kl_values (array-like): KL at each grid value, all positive and finite
    - floor (float): Points with KL below this are excluded

    Returns:
    - RateFit: slope, intercept, (min, max) of the fitted steps and RMS residual
    '''
    steps = np.asarray(steps, dtype=float)
    kl_values = np.asarray(kl_values, dtype=float)
    if steps.shape != kl_values.shape or steps.ndim != 1:
        raise DomainError('steps and kl_values must be 1-D arrays of equal length')
    if np.any(~np.isfinite(kl_values)) or np.any(kl_values <= 0):
        raise DomainError('KL values must be positive and finite')
    if np.any(steps <= 0):
        raise DomainError('step counts must be positive')

    keep = kl_values >= floor
    if keep.sum() < MIN_POINTS:
        raise DomainError(f'need at least {MIN_POINTS} points above {floor:g}, got {int(keep.sum())}')

    x = np.log(steps[keep])
    y = np.log(kl_values[keep])
    slope, intercept = np.polyfit(x, y, 1)
    residual = float(np.sqrt(np.mean((y - (intercept + slope * x)) ** 2)))

    return RateFit(
        slope=float(slope),
        intercept=float(intercept),
        fit_range=(float(steps[keep].min()), float(steps[keep].max())),
        residual=residual,
        n_points=int(keep.sum()),
        n_excluded=int((~keep).sum()),
    )
