'''
compute_variance_trace.py

Closed-form (sampling-free) variance evolution of the FM and TM samplers on a
unimodal target N(mu, sigma^2 I), and the resulting KL divergences.

Per outer step n (dt = 1/N, t_n = n/N):
    a_n      = 1 + dt k(t_n)
    w_n      = a_n^2 / (a_n^2 + dt^2 sigma^2 / B(t_n)^2)
    s_fm     : s_{n+1} = a_n^2 s_n
    s_tm     : s_{n+1} = a_n^2 s_n + dt^2 c_S(n) tau2(t_n)
    r        = s / B(t_n)

c_S(n) is the variance contraction of the inner FM problem whose target has
std tau(t_n); it equals the inner product of w_j over S inner steps.
'''

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import pandas as pd
from scipy import integrate

from sampler_toolkit.errors import DomainError
from sampler_toolkit.targets.compute_path_coefficients import (
    cross_covariance_curve,
    variance_curve,
)

TRACE_COLUMNS = ['n', 't', 'B', 'A', 'k', 'tau2', 'a', 'w', 's_fm', 's_tm', 'r_fm', 'r_tm', 'c_S']


def _check_args(sigma, N, S=1):
    if not np.isfinite(sigma) or sigma <= 0:
        raise DomainError(f'sigma must be positive, got {sigma!r}')
    if int(N) != N or N < 1:
        raise DomainError(f'N must be a positive integer, got {N!r}')
    if S is not None and (int(S) != S or S < 1):
        raise DomainError(f'S must be a positive integer or None (exact), got {S!r}')


@dataclass(frozen=True, eq=False)
class VarianceTrace:
    '''
    Per-step closed-form quantities for n = 0..N.

    Arrays have N+1 entries. a, w, c_S and b_scale describe the step taken
    from t_n, so their last entry is NaN. TM columns are NaN for FM-only traces.
    '''
    sigma: float
    N: int
    S: int | None
    d: int
    t: np.ndarray
    B: np.ndarray
    A: np.ndarray
    k: np.ndarray
    tau2: np.ndarray
    a: np.ndarray
    b_scale: np.ndarray
    w: np.ndarray
    s_fm: np.ndarray
    s_tm: np.ndarray
    r_fm: np.ndarray
    r_tm: np.ndarray
    c_S: np.ndarray

    @property
    def has_tm(self):
        return not np.all(np.isnan(self.s_tm))

    def b(self, mu):
        '''Mean offsets b_n = dt (mu - k(t_n) mu t_n) as an (N+1, d) array.'''
        return self.b_scale[:, None] * np.asarray(mu, dtype=float)[None, :]

    def injected_variance(self):
        '''Per-step TM variance injection dt^2 c_S tau2(t_n).'''
        return (1.0 / self.N) ** 2 * self.c_S * self.tau2

    def to_frame(self):
        frame = pd.DataFrame({
            'n': np.arange(self.N + 1),
            't': self.t,
            'B': self.B,
            'A': self.A,
            'k': self.k,
            'tau2': self.tau2,
            'a': self.a,
            'w': self.w,
            's_fm': self.s_fm,
            's_tm': self.s_tm,
            'r_fm': self.r_fm,
            'r_tm': self.r_tm,
            'c_S': self.c_S,
        })
        return frame[TRACE_COLUMNS]


@dataclass(frozen=True)
class KLReport:
    kl_fm: float
    kl_tm: float
    d: int
    s_fm_final: float
    s_tm_final: float


def _step_terms(sigma, N):
    t = np.arange(N + 1) / N
    B = variance_curve(t, sigma)
    A = cross_covariance_curve(t, sigma)
    k = A / B
    tau2 = sigma ** 2 / B
    dt = 1.0 / N

    a = np.full(N + 1, np.nan)
    w = np.full(N + 1, np.nan)
    b_scale = np.full(N + 1, np.nan)
    a[:-1] = 1.0 + dt * k[:-1]
    w[:-1] = a[:-1] ** 2 / (a[:-1] ** 2 + dt ** 2 * sigma ** 2 / B[:-1] ** 2)
    b_scale[:-1] = dt * (1.0 - k[:-1] * t[:-1])
    return t, B, A, k, tau2, a, w, b_scale


# ============================================
# Function: FM variance trace
# ============================================
def fm_variance_trace(sigma, N, d=1):
    '''
    Evaluate the FM covariance recursion s_{n+1} = (1 + dt k(t_n))^2 s_n.

    Parameters:
    - sigma (float): Target standard deviation
    - N (int): Outer step count
    - d (int): Dimension (only used by the KL)

    Returns:
    - VarianceTrace: TM columns filled with NaN
    '''
    _check_args(sigma, N)
    t, B, A, k, tau2, a, w, b_scale = _step_terms(sigma, N)
    s_fm = np.concatenate([[1.0], np.cumprod(a[:-1] ** 2)])
    nan = np.full(N + 1, np.nan)
    return VarianceTrace(
        sigma=float(sigma), N=int(N), S=None, d=int(d), t=t, B=B, A=A, k=k, tau2=tau2,
        a=a, b_scale=b_scale, w=w, s_fm=s_fm, s_tm=nan, r_fm=s_fm / B, r_tm=nan.copy(), c_S=nan.copy(),
    )


# ============================================
# Function: Inner-loop contraction c_S
# ============================================
def inner_contraction(tau, S):
    '''
    Variance contraction of S inner FM Euler steps toward N(m, tau^2 I).

    c_S = prod_{j<S} w_j(tau), i.e. the inner r_S. S=None means the exact inner
    sampler (c = 1). S=1 gives exactly 0 because the first Euler step from
    s=0 lands on the conditional mean.
    '''
    if S is None:
        return 1.0
    _check_args(tau, S, S)
    S = int(S)
    s = np.arange(S) / S
    B = variance_curve(s, tau)
    a = 1.0 + cross_covariance_curve(s, tau) / B / S
    w = a ** 2 / (a ** 2 + tau ** 2 / (S ** 2 * B ** 2))
    return float(np.prod(w))


# ============================================
# Function: TM variance trace
# ============================================
def tm_variance_trace(sigma, N, S, d=1):
    '''
    Evaluate both recursions with c_S taken per step from inner_contraction(tau(t_n), S).

    Step-by-step:
    1. Compute the FM terms a_n, w_n and s_fm.
    2. For each outer step evaluate c_S at the current posterior std tau(t_n).
    3. Accumulate s_tm and the ratios r = s / B(t_n).
    '''
    _check_args(sigma, N, S)
    fm = fm_variance_trace(sigma, N, d)
    dt = 1.0 / N

    c_S = np.full(N + 1, np.nan)
    s_tm = np.empty(N + 1)
    s_tm[0] = 1.0
    for n in range(N):
        c_S[n] = inner_contraction(np.sqrt(fm.tau2[n]), S)
        s_tm[n + 1] = fm.a[n] ** 2 * s_tm[n] + dt ** 2 * c_S[n] * fm.tau2[n]

    return VarianceTrace(
        sigma=fm.sigma, N=fm.N, S=None if S is None else int(S), d=int(d),
        t=fm.t, B=fm.B, A=fm.A, k=fm.k, tau2=fm.tau2, a=fm.a, b_scale=fm.b_scale, w=fm.w,
        s_fm=fm.s_fm, s_tm=s_tm, r_fm=fm.r_fm, r_tm=s_tm / fm.B, c_S=c_S,
    )


def isotropic_kl(ratio, d):
    '''
    d/2 (x - 1 - log x) for x = s / sigma^2; +inf at x = 0.

    Written as d/2 (e - log1p(e)) with e = x - 1 to keep precision near x = 1.
    '''
    ratio = float(ratio)
    if ratio < 0 or np.isnan(ratio):
        raise DomainError(f'variance ratio must be non-negative, got {ratio!r}')
    if ratio == 0:
        return float('inf')
    excess = ratio - 1.0
    return 0.5 * d * (excess - np.log1p(excess))


# ============================================
# Function: KL at t = 1 from a trace
# ============================================
def gaussian_kl_from_trace(trace, sigma=None, d=None):
    '''
    KL(N(mu, s_N I) || N(mu, sigma^2 I)) for both samplers.

    A collapsed FM sampler (s_N = 0, e.g. N=1) reports kl_fm = +inf.
    kl_tm is NaN for FM-only traces.
    '''
    sigma = trace.sigma if sigma is None else float(sigma)
    d = trace.d if d is None else int(d)
    s_fm = float(trace.s_fm[-1])
    s_tm = float(trace.s_tm[-1])
    kl_fm = isotropic_kl(s_fm / sigma ** 2, d)
    kl_tm = float('nan') if np.isnan(s_tm) else isotropic_kl(s_tm / sigma ** 2, d)
    return KLReport(kl_fm=kl_fm, kl_tm=kl_tm, d=d, s_fm_final=s_fm, s_tm_final=s_tm)


# ============================================
# Asymptotic constant P(sigma)
# ============================================
def contraction_constant(sigma):
    '''P(sigma) = sigma^2 * integral_0^1 B(t)^-2 dt, by adaptive quadrature.'''
    _check_args(sigma, 1)
    t_star = 1.0 / (1.0 + sigma ** 2)
    value, _ = integrate.quad(
        lambda t: variance_curve(t, sigma) ** -2, 0.0, 1.0,
        epsabs=1e-10, epsrel=1e-10, limit=200, points=[t_star],
    )
    return sigma ** 2 * value


def first_order_prediction(sigma, N):
    '''First-order FM contraction r_N ~ 1 - P(sigma)/N.'''
    return 1.0 - contraction_constant(sigma) / N


def first_order_contractions(trace):
    '''First-order c_S(n) ~ 1 - P(tau(t_n))/S for each outer step of a TM trace.'''
    if trace.S is None:
        return np.where(np.isnan(trace.c_S), np.nan, 1.0)
    out = np.full(trace.N + 1, np.nan)
    for n in range(trace.N):
        out[n] = 1.0 - contraction_constant(np.sqrt(trace.tau2[n])) / trace.S
    return out


def check_variance_identity(trace):
    '''Largest relative violation of B(t_{n+1}) = a_n^2 B(t_n) + dt^2 sigma^2 / B(t_n).'''
    dt = 1.0 / trace.N
    predicted = trace.a[:-1] ** 2 * trace.B[:-1] + dt ** 2 * trace.sigma ** 2 / trace.B[:-1]
    return float(np.max(np.abs(predicted - trace.B[1:]) / trace.B[1:]))
