'''
run_euler_samplers.py

Monte Carlo simulation of the FM Euler sampler and the nested TM sampler,
with exact posterior oracles standing in for the learned networks.

FM step:  x_{n+1} = x_n + dt * E[V | X_{t_n} = x_n]
TM step:  x_{n+1} = x_n + dt * V_n, where V_n is either an exact posterior draw
          (inner_mode='exact') or the output of S inner Euler steps of the FM
          problem that transports N(0, I) to p(V | X_{t_n} = x_n) (inner_mode='euler').

The inner velocity is the conditional mean of that inner problem, i.e. the
posterior formulas applied again with the posterior as target. For mixture
targets the inner target is itself a mixture with per-trajectory weights.
'''

from __future__ import annotations

import logging
from dataclasses import dataclass, replace

import numpy as np
from joblib import Parallel, delayed
from scipy.special import logsumexp

from sampler_toolkit.errors import DomainError
from sampler_toolkit.posterior.compute_posterior import (
    component_means_batch,
    component_path_terms,
    log_responsibilities_batch,
    posterior_mean_batch,
)
from sampler_toolkit.posterior.sample_posterior import sample_posterior_batch
from sampler_toolkit.samplers.derive_rng_streams import (
    BLOCK_SIZE,
    SeedInfo,
    StreamPurpose,
    block_slices,
    initial_noise,
    stream,
)
from sampler_toolkit.targets.compute_path_coefficients import (
    cross_covariance_curve,
    path_coefficients,
    variance_curve,
)
from sampler_toolkit.targets.define_gaussian_targets import (
    GaussianMixtureTarget,
    UnimodalGaussianTarget,
)

logger = logging.getLogger(__name__)

INNER_MODES = ('euler', 'exact')


# ============================================
# Types
# ============================================
@dataclass(frozen=True, eq=False)
class SampleBatch:
    '''
    States of M trajectories at outer step t_index.

    Parameters:
    - t_index (int): Outer step n (time t_n = n/N)
    - states (np.ndarray): (M, d) array
    - seed_info (SeedInfo): Master seed and block layout
    '''
    t_index: int
    states: np.ndarray
    seed_info: SeedInfo

    def __post_init__(self):
        if self.states.ndim != 2 or self.states.shape[0] < 1:
            raise DomainError(f'states must be a non-empty (M, d) array, got {self.states.shape}')
        if not np.all(np.isfinite(self.states)):
            raise DomainError(f'non-finite states at step {self.t_index}')

    @property
    def size(self):
        return int(self.states.shape[0])


@dataclass(frozen=True)
class SamplerKind:
    '''
    Sampler selector: FM, or TM with inner_mode 'euler' (S steps) or 'exact'.

    When inner_steps is None an euler TM sampler takes S from the Schedule.
    '''
    method: str = 'fm'
    inner_mode: str = 'euler'
    inner_steps: int | None = None

    def __post_init__(self):
        if self.method not in ('fm', 'tm'):
            raise DomainError(f"method must be 'fm' or 'tm', got {self.method!r}")
        if self.inner_mode not in INNER_MODES:
            raise DomainError(f'inner_mode must be one of {INNER_MODES}, got {self.inner_mode!r}')
        if self.inner_steps is not None and self.inner_steps < 1:
            raise DomainError(f'inner_steps must be >= 1, got {self.inner_steps}')

    @classmethod
    def fm(cls):
        return cls('fm')

    @classmethod
    def tm(cls, inner_steps=None, inner_mode='euler'):
        return cls('tm', inner_mode, inner_steps)

    @property
    def is_tm(self):
        return self.method == 'tm'

    def resolve_inner_steps(self, schedule):
        if self.inner_steps is not None and schedule.n_inner not in (1, self.inner_steps):
            raise DomainError(
                f'inner step count {self.inner_steps} disagrees with schedule S={schedule.n_inner}'
            )
        return self.inner_steps if self.inner_steps is not None else schedule.n_inner

    def label(self, schedule=None):
        if not self.is_tm:
            return 'FM'
        if self.inner_mode == 'exact':
            return 'TM(exact)'
        steps = self.inner_steps if schedule is None else self.resolve_inner_steps(schedule)
        return f'TM(S={steps})'


@dataclass(frozen=True, eq=False)
class SamplerRun:
    final: SampleBatch
    trajectory: list | None = None


def _simplify(target):
    # a one-component mixture runs through the unimodal code path
    if isinstance(target, GaussianMixtureTarget) and target.n_components == 1:
        return target.component(0)
    return target


def _check_step(batch, schedule):
    if batch.t_index >= schedule.n_outer:
        raise DomainError(f'cannot step past t=1 (step {batch.t_index} of {schedule.n_outer})')
    if batch.t_index < 0:
        raise DomainError(f'negative step index {batch.t_index}')


# ============================================
# Function: FM Euler step
# ============================================
def fm_step(target, batch, schedule):
    '''
    Advance every state by dt times the exact conditional-mean velocity.

    Parameters:
    - target (UnimodalGaussianTarget or GaussianMixtureTarget): Target p1
    - batch (SampleBatch): States at t_n < 1
    - schedule (Schedule): Outer grid

    Returns:
    - SampleBatch: States at t_{n+1}
    '''
    _check_step(batch, schedule)
    target = _simplify(target)
    t = schedule.time(batch.t_index)
    velocity = posterior_mean_batch(target, t, batch.states)
    return replace(batch, t_index=batch.t_index + 1, states=batch.states + schedule.dt * velocity)


# ============================================
# Inner FM problem: N(0, I) -> p(V | X_t = x)
# ============================================
def _inner_euler_unimodal(posterior_mean, tau2, y, n_inner):
    ds = 1.0 / n_inner
    for j in range(n_inner):
        s = j / n_inner
        k_inner = cross_covariance_curve(s, np.sqrt(tau2)) / variance_curve(s, np.sqrt(tau2))
        y = y + ds * (posterior_mean + k_inner * (y - s * posterior_mean))
    return y


def _inner_euler_mixture(log_w, means, tau2, y, n_inner):
    '''
    Inner Euler loop whose target is sum_j w_j N(m_j, tau2_j I), one per row.

    log_w: (M, K), means: (M, K, d), tau2: (K,)
    '''
    d = y.shape[1]
    tau = np.sqrt(tau2)
    ds = 1.0 / n_inner
    for j in range(n_inner):
        s = j / n_inner
        B_inner = variance_curve(s, tau)
        k_inner = cross_covariance_curve(s, tau) / B_inner
        diff = y[:, None, :] - s * means
        sq = np.einsum('mkd,mkd->mk', diff, diff)
        logits = log_w - 0.5 * d * np.log(B_inner) - sq / (2.0 * B_inner)
        rho = np.exp(logits - logsumexp(logits, axis=1, keepdims=True))
        velocity = np.einsum('mk,mkd->md', rho, means + k_inner[None, :, None] * diff)
        y = y + ds * velocity
    return y


def inner_difference_latent(target, t, states, y0, n_inner):
    '''
    Run S inner Euler steps from y0 toward the posterior of V given X_t = states.

    Returns the final inner iterate V_{n,S}.
    '''
    target = _simplify(target)
    if isinstance(target, UnimodalGaussianTarget):
        coeffs = path_coefficients(t, target.sigma)
        posterior_mean = target.mu + coeffs.k * (states - target.mu * coeffs.t)
        return _inner_euler_unimodal(posterior_mean, coeffs.tau2, y0, n_inner)

    log_w = log_responsibilities_batch(target, t, states)
    means = component_means_batch(target, t, states)
    _, _, tau2 = component_path_terms(target, t)
    return _inner_euler_mixture(log_w, means, tau2, y0, n_inner)


# ============================================
# Function: TM step
# ============================================
def tm_step(target, batch, schedule, kind):
    '''
    Advance every state by dt times a sampled difference latent.

    Inner noise (euler) or posterior draws (exact) come from per-block streams
    keyed by (master_seed, block_id, outer_step, 0, purpose).
    '''
    _check_step(batch, schedule)
    if not kind.is_tm:
        raise DomainError('tm_step requires a TM sampler kind')
    target = _simplify(target)
    n = batch.t_index
    t = schedule.time(n)
    seed = batch.seed_info.master_seed
    d = batch.states.shape[1]

    latent = np.empty_like(batch.states)
    if kind.inner_mode == 'exact':
        for block_id, rows in block_slices(batch.seed_info, batch.size):
            rng = stream(seed, block_id, n, 0, StreamPurpose.POSTERIOR_DRAW)
            latent[rows] = sample_posterior_batch(target, t, batch.states[rows], rng)
    else:
        n_inner = kind.resolve_inner_steps(schedule)
        for block_id, rows in block_slices(batch.seed_info, batch.size):
            rng = stream(seed, block_id, n, 0, StreamPurpose.INNER_NOISE)
            y0 = rng.standard_normal((rows.stop - rows.start, d))
            latent[rows] = inner_difference_latent(target, t, batch.states[rows], y0, n_inner)

    return replace(batch, t_index=n + 1, states=batch.states + schedule.dt * latent)


def _simulate(target, kind, schedule, batch, record_trajectory):
    snapshots = [batch] if record_trajectory else None
    for _ in range(schedule.n_outer):
        batch = tm_step(target, batch, schedule, kind) if kind.is_tm else fm_step(target, batch, schedule)
        if record_trajectory:
            snapshots.append(batch)
    return batch, snapshots


# ============================================
# Function: Full sampler run
# ============================================
def run_sampler(target, kind, schedule, M, seed, record_trajectory=False, n_jobs=1,
                initial_states=None, block_size=BLOCK_SIZE):
    '''
    Simulate M trajectories from t=0 to t=1.

    Parameters:
    - target: UnimodalGaussianTarget or GaussianMixtureTarget
    - kind (SamplerKind): FM or TM
    - schedule (Schedule): Outer grid (and inner S when kind leaves it unset)
    - M (int): Number of trajectories
    - seed (int): Master seed
    - record_trajectory (bool): Keep the batch at every t_n
    - n_jobs (int): joblib workers over block chunks; output does not depend on it
    - initial_states (np.ndarray): Optional fixed (M, d) source batch

    Returns:
    - SamplerRun: final batch at t=1 and optional list of N+1 batches
    '''
    if M < 1:
        raise DomainError(f'M must be >= 1, got {M}')
    if kind.is_tm and kind.inner_mode == 'euler':
        kind.resolve_inner_steps(schedule)

    seed_info = SeedInfo(int(seed), 0, block_size)
    if initial_states is None:
        states = initial_noise(seed_info, M, target.d)
    else:
        states = np.array(initial_states, dtype=float)
        if states.shape != (M, target.d):
            raise DomainError(f'initial_states must have shape {(M, target.d)}, got {states.shape}')

    n_blocks = -(-M // block_size)
    if n_jobs is not None and n_jobs < 0:
        n_chunks = n_blocks
    else:
        n_chunks = max(1, min(int(n_jobs or 1), n_blocks))
    bounds = np.linspace(0, n_blocks, n_chunks + 1).round().astype(int) * block_size
    chunks = [
        SampleBatch(0, states[lo:min(hi, M)], seed_info.shifted(lo))
        for lo, hi in zip(bounds[:-1], bounds[1:]) if lo < M
    ]
    logger.debug('running %s with N=%d on %d trajectories in %d chunk(s)',
                 kind.label(schedule), schedule.n_outer, M, len(chunks))

    if len(chunks) == 1:
        results = [_simulate(target, kind, schedule, chunks[0], record_trajectory)]
    else:
        results = Parallel(n_jobs=len(chunks), prefer='threads')(
            delayed(_simulate)(target, kind, schedule, chunk, record_trajectory) for chunk in chunks
        )

    final = SampleBatch(schedule.n_outer, np.concatenate([r[0].states for r in results]), seed_info)
    trajectory = None
    if record_trajectory:
        trajectory = [
            SampleBatch(n, np.concatenate([r[1][n].states for r in results]), seed_info)
            for n in range(schedule.n_outer + 1)
        ]
    return SamplerRun(final=final, trajectory=trajectory)
