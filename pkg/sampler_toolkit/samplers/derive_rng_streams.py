'''
derive_rng_streams.py

Counter-based random streams for reproducible parallel sampling.

Trajectory ids 0..M-1 are cut into fixed blocks of BLOCK_SIZE rows. Every
random draw of a block at a given (outer step, inner step, purpose) comes from
its own numpy Generator seeded by

    SeedSequence(master_seed, spawn_key=(block_id, outer_step, inner_step, purpose))

so the draws never depend on how blocks are distributed across workers.

Streams are keyed by block, not by trajectory, so the samples depend on the
block size: a run is reproducible for a fixed (master_seed, block_size), and
changing BLOCK_SIZE (or run_sampler's block_size) changes the draws of every
trajectory outside the smaller first block. SeedInfo records block_size and the
run manifest echoes it. Keying by trajectory id would remove that dependence at
the cost of one Generator per row.
'''

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from sampler_toolkit.errors import DomainError

BLOCK_SIZE = 8192


class StreamPurpose(IntEnum):
    INITIAL_NOISE = 0
    POSTERIOR_DRAW = 1
    INNER_NOISE = 2


@dataclass(frozen=True)
class SeedInfo:
    '''
    Seeding metadata carried by a SampleBatch.

    first_trajectory is the global id of row 0 and is always a multiple of
    block_size, so sub-batches map onto whole blocks.
    '''
    master_seed: int
    first_trajectory: int = 0
    block_size: int = BLOCK_SIZE

    def __post_init__(self):
        if self.master_seed < 0:
            raise DomainError(f'master seed must be non-negative, got {self.master_seed}')
        if self.block_size < 1 or self.first_trajectory % self.block_size:
            raise DomainError('first_trajectory must be a multiple of a positive block_size')

    def shifted(self, rows):
        return SeedInfo(self.master_seed, self.first_trajectory + rows, self.block_size)


def stream(master_seed, block_id, outer_step, inner_step, purpose):
    '''Generator for one (block, outer step, inner step, purpose) key.'''
    seq = np.random.SeedSequence(
        entropy=int(master_seed),
        spawn_key=(int(block_id), int(outer_step), int(inner_step), int(purpose)),
    )
    return np.random.default_rng(seq)


def block_slices(seed_info, n_rows):
    '''Yield (block_id, slice) pairs covering rows 0..n_rows-1 of a batch.'''
    first_block = seed_info.first_trajectory // seed_info.block_size
    for offset in range(0, n_rows, seed_info.block_size):
        stop = min(offset + seed_info.block_size, n_rows)
        yield first_block + offset // seed_info.block_size, slice(offset, stop)


def initial_noise(seed_info, n_rows, d):
    '''Source draws X0 ~ N(0, I_d), identical for FM and TM runs with the same seed.'''
    out = np.empty((n_rows, d))
    for block_id, rows in block_slices(seed_info, n_rows):
        rng = stream(seed_info.master_seed, block_id, 0, 0, StreamPurpose.INITIAL_NOISE)
        out[rows] = rng.standard_normal((rows.stop - rows.start, d))
    return out
