from sampler_toolkit.samplers.derive_rng_streams import BLOCK_SIZE, SeedInfo
from sampler_toolkit.samplers.run_euler_samplers import (
    SampleBatch,
    SamplerKind,
    SamplerRun,
    fm_step,
    run_sampler,
    tm_step,
)
