from sampler_toolkit.posterior.compute_posterior import (
    MixturePosterior,
    NearestModeInfo,
    UnimodalPosterior,
    mixture_posterior,
    nearest_mode,
    responsibilities,
    unimodal_posterior,
)
from sampler_toolkit.posterior.sample_posterior import sample_posterior
