from sampler_toolkit.targets.compute_path_coefficients import (
    PathCoefficients,
    path_coefficients,
    path_cross_covariance,
    path_variance,
)
from sampler_toolkit.targets.define_gaussian_targets import (
    GaussianMixtureTarget,
    Schedule,
    UnimodalGaussianTarget,
    as_mixture,
    circle_mixture,
    grid_mixture,
)
