from sampler_toolkit.analysis.compute_batch_statistics import compute_batch_statistics
from sampler_toolkit.analysis.compute_variance_trace import (
    KLReport,
    VarianceTrace,
    contraction_constant,
    fm_variance_trace,
    gaussian_kl_from_trace,
    inner_contraction,
    tm_variance_trace,
)
from sampler_toolkit.analysis.fit_convergence_rate import RateFit, fit_rate
