from sampler_toolkit.bounds.compare_mixture_kl import KLGapReport, kl_gap_decomposition, mixture_kl_comparison
from sampler_toolkit.bounds.compute_good_region_bounds import (
    GoodRegionSpec,
    attraction_failure_bound,
    good_region_escape_bound,
    good_region_membership,
    mixture_density_correction,
    responsibility_dominance_bound,
    zeta_bound,
)
from sampler_toolkit.bounds.compute_tv_bounds import (
    BoundValue,
    GridSpec,
    TVBoundReport,
    brute_force_tv,
    cor2_bound,
    posterior_tv,
    tv_bound,
)
