from sampler_toolkit.divergence.compute_cosine_histogram import CosSimHistogram, cosine_similarity_histogram
from sampler_toolkit.divergence.compute_gaussian_kl import KLEstimate, gaussian_kl, gaussian_kl_full
from sampler_toolkit.divergence.estimate_knn_kl import knn_kl
