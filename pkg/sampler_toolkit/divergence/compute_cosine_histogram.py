'''
compute_cosine_histogram.py

Histogram of cosine similarities between posterior draws of V and the
conditional mean E[V | X_t = x].

Mass near 1 means the draws point along the mean (the posterior has collapsed
toward it); a broad histogram means TM's stochastic draws differ from FM's
deterministic velocity.
'''

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import pandas as pd

from sampler_toolkit.errors import DomainError

DEFAULT_BINS = 80
HIGH_SIMILARITY = 0.9


@dataclass(frozen=True, eq=False)
class CosSimHistogram:
    t: float
    bin_edges: np.ndarray
    counts: np.ndarray
    M: int
    excluded: int
    fraction_high: float
    fraction_high_se: float

    def to_frame(self):
        return pd.DataFrame({
            't': self.t,
            'bin_left': self.bin_edges[:-1],
            'bin_right': self.bin_edges[1:],
            'count': self.counts,
        })


# ============================================
# Function: Cosine-similarity histogram
# ============================================
def cosine_similarity_histogram(draws, reference, bins=DEFAULT_BINS, t=float('nan'),
                                threshold=HIGH_SIMILARITY):
    '''
    Bin cos(V_m, reference) over [-1, 1].

    Parameters:
    - draws (np.ndarray): (M, d) posterior draws
    - reference (array-like): Conditional mean vector, nonzero
    - bins (int): Number of uniform bins
    - t (float): Time the draws belong to (carried into the CSV)
    - threshold (float): Similarity level for fraction_high

    Returns:
    - CosSimHistogram: counts of the included draws; zero-norm draws are
      excluded and counted, so counts.sum() + excluded == M
    '''
    draws = np.asarray(draws, dtype=float)
    reference = np.asarray(reference, dtype=float)
    if draws.ndim != 2 or draws.shape[0] < 1:
        raise DomainError(f'draws must be a non-empty (M, d) array, got {draws.shape}')
    ref_norm = np.linalg.norm(reference)
    if ref_norm == 0:
        raise DomainError('reference vector has zero norm')

    norms = np.linalg.norm(draws, axis=1)
    keep = norms > 0
    cosines = np.clip(draws[keep] @ reference / (norms[keep] * ref_norm), -1.0, 1.0)
    counts, edges = np.histogram(cosines, bins=bins, range=(-1.0, 1.0))

    n_kept = int(keep.sum())
    fraction = float(np.mean(cosines > threshold)) if n_kept else float('nan')
    fraction_se = float(np.sqrt(fraction * (1 - fraction) / n_kept)) if n_kept else float('nan')

    return CosSimHistogram(
        t=float(t),
        bin_edges=edges,
        counts=counts,
        M=int(draws.shape[0]),
        excluded=int((~keep).sum()),
        fraction_high=fraction,
        fraction_high_se=fraction_se,
    )
