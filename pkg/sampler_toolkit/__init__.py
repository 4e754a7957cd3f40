'''
sampler_toolkit

Reusable functions for comparing Flow Matching (FM) and Transition Matching (TM)
Euler samplers on Gaussian and Gaussian-mixture targets, using exact analytic
posteriors in place of learned networks.

Modules are grouped by function, one operation family per file:
- targets/     target distributions, schedules and path coefficients
- posterior/   exact conditional law of the difference latent V = X1 - X0
- samplers/    FM and nested TM Euler simulation
- analysis/    closed-form variance/KL recursions and rate fits
- divergence/  Gaussian KL, nearest-neighbour KL, cosine histograms
- bounds/      mixture-mode separation bounds and their numerical oracles
- cost/        modeled compute cost of FM/TM sampling
- io/, plot/   config loading, CSV/manifest output and SVG charts
- experiments/ config-driven runners behind the CLI
'''

__version__ = '0.1.0'
