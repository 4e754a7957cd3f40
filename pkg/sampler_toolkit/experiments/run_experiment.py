'''
run_experiment.py

Dispatch a validated ExperimentConfig to its runner and commit the outputs.

Every run ends with manifest.json. When a runner fails, the manifest is still
written with status 'incomplete' and the artifacts produced so far, then the
error is re-raised for the CLI to map to an exit code.
'''

from __future__ import annotations

import logging
import time

from sampler_toolkit.experiments.collect_artifacts import ArtifactBundle, ArtifactCollector
from sampler_toolkit.experiments.run_bounds_check import run_bounds_check
from sampler_toolkit.experiments.run_cost_model import run_cost_model
from sampler_toolkit.experiments.run_mixture_kl import run_mixture_kl
from sampler_toolkit.experiments.run_posterior_hist import run_posterior_hist
from sampler_toolkit.experiments.run_unimodal_kl import run_unimodal_kl
from sampler_toolkit.io.write_run_manifest import write_run_manifest

logger = logging.getLogger(__name__)

RUNNERS = {
    'unimodal_kl': run_unimodal_kl,
    'mixture_kl': run_mixture_kl,
    'posterior_hist': run_posterior_hist,
    'bounds_check': run_bounds_check,
    'cost_model': run_cost_model,
}


# ============================================
# Function: Run one experiment
# ============================================
def run_experiment(config):
    '''
    Run the experiment named by config.kind and write CSVs, plots and manifest.

    Parameters:
    - config (ExperimentConfig): Validated configuration

    Returns:
    - ArtifactBundle: output directory, tables, plots and manifest path
    '''
    collector = ArtifactCollector(config.out_dir)
    runner = RUNNERS[config.kind]
    logger.info('Starting %s (seed=%d, threads=%d) -> %s', config.kind, config.seed, config.threads, config.out_dir)
    started = time.perf_counter()

    try:
        runner(config, collector)
    except Exception as e:
        write_run_manifest(config.out_dir, config, collector.artifacts, collector.provenance,
                           status='incomplete', error=f'{type(e).__name__}: {e}')
        logger.error('%s failed after %.1f s: %s', config.kind, time.perf_counter() - started, e)
        raise

    manifest = write_run_manifest(config.out_dir, config, collector.artifacts, collector.provenance)
    logger.info('Finished %s in %.1f s', config.kind, time.perf_counter() - started)
    return ArtifactBundle(config.out_dir, dict(collector.tables), dict(collector.plots), manifest)
