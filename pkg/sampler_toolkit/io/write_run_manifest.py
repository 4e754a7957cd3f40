'''
write_run_manifest.py

Write manifest.json next to the outputs of an experiment run.

The manifest is written last and acts as the commit marker of the run: it
echoes the resolved config, the library versions, every artifact written,
the operation each CSV column comes from and the status ('complete' or
'incomplete' when the run aborted).
'''

import json
import logging
import os
import platform
from importlib import metadata

import sampler_toolkit
from sampler_toolkit.samplers.derive_rng_streams import BLOCK_SIZE

logger = logging.getLogger(__name__)

MANIFEST_NAME = 'manifest.json'
VERSIONED_PACKAGES = ('numpy', 'pandas', 'scipy', 'scikit-learn', 'matplotlib', 'joblib')


def library_versions():
    versions = {'sampler_toolkit': sampler_toolkit.__version__, 'python': platform.python_version()}
    for name in VERSIONED_PACKAGES:
        try:
            versions[name] = metadata.version(name)
        except metadata.PackageNotFoundError:
            versions[name] = None
    return versions


def _json_default(value):
    # numpy scalars and arrays inside the resolved options
    if hasattr(value, 'tolist'):
        return value.tolist()
    return str(value)


# ============================================
# Function: Save run manifest
# ============================================
def write_run_manifest(out_dir, config, artifacts, provenance, status='complete', error=None):
    '''
    Save the manifest for one experiment run.

    Parameters:
    - out_dir (str): Output directory of the run
    - config (ExperimentConfig): Resolved configuration
    - artifacts (list): Relative paths of the files written, in write order
    - provenance (dict): CSV name -> {column: operation}
    - status (str): 'complete' or 'incomplete'
    - error (str): Failure message for incomplete runs

    Returns:
    - str: path of the manifest file
    '''
    manifest = {
        'status': status,
        'experiment': config.kind,
        'config': config.resolved(),
        'versions': library_versions(),
        'rng_block_size': BLOCK_SIZE,
        'artifacts': artifacts,
        'provenance': provenance,
    }
    if error is not None:
        manifest['error'] = error

    path = os.path.join(out_dir, MANIFEST_NAME)
    try:
        os.makedirs(out_dir, exist_ok=True)
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(manifest, f, indent=2, default=_json_default)
    except OSError as e:
        logger.error('Failed to write manifest %s: %s', path, e)
        raise
    logger.info('Manifest (%s) written to %s', status, path)
    return path
