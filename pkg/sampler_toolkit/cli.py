'''
cli.py

Command line entry point.

    python -m sampler_toolkit unimodal-kl --config case_studies/unimodal_kl/config.json --out runs/unimodal_kl

Subcommands: unimodal-kl, mixture-kl, posterior-hist, bounds-check, cost-model.
Exit codes: 0 success, 2 configuration error, 3 runtime or numerical error.
'''

import argparse
import logging
import sys

from sampler_toolkit.errors import ConfigError, ToolkitError
from sampler_toolkit.experiments.run_experiment import run_experiment
from sampler_toolkit.io.load_experiment_config import load_experiment_config

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3

SUBCOMMANDS = {
    'unimodal-kl': ('unimodal_kl', 'FM/TM KL on a unimodal Gaussian target'),
    'mixture-kl': ('mixture_kl', 'FM/TM KL on Gaussian mixture targets'),
    'posterior-hist': ('posterior_hist', 'cosine-similarity histograms of posterior draws'),
    'bounds-check': ('bounds_check', 'mixture bounds against numerical oracles'),
    'cost-model': ('cost_model', 'modeled compute cost of a sampler grid'),
}


def build_parser():
    parser = argparse.ArgumentParser(prog='sampler_toolkit', description='FM / TM sampler experiments')
    subparsers = parser.add_subparsers(dest='command', required=True)
    for name, (_, help_text) in SUBCOMMANDS.items():
        sub = subparsers.add_parser(name, help=help_text)
        sub.add_argument('--config', required=True, help='Path to the JSON experiment config')
        sub.add_argument('--out', default=None, help='Output directory (overrides out_dir)')
        sub.add_argument('--seed', type=int, default=None, help='Master seed override')
        sub.add_argument('--threads', type=int, default=None, help='Worker cap (-1 for all cores)')
        sub.add_argument('--verbose', action='store_true', help='Log at DEBUG level')
    return parser


# ============================================
# Function: CLI main
# ============================================
def main(argv=None):
    '''
    Parse arguments, run the experiment and return the exit code.
    '''
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format='%(asctime)s - %(levelname)s - %(message)s')
    kind = SUBCOMMANDS[args.command][0]

    try:
        config = load_experiment_config(
            args.config, {'seed': args.seed, 'threads': args.threads, 'out_dir': args.out}, expected_kind=kind
        )
    except ConfigError as e:
        logger.error('Configuration error: %s', e)
        return EXIT_CONFIG

    try:
        bundle = run_experiment(config)
    except ConfigError as e:
        logger.error('Configuration error: %s', e)
        return EXIT_CONFIG
    except (ToolkitError, ArithmeticError) as e:
        logger.error('Run failed: %s', e)
        return EXIT_RUNTIME
    except (OSError, ValueError) as e:
        # unwritable out_dir, full disk, or a ValueError raised by numpy/pandas
        logger.error('Run failed (%s): %s', type(e).__name__, e)
        return EXIT_RUNTIME

    logger.info('Wrote %d tables and %d plots to %s', len(bundle.tables), len(bundle.plots), bundle.out_dir)
    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
