from sampler_toolkit.io.load_experiment_config import (
    ExperimentConfig,
    SamplerGridEntry,
    TargetSpec,
    load_experiment_config,
    parse_experiment_config,
)
from sampler_toolkit.io.write_result_table import write_result_table
from sampler_toolkit.io.write_run_manifest import write_run_manifest
