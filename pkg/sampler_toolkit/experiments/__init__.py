from sampler_toolkit.experiments.collect_artifacts import ArtifactBundle, ArtifactCollector
from sampler_toolkit.experiments.run_experiment import RUNNERS, run_experiment
