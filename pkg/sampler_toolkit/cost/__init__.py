from sampler_toolkit.cost.compute_cost_model import (
    IMAGE_TASK,
    PRESETS,
    VIDEO_TASK,
    ComputeCostModel,
    cost,
    cost_model_from_spec,
    delta_inner_steps,
    matched_fm_steps,
)
