"""Alignment error metric, synthetic generators and the retrieval benchmark."""
from .metrics import alignment_error, path_dist
from .synth import (
    ETA_GRID,
    SynthSpec,
    gen_class_dataset,
    gen_multimodal,
    gen_nongaussian,
    generate,
)
