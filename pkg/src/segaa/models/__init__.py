"""Model families, cascade wiring, and the checkpoint container."""

from .build import (
    CASCADE_ORDERS,
    FEATURE_WIDTH,
    MODEL_KINDS,
    Cascade,
    CascadeSpec,
    architecture,
    build_cascade,
    build_model,
    build_network,
    stage_widths,
    trunk_shape_trace,
    upstream_width,
)
from .checkpoint import (
    MAGIC,
    CheckpointBundle,
    CheckpointError,
    load_checkpoint,
    save_checkpoint,
)
from .network import Head, Network

__all__ = [
    "CASCADE_ORDERS",
    "FEATURE_WIDTH",
    "MAGIC",
    "MODEL_KINDS",
    "Cascade",
    "CascadeSpec",
    "CheckpointBundle",
    "CheckpointError",
    "Head",
    "Network",
    "architecture",
    "build_cascade",
    "build_model",
    "build_network",
    "load_checkpoint",
    "save_checkpoint",
    "stage_widths",
    "trunk_shape_trace",
    "upstream_width",
]
