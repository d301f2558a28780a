"""Encoder fine-tuning over medmine interchange files.

Trains either a small built-in transformer or a pretrained encoder on
tweet classification or span tagging, then exports predictions in the
evaluator's TSV format, projected back to original-text coordinates
through offset sidecars. All coupling to the corpus tooling is through
files.
"""

__version__ = "0.1.0"

from medmine_adapter.data import read_interchange, read_offset_sidecar
from medmine_adapter.errors import (
    AdapterError,
    CheckpointError,
    FormatError,
    ResourceError,
)
from medmine_adapter.predict import load_checkpoint, predict
from medmine_adapter.train import MODES, TrainSpec, train

__all__ = [
    "AdapterError",
    "CheckpointError",
    "FormatError",
    "MODES",
    "ResourceError",
    "TrainSpec",
    "__version__",
    "load_checkpoint",
    "predict",
    "read_interchange",
    "read_offset_sidecar",
    "train",
]
