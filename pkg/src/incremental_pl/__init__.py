"""Incremental pseudo-labeling for black-box domain adaptation on numpy MLPs."""

from .datagen import DomainPair, LabeledSet, ShiftSpec, TargetSet, make_domain_pair
from .nn import MlpModel, forward, init_mlp
from .pipeline import (ConfidencePools, Hyperparams, RunResult, SoftPredictionSet,
                       export_predictions, load_predictions, profile, run_full,
                       soft_predictions, train_source)

__all__ = [
    "ConfidencePools", "DomainPair", "Hyperparams", "LabeledSet", "MlpModel", "RunResult",
    "ShiftSpec", "SoftPredictionSet", "TargetSet", "export_predictions", "forward",
    "init_mlp", "load_predictions", "make_domain_pair", "profile", "run_full",
    "soft_predictions", "train_source",
]

__version__ = "0.1.0"
