"""Evaluation metrics: interaction detection, recovery scores, reports."""

from .interactions import (
    INTERACTION_TYPES,
    InteractionRecord,
    InteractionSet,
    detect_interactions,
)
from .report import evaluate_directories, evaluate_pair, evaluate_records, write_report
from .scores import (
    aar,
    align_global,
    diversity,
    ism,
    ito,
    kabsch,
    mean_ignoring_nan,
    rmsd_ca,
)

__all__ = [
    "INTERACTION_TYPES",
    "InteractionRecord",
    "InteractionSet",
    "aar",
    "align_global",
    "detect_interactions",
    "diversity",
    "evaluate_directories",
    "evaluate_pair",
    "evaluate_records",
    "ism",
    "ito",
    "kabsch",
    "mean_ignoring_nan",
    "rmsd_ca",
    "write_report",
]
