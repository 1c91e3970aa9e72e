"""Benchmark harness for geolocating non-standard Italian social-media posts."""

from geobench.regions import REGIONS, normalize_region
from geobench.ingest import Record, parse_tsv, merge_subtasks, compute_stats
from geobench.encoding import (
    EncodedExample,
    Fallback,
    Prediction,
    TrainingManifest,
    encode_example,
    parse_generation,
)
from geobench.metrics import (
    avg_distance_error,
    confusion,
    evaluate,
    f1_macro,
    f1_micro,
    haversine_km,
)

__version__ = "0.1.0"

__all__ = [
    "REGIONS",
    "normalize_region",
    "Record",
    "parse_tsv",
    "merge_subtasks",
    "compute_stats",
    "EncodedExample",
    "Fallback",
    "Prediction",
    "TrainingManifest",
    "encode_example",
    "parse_generation",
    "avg_distance_error",
    "confusion",
    "evaluate",
    "f1_macro",
    "f1_micro",
    "haversine_km",
]
