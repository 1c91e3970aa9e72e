"""Character n-gram naive Bayes geolocalizer and constant baselines.

Regions come from a multinomial naive Bayes over character n-grams with
additive smoothing; coordinates are the predicted region's gold centroid.
"""

from __future__ import annotations

import gzip
import hashlib
import json
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from geobench.encoding import ParseStatus, Prediction, completion_for
from geobench.geo import global_centroid, gold_region_centroid, majority_region
from geobench.ingest import Record, serialize_tsv
from geobench.regions import region_sort_key

MODEL_FORMAT = "geobench-ngram-nb"
FORMAT_VERSION = 1
DEFAULT_N_RANGE = (2, 4)
DEFAULT_ALPHA = 1.0

PLACEHOLDER_RE = re.compile(r"\[[A-Z][A-Z_]*\]")
SENTINEL = "␀"
_WS = re.compile(r"\s+")


class ModelFormatError(ValueError):
    pass


def normalize_text(text: str) -> str:
    text = PLACEHOLDER_RE.sub(SENTINEL, text)
    text = _WS.sub(" ", text.lower()).strip()
    return f" {text} " if text else ""


def char_ngrams(text: str, n_range: tuple[int, int] = DEFAULT_N_RANGE) -> list[str]:
    norm = normalize_text(text)
    lo, hi = n_range
    return [norm[i:i + n] for n in range(lo, hi + 1) for i in range(len(norm) - n + 1)]


def fingerprint(records: Sequence[Record]) -> str:
    return hashlib.sha256(serialize_tsv(records).encode("utf-8")).hexdigest()


@dataclass
class NgramModel:
    n_range: tuple[int, int]
    alpha: float
    regions: list[str]
    doc_counts: np.ndarray  # (regions,)
    vocabulary: dict[str, int]
    counts: np.ndarray  # (regions, vocabulary)
    region_centroids: dict[str, tuple[float, float]]
    trained_on: str
    _tables: tuple | None = field(default=None, repr=False, compare=False)

    def _ensure_tables(self) -> tuple[np.ndarray, np.ndarray]:
        if self._tables is None:
            log_priors = np.log(self.doc_counts) - np.log(self.doc_counts.sum())
            smoothed = self.counts + self.alpha
            totals = smoothed.sum(axis=1, keepdims=True)
            self._tables = (log_priors, np.log(smoothed) - np.log(totals))
        return self._tables

    @property
    def log_priors(self) -> np.ndarray:
        return self._ensure_tables()[0]

    @property
    def log_likelihoods(self) -> np.ndarray:
        return self._ensure_tables()[1]

    def scores(self, text: str) -> np.ndarray:
        """Unnormalized log posterior per region, in ``self.regions`` order."""
        idx = [self.vocabulary[g] for g in char_ngrams(text, self.n_range) if g in self.vocabulary]
        log_priors, log_lik = self._ensure_tables()
        if not idx:
            return log_priors.copy()
        weights = np.bincount(np.asarray(idx), minlength=len(self.vocabulary)).astype(np.float64)
        return log_priors + log_lik @ weights

    def predict(self, text: str) -> Prediction:
        return predict(self, text)

    def to_dict(self) -> dict:
        inverse = sorted(self.vocabulary, key=self.vocabulary.__getitem__)
        ngram_counts = {}
        for i, region in enumerate(self.regions):
            row = self.counts[i]
            nz = np.flatnonzero(row)
            ngram_counts[region] = {inverse[j]: int(row[j]) for j in nz}
        return {
            "format": MODEL_FORMAT,
            "format_version": FORMAT_VERSION,
            "n_range": list(self.n_range),
            "alpha": self.alpha,
            "regions": self.regions,
            "doc_counts": [int(c) for c in self.doc_counts],
            "region_centroids": {r: list(c) for r, c in self.region_centroids.items()},
            "trained_on": self.trained_on,
            "ngram_counts": ngram_counts,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "NgramModel":
        if data.get("format") != MODEL_FORMAT:
            raise ModelFormatError(f"not a {MODEL_FORMAT} model file")
        if data.get("format_version") != FORMAT_VERSION:
            raise ModelFormatError(
                f"model format version {data.get('format_version')!r}, expected {FORMAT_VERSION}"
            )
        regions = list(data["regions"])
        vocab_list = sorted({g for row in data["ngram_counts"].values() for g in row})
        vocabulary = {g: i for i, g in enumerate(vocab_list)}
        counts = np.zeros((len(regions), len(vocabulary)), dtype=np.float64)
        for i, region in enumerate(regions):
            for g, c in data["ngram_counts"].get(region, {}).items():
                counts[i, vocabulary[g]] = c
        return cls(
            n_range=tuple(data["n_range"]),
            alpha=float(data["alpha"]),
            regions=regions,
            doc_counts=np.asarray(data["doc_counts"], dtype=np.float64),
            vocabulary=vocabulary,
            counts=counts,
            region_centroids={r: tuple(c) for r, c in data["region_centroids"].items()},
            trained_on=data["trained_on"],
        )

    def save(self, path: str | Path) -> None:
        payload = json.dumps(self.to_dict(), ensure_ascii=False, sort_keys=True)
        path = Path(path)
        if path.suffix == ".gz":
            # mtime=0 keeps the archive byte-identical across runs
            with open(path, "wb") as raw, gzip.GzipFile(fileobj=raw, mode="wb", mtime=0) as fh:
                fh.write(payload.encode("utf-8"))
        else:
            path.write_text(payload, encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "NgramModel":
        path = Path(path)
        opener = gzip.open if path.suffix == ".gz" else open
        with opener(path, "rt", encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ModelFormatError(f"{path}: not a JSON model file ({exc})") from None
        return cls.from_dict(data)


def train(
    records: Sequence[Record],
    n_range: tuple[int, int] = DEFAULT_N_RANGE,
    alpha: float = DEFAULT_ALPHA,
) -> NgramModel:
    if not records:
        raise ValueError("cannot train on an empty record list")
    if not alpha > 0:
        raise ValueError(f"smoothing alpha must be positive, got {alpha}")
    lo, hi = n_range
    if not 1 <= lo <= hi:
        raise ValueError(f"invalid n-gram range {n_range}")

    regions = sorted({r.region for r in records}, key=region_sort_key)
    per_region: dict[str, Counter] = {region: Counter() for region in regions}
    docs = Counter()
    for rec in records:
        per_region[rec.region].update(char_ngrams(rec.text, n_range))
        docs[rec.region] += 1
    vocab_list = sorted(set().union(*per_region.values()))
    vocabulary = {g: i for i, g in enumerate(vocab_list)}
    counts = np.zeros((len(regions), len(vocabulary)), dtype=np.float64)
    for i, region in enumerate(regions):
        for g, c in per_region[region].items():
            counts[i, vocabulary[g]] = c
    return NgramModel(
        n_range=(lo, hi),
        alpha=float(alpha),
        regions=regions,
        doc_counts=np.asarray([docs[r] for r in regions], dtype=np.float64),
        vocabulary=vocabulary,
        counts=counts,
        region_centroids={r: gold_region_centroid(records, r) for r in regions},
        trained_on=fingerprint(records),
    )


def predict(model: NgramModel, text: str) -> Prediction:
    """Argmax-posterior region (first in canonical order on ties) and its centroid."""
    scores = model.scores(text)
    region = model.regions[int(np.argmax(scores))]
    lat, lon = model.region_centroids[region]
    return Prediction(region, lat, lon, ParseStatus.CLEAN, completion_for(region, lat, lon))


@dataclass(frozen=True)
class ConstantPredictor:
    region: str
    lat: float
    lon: float

    def predict(self, text: str = "") -> Prediction:
        return Prediction(
            self.region, self.lat, self.lon, ParseStatus.CLEAN,
            completion_for(self.region, self.lat, self.lon),
        )


def majority_baseline(train_records: Sequence[Record]) -> ConstantPredictor:
    """Always the most frequent training region, at that region's centroid."""
    region = majority_region(train_records)
    return ConstantPredictor(region, *gold_region_centroid(train_records, region))


def global_centroid_baseline(train_records: Sequence[Record]) -> ConstantPredictor:
    """Majority region paired with the mean of all training coordinates."""
    region = majority_region(train_records)
    return ConstantPredictor(region, *global_centroid(train_records))
