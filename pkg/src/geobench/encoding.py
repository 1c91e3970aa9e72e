"""Instruction encoding of records and decoding of free-form generations.

A record becomes a prompt/completion pair::

    <instruction> <post text>\\n
    [regione] <region> [geo] <lat> <lon>

Decoding is total: any string yields a :class:`Prediction`, falling back to a
configured default when the markers or numbers cannot be recovered.
"""

from __future__ import annotations

import enum
import json
import logging
import math
import re
from dataclasses import asdict, dataclass
from typing import Iterable, Sequence, TextIO

from geobench.ingest import Record, format_coord
from geobench.regions import (
    REGIONS,
    UnknownRegionError,
    normalize_region,
    resolve_region_loose,
)

log = logging.getLogger(__name__)

DEFAULT_INSTRUCTION = "Indica la regione e le coordinate di provenienza del seguente post:"
REGION_MARKER = "[regione]"
GEO_MARKER = "[geo]"


class ParseStatus(str, enum.Enum):
    CLEAN = "clean"
    REPAIRED = "repaired"
    FALLBACK = "fallback"


@dataclass(frozen=True)
class EncodedExample:
    prompt: str
    completion: str

    def to_dict(self) -> dict[str, str]:
        return {"prompt": self.prompt, "completion": self.completion}


@dataclass(frozen=True)
class Fallback:
    """Prediction used when a generation cannot be decoded."""

    region: str
    lat: float
    lon: float

    def __post_init__(self):
        if self.region not in REGIONS:
            raise UnknownRegionError(f"unknown fallback region {self.region!r}")
        if not (math.isfinite(self.lat) and math.isfinite(self.lon)):
            raise ValueError("fallback coordinates must be finite")


# Rome; used only when no training split is available to derive a fallback.
DEFAULT_FALLBACK = Fallback("Lazio", 41.8933, 12.4828)


def majority_fallback(train: Sequence[Record]) -> Fallback:
    """Most frequent training region and its gold-coordinate centroid."""
    from geobench.geo import gold_region_centroid, majority_region

    region = majority_region(train)
    lat, lon = gold_region_centroid(train, region)
    return Fallback(region, lat, lon)


@dataclass(frozen=True)
class Prediction:
    region: str
    lat: float
    lon: float
    parse_status: ParseStatus = ParseStatus.CLEAN
    raw: str = ""

    @property
    def coords(self) -> tuple[float, float]:
        return (self.lat, self.lon)

    @classmethod
    def from_fallback(cls, fallback: Fallback, raw: str) -> "Prediction":
        return cls(fallback.region, fallback.lat, fallback.lon, ParseStatus.FALLBACK, raw)


def completion_for(region: str, lat: float, lon: float) -> str:
    return f"{REGION_MARKER} {region} {GEO_MARKER} {format_coord(lat)} {format_coord(lon)}"


def encode_example(record: Record, instruction: str = DEFAULT_INSTRUCTION) -> EncodedExample:
    if not instruction:
        raise ValueError("instruction must be nonempty")
    if not record.text:
        log.warning("record %s has empty text", record.id)
    prompt = f"{instruction} {record.text}\n"
    completion = completion_for(record.region, record.lat, record.lon)
    return EncodedExample(prompt, completion)


_NUM = r"[-+]?\d+(?:\.\d+)?"
_CLEAN_RE = re.compile(
    r"\s*\[regione\] (?P<region>.+?) \[geo\] (?P<lat>" + _NUM + r") (?P<lon>" + _NUM + r")\s*",
    re.DOTALL,
)
_REGION_MARK_RE = re.compile(r"\[\s*regione\s*\]", re.IGNORECASE)
_GEO_MARK_RE = re.compile(r"\[\s*geo\s*\]", re.IGNORECASE)
_LEAD = r"[\s:=(\[{\"']*"
_COMMA_PAIR_RE = re.compile(
    _LEAD + r"(?P<lat>[-+]?\d+,\d+)(?:\s*;\s*|\s+)(?P<lon>[-+]?\d+,\d+)(?![\d,.])"
)
_DOT_PAIR_RE = re.compile(
    _LEAD + r"(?P<lat>" + _NUM + r")(?:\s*[,;]\s*|\s+)(?P<lon>" + _NUM + r")(?![\d.])"
)


def _coords_ok(lat: float, lon: float) -> bool:
    return (
        math.isfinite(lat)
        and math.isfinite(lon)
        and -90.0 <= lat <= 90.0
        and -180.0 <= lon <= 180.0
    )


def _find_coords(segment: str) -> tuple[float, float] | None:
    m = _COMMA_PAIR_RE.match(segment)
    if m:
        lat = float(m["lat"].replace(",", "."))
        lon = float(m["lon"].replace(",", "."))
    else:
        m = _DOT_PAIR_RE.match(segment)
        if not m:
            return None
        lat, lon = float(m["lat"]), float(m["lon"])
    return (lat, lon) if _coords_ok(lat, lon) else None


def _resolve_region(segment: str) -> str | None:
    try:
        return normalize_region(segment)
    except UnknownRegionError:
        return resolve_region_loose(segment)


def _parse_clean(text: str) -> tuple[str, float, float] | None:
    if text.count(REGION_MARKER) != 1 or text.count(GEO_MARKER) != 1:
        return None
    m = _CLEAN_RE.fullmatch(text)
    if not m:
        return None
    try:
        region = normalize_region(m["region"])
    except UnknownRegionError:
        return None
    lat, lon = float(m["lat"]), float(m["lon"])
    if not _coords_ok(lat, lon):
        return None
    return region, lat, lon


def _parse_repaired(text: str) -> tuple[str, float, float] | None:
    regs = list(_REGION_MARK_RE.finditer(text))
    geos = list(_GEO_MARK_RE.finditer(text))
    if not regs or not geos:
        return None
    marks = sorted([m.start() for m in regs + geos] + [len(text)])

    def segment_after(m: re.Match) -> str:
        end = next(p for p in marks if p > m.start())
        return text[m.end():end]

    # Prefer the last "[regione] ... [geo]" pair so an echoed prompt is skipped.
    ordered = [(r, g) for r in regs for g in geos if g.start() > r.start()]
    if ordered:
        r = max((pair[0] for pair in ordered), key=lambda m: m.start())
        g = min((m for m in geos if m.start() > r.start()), key=lambda m: m.start())
    else:
        # markers swapped: "[geo] <lat> <lon> [regione] <region>"
        g = max(geos, key=lambda m: m.start())
        r = min((m for m in regs if m.start() > g.start()), key=lambda m: m.start())
    region = _resolve_region(segment_after(r))
    if region is None:
        return None
    coords = _find_coords(segment_after(g))
    if coords is None:
        return None
    return region, coords[0], coords[1]


def parse_generation(text: str, fallback: Fallback = DEFAULT_FALLBACK) -> Prediction:
    """Decode a model generation into a :class:`Prediction`. Never raises.

    ``clean`` means the string is exactly one well-formed completion. Bounded
    deviations are ``repaired``: surrounding text, marker case or order,
    loosely spelled regions, and comma separators or comma decimals. Anything
    else becomes the fallback prediction with the raw text kept.
    """
    if not isinstance(text, str):
        text = "" if text is None else str(text)
    try:
        parsed = _parse_clean(text)
        if parsed is not None:
            return Prediction(*parsed, ParseStatus.CLEAN, text)
        parsed = _parse_repaired(text)
        if parsed is not None:
            return Prediction(*parsed, ParseStatus.REPAIRED, text)
    except Exception:  # totality: a decoder bug must not abort scoring
        log.exception("unexpected failure decoding %r", text[:200])
    return Prediction.from_fallback(fallback, text)


def export_jsonl(examples: Iterable[EncodedExample], destination: TextIO) -> int:
    """Write one ``{"prompt", "completion"}`` object per line; return the count."""
    written = 0
    try:
        for example in examples:
            destination.write(json.dumps(example.to_dict(), ensure_ascii=False))
            destination.write("\n")
            written += 1
    except OSError as exc:
        raise ExportError(f"write failed after {written} examples: {exc}", written) from exc
    return written


class ExportError(OSError):
    def __init__(self, message: str, written: int):
        super().__init__(message)
        self.written = written


MANIFEST_KEYS = (
    "epochs",
    "batch_size",
    "micro_batch_size",
    "learning_rate",
    "warmup_ratio",
    "lora_r",
    "lora_alpha",
    "lora_dropout",
    "quantization_bits",
    "instruction_text",
)


@dataclass(frozen=True)
class TrainingManifest:
    """Fine-tuning and QLoRA hyperparameters handed to an external trainer."""

    epochs: int = 10
    batch_size: int = 32
    micro_batch_size: int = 8
    learning_rate: float = 3e-4
    warmup_ratio: float = 0.1
    lora_r: int = 8
    lora_alpha: int = 16
    lora_dropout: float = 0.05
    quantization_bits: int = 4
    instruction_text: str = DEFAULT_INSTRUCTION

    def __post_init__(self):
        for key in MANIFEST_KEYS[:-1]:
            if not getattr(self, key) > 0:
                raise ValueError(f"{key} must be positive")
        if not 0.0 <= self.warmup_ratio <= 1.0:
            raise ValueError("warmup_ratio must lie in [0, 1]")
        if not self.instruction_text:
            raise ValueError("instruction_text must be nonempty")

    @classmethod
    def for_profile(cls, profile: str = "default", **overrides) -> "TrainingManifest":
        # the 3B model was trained with larger batches
        if profile == "minerva":
            overrides = {"batch_size": 64, "micro_batch_size": 32, **overrides}
        elif profile != "default":
            raise ValueError(f"unknown profile {profile!r}")
        return cls(**overrides)

    def to_dict(self) -> dict:
        data = asdict(self)
        return {key: data[key] for key in MANIFEST_KEYS}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"
