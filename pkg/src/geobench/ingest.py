"""Reading, joining and summarizing GeoLingIt-style TSV files.

Subtask A files carry ``id, text, region``; subtask B files carry
``id, text, lat, lon``; merged files carry all five columns. Files are UTF-8,
tab separated, one record per line, with no header unless asked for.
"""

from __future__ import annotations

import enum
import io
import logging
import math
import re
from collections import Counter
from dataclasses import dataclass, field
from decimal import Decimal
from pathlib import Path
from typing import BinaryIO, Iterable, Sequence

from geobench.regions import REGIONS, UnknownRegionError, normalize_region

log = logging.getLogger(__name__)

ITALY_LAT = (35.0, 48.0)
ITALY_LON = (6.0, 19.0)
OFFICIAL_SIZES = {"train": 13669, "eval": 552, "test": 818}


class Schema(enum.Enum):
    A = "A"
    B = "B"
    MERGED = "merged"

    @property
    def columns(self) -> tuple[str, ...]:
        return _COLUMNS[self]


_COLUMNS = {
    Schema.A: ("id", "text", "region"),
    Schema.B: ("id", "text", "lat", "lon"),
    Schema.MERGED: ("id", "text", "region", "lat", "lon"),
}


class TsvParseError(ValueError):
    """A malformed line. ``line`` is 1-based; ``field`` names the bad column."""

    def __init__(self, line: int, field: str | None, message: str):
        self.line = line
        self.field = field
        where = f"line {line}" + (f", field {field!r}" if field else "")
        super().__init__(f"{where}: {message}")


class MergeError(ValueError):
    pass


def format_coord(value: float) -> str:
    """Shortest decimal string that parses back to ``value``, never in exponent form."""
    text = format(Decimal(repr(float(value))), "f")
    return text


def _coord_text(value: float, raw: str | None) -> str:
    if raw is not None:
        try:
            if float(raw) == value:
                return raw
        except ValueError:
            pass
    return format_coord(value)


_ESCAPES = {"\\": "\\\\", "\t": "\\t", "\n": "\\n", "\r": "\\r"}
_UNESCAPES = {"\\\\": "\\", "\\t": "\t", "\\n": "\n", "\\r": "\r"}
_ESCAPE_RE = re.compile(r"[\\\t\n\r]")
_UNESCAPE_RE = re.compile(r"\\[\\tnr]")


def escape_text(text: str) -> str:
    return _ESCAPE_RE.sub(lambda m: _ESCAPES[m.group()], text)


def unescape_text(text: str) -> str:
    return _UNESCAPE_RE.sub(lambda m: _UNESCAPES[m.group()], text)


def id_sort_key(record_id: str) -> tuple[int, int, str]:
    """Numeric ids sort numerically and ahead of any non-numeric id."""
    if record_id.isdigit():
        return (0, int(record_id), record_id)
    return (1, 0, record_id)


@dataclass(frozen=True)
class Record:
    """One post with its gold region and coordinates."""

    id: str
    text: str
    region: str
    lat: float
    lon: float
    # verbatim coordinate strings from the source file, echoed on output
    lat_raw: str | None = field(default=None, compare=False, repr=False)
    lon_raw: str | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not self.id:
            raise ValueError("record id must be nonempty")
        if self.region not in REGIONS:
            raise UnknownRegionError(f"unknown region {self.region!r}")
        _check_coords(self.lat, self.lon)

    @property
    def coords(self) -> tuple[float, float]:
        return (self.lat, self.lon)

    @property
    def lat_text(self) -> str:
        return _coord_text(self.lat, self.lat_raw)

    @property
    def lon_text(self) -> str:
        return _coord_text(self.lon, self.lon_raw)

    def in_italy(self) -> bool:
        return (
            ITALY_LAT[0] <= self.lat <= ITALY_LAT[1]
            and ITALY_LON[0] <= self.lon <= ITALY_LON[1]
        )


def _check_coords(lat: float, lon: float) -> None:
    if not (math.isfinite(lat) and math.isfinite(lon)):
        raise ValueError(f"non-finite coordinates ({lat}, {lon})")
    if not -90.0 <= lat <= 90.0:
        raise ValueError(f"latitude {lat} outside [-90, 90]")
    if not -180.0 <= lon <= 180.0:
        raise ValueError(f"longitude {lon} outside [-180, 180]")


@dataclass(frozen=True)
class Row:
    """A parsed line; columns not carried by the schema are ``None``."""

    line: int
    id: str
    text: str
    region: str | None = None
    lat: float | None = None
    lon: float | None = None
    lat_raw: str | None = field(default=None, compare=False, repr=False)
    lon_raw: str | None = field(default=None, compare=False, repr=False)

    @property
    def has_region(self) -> bool:
        return self.region is not None

    @property
    def has_coords(self) -> bool:
        return self.lat is not None and self.lon is not None

    def to_record(self) -> Record:
        if not (self.has_region and self.has_coords):
            raise ValueError(f"line {self.line}: row {self.id!r} is not a full record")
        return Record(
            self.id, self.text, self.region, self.lat, self.lon, self.lat_raw, self.lon_raw
        )


def _parse_float(line: int, name: str, raw: str, lo: float, hi: float) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise TsvParseError(line, name, f"not a number: {raw!r}") from None
    if not math.isfinite(value):
        raise TsvParseError(line, name, f"not a finite number: {raw!r}")
    if not lo <= value <= hi:
        raise TsvParseError(line, name, f"{value} outside [{lo}, {hi}]")
    return value


def _parse_line(line_no: int, line: str, schema: Schema) -> Row:
    fields = line.split("\t")
    columns = schema.columns
    if len(fields) != len(columns):
        raise TsvParseError(
            line_no, None, f"expected {len(columns)} fields, got {len(fields)}"
        )
    values = dict(zip(columns, fields))
    record_id = values["id"].strip()
    if not record_id:
        raise TsvParseError(line_no, "id", "empty id")
    kwargs: dict = {"line": line_no, "id": record_id, "text": unescape_text(values["text"])}
    if "region" in values:
        try:
            kwargs["region"] = normalize_region(values["region"])
        except UnknownRegionError as exc:
            raise TsvParseError(line_no, "region", str(exc)) from None
    if "lat" in values:
        lat_raw, lon_raw = values["lat"].strip(), values["lon"].strip()
        kwargs["lat"] = _parse_float(line_no, "lat", lat_raw, -90.0, 90.0)
        kwargs["lon"] = _parse_float(line_no, "lon", lon_raw, -180.0, 180.0)
        kwargs["lat_raw"], kwargs["lon_raw"] = lat_raw, lon_raw
        if not (
            ITALY_LAT[0] <= kwargs["lat"] <= ITALY_LAT[1]
            and ITALY_LON[0] <= kwargs["lon"] <= ITALY_LON[1]
        ):
            log.warning("line %d: id %s lies outside Italy's bounding box", line_no, record_id)
    return Row(**kwargs)


def parse_tsv(
    data: bytes | str | BinaryIO,
    schema: Schema | str = Schema.MERGED,
    *,
    strict: bool = True,
    header: bool = False,
    errors: list[TsvParseError] | None = None,
) -> list[Row]:
    """Parse TSV content into rows, in file order.

    In strict mode the first bad line raises :class:`TsvParseError`. In lenient
    mode bad lines are logged, skipped and appended to ``errors`` if given.
    Blank lines are ignored; LF and CRLF endings are both accepted.
    """
    schema = Schema(schema)
    if hasattr(data, "read"):
        data = data.read()
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise TsvParseError(data[: exc.start].count(b"\n") + 1, None, "invalid UTF-8") from None
    if data.startswith("\ufeff"):
        data = data[1:]

    rows: list[Row] = []
    seen: dict[str, int] = {}
    lines = data.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    for line_no, line in enumerate(lines, start=1):
        if line.endswith("\r"):
            line = line[:-1]
        if header and line_no == 1:
            continue
        if not line.strip():
            continue
        try:
            row = _parse_line(line_no, line, schema)
            if row.id in seen:
                raise TsvParseError(
                    line_no, "id", f"duplicate id {row.id!r} (first seen on line {seen[row.id]})"
                )
        except TsvParseError as exc:
            if strict:
                raise
            log.warning("skipping %s", exc)
            if errors is not None:
                errors.append(exc)
            continue
        seen[row.id] = line_no
        rows.append(row)
    return rows


def read_tsv(path: str | Path, schema: Schema | str = Schema.MERGED, **kwargs) -> list[Row]:
    with open(path, "rb") as fh:
        return parse_tsv(fh, schema, **kwargs)


def read_records(path: str | Path, **kwargs) -> list[Record]:
    """Read a merged TSV file straight into records."""
    return [row.to_record() for row in read_tsv(path, Schema.MERGED, **kwargs)]


def serialize_tsv(
    records: Iterable[Record | Row], schema: Schema | str = Schema.MERGED
) -> str:
    schema = Schema(schema)
    out = io.StringIO()
    for rec in records:
        fields = [rec.id, escape_text(rec.text)]
        if "region" in schema.columns:
            fields.append(rec.region)
        if "lat" in schema.columns:
            fields.append(_coord_text(rec.lat, rec.lat_raw))
            fields.append(_coord_text(rec.lon, rec.lon_raw))
        out.write("\t".join(fields))
        out.write("\n")
    return out.getvalue()


def _norm_ws(text: str) -> str:
    return " ".join(text.split())


def unmatched_ids(
    a: Sequence[Row | Record], b: Sequence[Row | Record]
) -> tuple[list[str], list[str]]:
    """Ids only in ``a`` and ids only in ``b``, each in id order."""
    ids_a = {r.id for r in a}
    ids_b = {r.id for r in b}
    return (
        sorted(ids_a - ids_b, key=id_sort_key),
        sorted(ids_b - ids_a, key=id_sort_key),
    )


def _combine(x: Row | Record, y: Row | Record) -> Record:
    if _norm_ws(x.text) != _norm_ws(y.text):
        raise MergeError(f"id {x.id!r}: texts disagree between the two subtask files")
    # region side is the source of truth for text so the result is order independent
    region_side = [r for r in (x, y) if getattr(r, "region", None) is not None]
    coord_side = [r for r in (x, y) if getattr(r, "lat", None) is not None]
    if not region_side:
        raise MergeError(f"id {x.id!r}: neither input carries a region")
    if not coord_side:
        raise MergeError(f"id {x.id!r}: neither input carries coordinates")
    text_src = region_side[0]
    if len(region_side) == 2 and region_side[0].region != region_side[1].region:
        raise MergeError(f"id {x.id!r}: regions disagree")
    c = coord_side[0]
    if len(coord_side) == 2 and (c.lat, c.lon) != (coord_side[1].lat, coord_side[1].lon):
        raise MergeError(f"id {x.id!r}: coordinates disagree")
    if len(region_side) == 2:
        # both sides have regions, pick the textually smaller one for determinism
        text_src = min(region_side, key=lambda r: r.text)
    return Record(
        x.id, text_src.text, region_side[0].region, c.lat, c.lon,
        getattr(c, "lat_raw", None), getattr(c, "lon_raw", None),
    )


def merge_subtasks(
    a: Sequence[Row | Record], b: Sequence[Row | Record], *, strict: bool = False
) -> list[Record]:
    """Join the subtask-A and subtask-B portions of one split on ``id``.

    Texts must agree up to whitespace. Ids present on one side only are
    dropped with a warning, or raise :class:`MergeError` when ``strict``.
    The output is sorted by id and does not depend on argument order.
    """
    only_a, only_b = unmatched_ids(a, b)
    if only_a or only_b:
        msg = f"{len(only_a) + len(only_b)} unmatched ids (first: {(only_a + only_b)[0]!r})"
        if strict:
            raise MergeError(msg)
        log.warning("%s; dropping them", msg)
    by_id_b = {r.id: r for r in b}
    merged = [_combine(r, by_id_b[r.id]) for r in a if r.id in by_id_b]
    merged.sort(key=lambda r: id_sort_key(r.id))
    return merged


@dataclass(frozen=True)
class LabelDistribution:
    """Per-region counts and fractions over all 20 regions, canonical order."""

    counts: dict[str, int]
    fractions: dict[str, float]

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def ranked(self) -> list[tuple[str, int, float]]:
        """Regions by decreasing count (ties in canonical order)."""
        order = sorted(REGIONS, key=lambda r: -self.counts[r])
        return [(r, self.counts[r], self.fractions[r]) for r in order]

    def to_csv(self) -> str:
        lines = ["region,count,fraction"]
        for region in REGIONS:
            lines.append(f"{_csv_field(region)},{self.counts[region]},{self.fractions[region]!r}")
        return "\n".join(lines) + "\n"

    def to_table(self) -> str:
        width = max(len(r) for r in REGIONS)
        lines = [f"{'region':<{width}}  {'count':>7}  {'fraction':>8}"]
        for region, count, frac in self.ranked():
            lines.append(f"{region:<{width}}  {count:>7d}  {frac:>8.4f}")
        lines.append(f"{'total':<{width}}  {self.total:>7d}")
        return "\n".join(lines)


def _csv_field(value: str) -> str:
    if any(ch in value for ch in ',"\n'):
        return '"' + value.replace('"', '""') + '"'
    return value


def compute_stats(records: Sequence[Record]) -> LabelDistribution:
    if not records:
        raise ValueError("cannot compute label statistics of an empty record list")
    counter = Counter(r.region for r in records)
    n = len(records)
    counts = {region: counter.get(region, 0) for region in REGIONS}
    fractions = {region: counts[region] / n for region in REGIONS}
    return LabelDistribution(counts, fractions)


@dataclass(frozen=True)
class DatasetSplit:
    train: list[Record]
    eval: list[Record]
    test: list[Record]

    def sizes(self) -> dict[str, int]:
        return {"train": len(self.train), "eval": len(self.eval), "test": len(self.test)}

    def validate(self, *, official: bool = False) -> None:
        """Check ids are unique per split and disjoint across splits."""
        owner: dict[str, str] = {}
        for name in ("train", "eval", "test"):
            seen: set[str] = set()
            for rec in getattr(self, name):
                if rec.id in seen:
                    raise ValueError(f"duplicate id {rec.id!r} in {name} split")
                seen.add(rec.id)
                if rec.id in owner:
                    raise ValueError(
                        f"id {rec.id!r} appears in both {owner[rec.id]} and {name} splits"
                    )
                owner[rec.id] = name
        if official and self.sizes() != OFFICIAL_SIZES:
            raise ValueError(f"split sizes {self.sizes()} differ from the official {OFFICIAL_SIZES}")
