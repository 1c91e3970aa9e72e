"""Command-line entry point: ``geobench <command> ...``.

Exit codes: 0 success, 1 usage error, 2 data/validation error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import tempfile
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Sequence

from geobench import baseline as nb
from geobench import svg
from geobench.encoding import (
    DEFAULT_FALLBACK,
    DEFAULT_INSTRUCTION,
    Fallback,
    ParseStatus,
    Prediction,
    TrainingManifest,
    encode_example,
    export_jsonl,
    majority_fallback,
    parse_generation,
)
from geobench.geo import area_error_map, density_map, load_areas
from geobench.ingest import (
    OFFICIAL_SIZES,
    DatasetSplit,
    MergeError,
    Record,
    Schema,
    TsvParseError,
    compute_stats,
    escape_text,
    format_coord,
    merge_subtasks,
    read_records,
    read_tsv,
    serialize_tsv,
    unescape_text,
    unmatched_ids,
)
from geobench.metrics import AVG_KM_COLUMN, EARTH_RADIUS_KM, MACRO_F1_COLUMN, confusion, evaluate
from geobench.regions import REGIONS, UnknownRegionError, normalize_region

log = logging.getLogger("geobench")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_IO = 0, 1, 2, 3
GEOMETRY_ENV = "GEOBENCH_GEOMETRY_DIR"


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------- helpers


def write_atomic(path: str | Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _json(data) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


@dataclass
class RunConfig:
    """Resolved settings of one command, echoed into its output directory."""

    command: str
    inputs: dict[str, str] = field(default_factory=dict)
    output: str | None = None
    options: dict = field(default_factory=dict)

    def validate(self) -> None:
        for role, path in self.inputs.items():
            if path is not None and not Path(path).exists():
                raise FileNotFoundError(f"{role} file not found: {path}")

    def to_json(self) -> str:
        return _json(asdict(self))


def _config_for(args: argparse.Namespace, inputs: dict, output=None) -> RunConfig:
    skip = {"func", "config", "verbose", "command", "baseline_command", *inputs}
    options = {k: v for k, v in sorted(vars(args).items()) if k not in skip}
    options = {k: (str(v) if isinstance(v, Path) else v) for k, v in options.items()}
    flat_inputs = {}
    for role, value in inputs.items():
        if isinstance(value, (list, tuple)):
            for i, item in enumerate(value):
                flat_inputs[f"{role}[{i}]"] = None if item is None else str(item)
        else:
            flat_inputs[role] = None if value is None else str(value)
    cfg = RunConfig(args.command, flat_inputs, None if output is None else str(output), options)
    cfg.validate()
    return cfg


def _fallback(args: argparse.Namespace) -> Fallback:
    explicit = (args.fallback_region, args.fallback_lat, args.fallback_lon)
    if any(v is not None for v in explicit):
        if any(v is None for v in explicit):
            raise UsageError("--fallback-region, --fallback-lat and --fallback-lon go together")
        return Fallback(normalize_region(args.fallback_region), args.fallback_lat, args.fallback_lon)
    if args.train:
        return majority_fallback(read_records(args.train, header=args.header))
    log.warning("no --train split or explicit fallback given; using %s", DEFAULT_FALLBACK)
    return DEFAULT_FALLBACK


def _geometry_path(explicit: str | None, filename: str) -> str | None:
    if explicit:
        return explicit
    base = os.environ.get(GEOMETRY_ENV)
    if base and (Path(base) / filename).exists():
        return str(Path(base) / filename)
    return None


PRED_COLUMNS = ("id", "text", "region", "lat", "lon", "parse_status")


def predictions_tsv(ids: Sequence[str], texts: Sequence[str], preds: Sequence[Prediction]) -> str:
    lines = []
    for rid, text, p in zip(ids, texts, preds):
        status = ParseStatus(p.parse_status).value
        fields = [rid, escape_text(text), p.region, format_coord(p.lat), format_coord(p.lon), status]
        lines.append("\t".join(fields))
    return "\n".join(lines) + ("\n" if lines else "")


def _read_lines(path: str) -> list[str]:
    with open(path, encoding="utf-8", newline="") as fh:
        content = fh.read()
    lines = content.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return [line[:-1] if line.endswith("\r") else line for line in lines]


def _structured_predictions(lines: list[str]) -> dict[str, Prediction] | None:
    """Parse a predictions TSV keyed by id, or ``None`` if it is not one."""
    out: dict[str, Prediction] = {}
    for line in lines:
        if not line.strip():
            continue
        fields = line.split("\t")
        if len(fields) not in (5, 6):
            return None
        rid, _text, region, lat, lon = fields[:5]
        try:
            region = normalize_region(region)
            lat_f, lon_f = float(lat), float(lon)
            status = ParseStatus(fields[5].strip()) if len(fields) == 6 else ParseStatus.CLEAN
        except (UnknownRegionError, ValueError):
            return None
        rid = rid.strip()
        if rid in out:
            raise DataError(f"duplicate prediction id {rid!r}")
        out[rid] = Prediction(region, lat_f, lon_f, status, line)
    return out


def load_predictions(
    path: str, golds: Sequence[Record], fallback: Fallback, layout: str = "auto"
) -> list[Prediction]:
    """Predictions aligned with ``golds``: by id for TSV, by position for raw lines."""
    lines = _read_lines(path)
    structured = None
    if layout in ("auto", "tsv"):
        structured = _structured_predictions(lines)
        if structured is None and layout == "tsv":
            raise DataError(f"{path}: not a predictions TSV ({', '.join(PRED_COLUMNS)})")
    if structured is not None and (structured or not lines):
        gold_ids = [g.id for g in golds]
        for gid in gold_ids:
            if gid not in structured:
                raise DataError(f"alignment mismatch: no prediction for gold id {gid!r}")
        extra = [pid for pid in structured if pid not in set(gold_ids)]
        if extra:
            raise DataError(f"alignment mismatch: prediction id {extra[0]!r} is not in the gold file")
        return [structured[gid] for gid in gold_ids]

    generations = [unescape_text(line) for line in lines]
    if len(generations) != len(golds):
        k = min(len(generations), len(golds))
        where = f"gold id {golds[k].id!r}" if k < len(golds) else f"extra generation line {k + 1}"
        raise DataError(
            f"alignment mismatch: {len(generations)} generations for {len(golds)} gold records "
            f"(first divergence at {where})"
        )
    return [parse_generation(text, fallback) for text in generations]


# ---------------------------------------------------------------- commands


def cmd_ingest(args) -> int:
    splits = args.split or []
    inputs = {"split": [p for _, a, b in splits for p in (a, b)]}
    cfg = _config_for(args, inputs, args.out_dir)
    out_dir = Path(args.out_dir)
    report: dict = {"splits": {}}
    merged_splits: dict[str, list[Record]] = {}
    for name, path_a, path_b in splits:
        errors_a: list[TsvParseError] = []
        errors_b: list[TsvParseError] = []
        kw = {"strict": not args.lenient, "header": args.header}
        rows_a = read_tsv(path_a, Schema.A, errors=errors_a, **kw)
        rows_b = read_tsv(path_b, Schema.B, errors=errors_b, **kw)
        only_a, only_b = unmatched_ids(rows_a, rows_b)
        merged = merge_subtasks(rows_a, rows_b, strict=args.strict_merge)
        if not merged:
            log.warning("split %s: merged output is empty", name)
        merged_splits[name] = merged
        write_atomic(out_dir / f"{name}.tsv", serialize_tsv(merged))
        report["splits"][name] = {
            "rows_a": len(rows_a),
            "rows_b": len(rows_b),
            "merged": len(merged),
            "unmatched_a": only_a,
            "unmatched_b": only_b,
            "skipped_lines_a": [str(e) for e in errors_a],
            "skipped_lines_b": [str(e) for e in errors_b],
            "outside_italy": [r.id for r in merged if not r.in_italy()],
        }
        print(f"{name}: {len(merged)} records ({len(only_a)} unmatched in A, {len(only_b)} in B)")
    if {"train", "eval", "test"} <= merged_splits.keys():
        split = DatasetSplit(merged_splits["train"], merged_splits["eval"], merged_splits["test"])
        split.validate(official=args.official)
        report["sizes"] = split.sizes()
        report["official_sizes_match"] = split.sizes() == OFFICIAL_SIZES
    write_atomic(out_dir / "ingest_report.json", _json(report))
    write_atomic(out_dir / "config.json", cfg.to_json())
    return EXIT_OK


def cmd_stats(args) -> int:
    _config_for(args, {"input": args.input})
    records = [r for path in args.input for r in read_records(path, header=args.header, strict=not args.lenient)]
    dist = compute_stats(records)
    print(dist.to_table())
    if args.csv:
        write_atomic(args.csv, dist.to_csv())
    if args.svg:
        write_atomic(args.svg, svg.bar_chart([(r, c) for r, c, _ in dist.ranked()], "posts per region"))
    return EXIT_OK


def _encoded(args):
    records = read_records(args.input, header=args.header)
    return [encode_example(r, args.instruction) for r in records]


def cmd_encode(args) -> int:
    _config_for(args, {"input": args.input}, args.output)
    examples = _encoded(args)
    if args.output in (None, "-"):
        count = export_jsonl(examples, sys.stdout)
    else:
        Path(args.output).parent.mkdir(parents=True, exist_ok=True)
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            count = export_jsonl(examples, fh)
        print(f"wrote {count} examples to {args.output}")
    return EXIT_OK


def cmd_export(args) -> int:
    cfg = _config_for(args, {"input": args.input}, args.out_dir)
    out_dir = Path(args.out_dir)
    examples = _encoded(args)
    profile = "minerva" if args.minerva_profile else "default"
    manifest = TrainingManifest.for_profile(profile, instruction_text=args.instruction)
    out_dir.mkdir(parents=True, exist_ok=True)
    jsonl_path = out_dir / f"{args.name}.jsonl"
    tmp = jsonl_path.with_name(f".{jsonl_path.name}.tmp")
    with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
        count = export_jsonl(examples, fh)
    os.replace(tmp, jsonl_path)
    write_atomic(out_dir / "manifest.json", manifest.to_json())
    write_atomic(out_dir / "config.json", cfg.to_json())
    print(f"wrote {count} examples to {jsonl_path} ({profile} profile manifest)")
    return EXIT_OK


def cmd_decode(args) -> int:
    _config_for(args, {"generations": args.generations, "gold": args.gold, "train": args.train}, args.output)
    fallback = _fallback(args)
    generations = [unescape_text(line) for line in _read_lines(args.generations)]
    preds = [parse_generation(g, fallback) for g in generations]
    if args.gold:
        golds = read_records(args.gold, header=args.header)
        if len(golds) != len(preds):
            raise DataError(f"{len(preds)} generations for {len(golds)} gold records")
        ids, texts = [g.id for g in golds], [g.text for g in golds]
    else:
        ids, texts = [str(i) for i in range(1, len(preds) + 1)], [""] * len(preds)
    write_atomic(args.output, predictions_tsv(ids, texts, preds))
    failed = sum(p.parse_status == ParseStatus.FALLBACK for p in preds)
    print(f"decoded {len(preds)} generations ({failed} fallback)")
    return EXIT_OK


def _area_outputs(out_dir: Path, label: str, preds, golds, areas, args) -> None:
    emap = area_error_map(preds, golds, areas, snap=args.snap_nearest_centroid, radius=args.earth_radius)
    write_atomic(out_dir / f"{label}_errors.csv", emap.to_csv())
    write_atomic(out_dir / f"{label}_errors.geojson", _json(emap.to_geojson(areas)))
    if args.svg:
        sums = {k: v.sum_km for k, v in emap.areas.items()}
        means = {k: v.mean_km for k, v in emap.areas.items()}
        write_atomic(out_dir / f"{label}_errors_sum.svg", svg.choropleth(areas, sums, "sum of km error"))
        write_atomic(out_dir / f"{label}_errors_mean.svg", svg.choropleth(areas, means, "mean km error"))


def cmd_eval(args) -> int:
    geometry = _geometry_path(args.geometry, f"{args.area_level}s.geojson")
    cfg = _config_for(
        args,
        {"gold": args.gold, "predictions": args.predictions, "train": args.train, "geometry": geometry},
        args.out_dir,
    )
    out_dir = Path(args.out_dir)
    golds = read_records(args.gold, header=args.header)
    fallback = _fallback(args)
    preds = load_predictions(args.predictions, golds, fallback, args.pred_format)
    labels = list(REGIONS) if args.class_universe == "all" else None
    report = evaluate(preds, golds, radius=args.earth_radius, labels=labels)
    cm = confusion([p.region for p in preds], [g.region for g in golds])

    write_atomic(out_dir / "report.json", report.to_json())
    write_atomic(out_dir / "report.csv", report.to_csv())
    write_atomic(out_dir / "confusion.csv", cm.to_csv())
    write_atomic(out_dir / "confusion_counts.csv", cm.counts_csv())
    if geometry:
        _area_outputs(out_dir, args.area_level, preds, golds, load_areas(geometry, args.name_key), args)
    cfg.options["fallback"] = asdict(fallback)
    write_atomic(out_dir / "config.json", cfg.to_json())

    # repr() matches the float text json.dumps writes into report.json
    print(f"{MACRO_F1_COLUMN}\t{AVG_KM_COLUMN}")
    print(f"{report.macro_f1!r}\t{report.avg_km!r}")
    return EXIT_OK


def cmd_baseline_train(args) -> int:
    _config_for(args, {"train": args.train}, args.model)
    records = read_records(args.train, header=args.header)
    model = nb.train(records, (args.ngram_min, args.ngram_max), args.alpha)
    Path(args.model).parent.mkdir(parents=True, exist_ok=True)
    model.save(args.model)
    print(f"trained on {len(records)} records, {len(model.vocabulary)} n-grams -> {args.model}")
    return EXIT_OK


def cmd_baseline_predict(args) -> int:
    _config_for(args, {"model": args.model, "input": args.input}, args.output)
    model = nb.NgramModel.load(args.model)
    records = read_records(args.input, header=args.header)
    preds = [model.predict(r.text) for r in records]
    write_atomic(args.output, predictions_tsv([r.id for r in records], [r.text for r in records], preds))
    print(f"wrote {len(preds)} predictions to {args.output}")
    return EXIT_OK


def cmd_report(args) -> int:
    geometry = _geometry_path(args.geometry, f"{args.area_level}s.geojson")
    cfg = _config_for(
        args,
        {"gold": args.gold, "predictions": args.predictions, "train": args.train, "geometry": geometry},
        args.out_dir,
    )
    out_dir = Path(args.out_dir)
    golds = read_records(args.gold, header=args.header)
    dist = compute_stats(golds)
    write_atomic(out_dir / "label_distribution.csv", dist.to_csv())
    if args.svg:
        write_atomic(
            out_dir / "label_distribution.svg",
            svg.bar_chart([(r, c) for r, c, _ in dist.ranked()], "posts per region"),
        )
    if geometry:
        areas = load_areas(geometry, args.name_key)
        dens = density_map(golds, areas, snap=args.snap_nearest_centroid)
        write_atomic(out_dir / "density.csv", dens.to_csv())
        if args.svg:
            write_atomic(out_dir / "density.svg", svg.choropleth(areas, dens.counts, "posts per area"))
        if args.predictions:
            preds = load_predictions(args.predictions, golds, _fallback(args), args.pred_format)
            _area_outputs(out_dir, args.area_level, preds, golds, areas, args)
    else:
        log.warning("no geometry given (--geometry or $%s); skipping spatial outputs", GEOMETRY_ENV)
    write_atomic(out_dir / "config.json", cfg.to_json())
    print(dist.to_table())
    return EXIT_OK


def cmd_synth(args) -> int:
    from geobench.synth import separable_corpus

    cfg = _config_for(args, {}, args.out_dir)
    out_dir = Path(args.out_dir)
    train = separable_corpus(args.per_region, seed=args.seed)
    held_out = separable_corpus(args.held_out_per_region, seed=args.seed + 1, id_offset=len(train))
    write_atomic(out_dir / "train.tsv", serialize_tsv(train))
    write_atomic(out_dir / "test.tsv", serialize_tsv(held_out))
    write_atomic(out_dir / "config.json", cfg.to_json())
    print(f"wrote {len(train)} training and {len(held_out)} held-out records to {out_dir}")
    return EXIT_OK


# ---------------------------------------------------------------- parser


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--header", action="store_true", help="input TSVs start with a header row to skip")


def _add_fallback(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("fallback for undecodable generations")
    g.add_argument("--train", help="merged training TSV; fallback = majority region and its centroid")
    g.add_argument("--fallback-region", help="explicit fallback region (overrides --train)")
    g.add_argument("--fallback-lat", type=float)
    g.add_argument("--fallback-lon", type=float)


def _add_geo(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("spatial aggregation")
    g.add_argument(
        "--geometry",
        help=f"GeoJSON FeatureCollection of areas (default: $GEOBENCH_GEOMETRY_DIR/<level>s.geojson)",
    )
    g.add_argument("--area-level", default="province", help="area label used in output names and the default geometry file")
    g.add_argument("--name-key", default="name", help="feature property holding the area name")
    g.add_argument("--snap-nearest-centroid", action="store_true", help="assign points outside every area to the nearest centroid")
    g.add_argument("--svg", action="store_true", help="also write minimal SVG charts")
    g.add_argument("--earth-radius", type=float, default=EARTH_RADIUS_KM, help="sphere radius in km")
    g.add_argument("--pred-format", choices=("auto", "raw", "tsv"), default="auto",
                   help="raw: one generation per line in gold order; tsv: id-keyed predictions TSV")


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    parser = _Parser(prog="geobench", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="JSON file of option defaults (flags override it)")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    subs: dict[str, argparse.ArgumentParser] = {}

    p = sub.add_parser("ingest", help="join subtask A/B files into merged TSVs")
    p.add_argument("--split", nargs=3, action="append", metavar=("NAME", "A_TSV", "B_TSV"), required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--lenient", action="store_true", help="skip malformed lines instead of failing")
    p.add_argument("--strict-merge", action="store_true", help="fail on ids present in only one file")
    p.add_argument("--official", action="store_true", help="require the official split sizes")
    _add_common(p)
    p.set_defaults(func=cmd_ingest)
    subs["ingest"] = p

    p = sub.add_parser("stats", help="label distribution of merged TSVs")
    p.add_argument("input", nargs="+")
    p.add_argument("--csv", help="write region,count,fraction CSV")
    p.add_argument("--svg", help="write a bar chart")
    p.add_argument("--lenient", action="store_true")
    _add_common(p)
    p.set_defaults(func=cmd_stats)
    subs["stats"] = p

    for name, func, help_ in (
        ("encode", cmd_encode, "instruction-encode a merged TSV to JSONL"),
        ("export", cmd_export, "JSONL plus training manifest for an external trainer"),
    ):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--input", required=True)
        p.add_argument("--instruction", default=DEFAULT_INSTRUCTION)
        if name == "encode":
            p.add_argument("--output", default="-")
        else:
            p.add_argument("--out-dir", required=True)
            p.add_argument("--name", default="train", help="JSONL file stem")
            p.add_argument("--minerva-profile", action="store_true", help="batch 64, micro-batch 32")
        _add_common(p)
        p.set_defaults(func=func)
        subs[name] = p

    p = sub.add_parser("decode", help="parse raw generations into a predictions TSV")
    p.add_argument("--generations", required=True)
    p.add_argument("--gold", help="merged TSV supplying ids and texts, aligned by line")
    p.add_argument("--output", required=True)
    _add_fallback(p)
    _add_common(p)
    p.set_defaults(func=cmd_decode)
    subs["decode"] = p

    p = sub.add_parser("eval", help="score predictions against gold")
    p.add_argument("--gold", required=True)
    p.add_argument("--predictions", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--class-universe", choices=("gold", "all"), default="gold",
                   help="macro-F1 over classes in gold (default) or all 20 regions")
    _add_fallback(p)
    _add_geo(p)
    _add_common(p)
    p.set_defaults(func=cmd_eval)
    subs["eval"] = p

    p = sub.add_parser("baseline", help="character n-gram baseline")
    bsub = p.add_subparsers(dest="baseline_command", required=True, parser_class=_Parser)
    bt = bsub.add_parser("train")
    bt.add_argument("--train", required=True)
    bt.add_argument("--model", required=True, help="output model file (.json or .json.gz)")
    bt.add_argument("--alpha", type=float, default=nb.DEFAULT_ALPHA)
    bt.add_argument("--ngram-min", type=int, default=nb.DEFAULT_N_RANGE[0])
    bt.add_argument("--ngram-max", type=int, default=nb.DEFAULT_N_RANGE[1])
    _add_common(bt)
    bt.set_defaults(func=cmd_baseline_train)
    subs["baseline train"] = bt
    bp = bsub.add_parser("predict")
    bp.add_argument("--model", required=True)
    bp.add_argument("--input", required=True)
    bp.add_argument("--output", required=True)
    _add_common(bp)
    bp.set_defaults(func=cmd_baseline_predict)
    subs["baseline predict"] = bp

    p = sub.add_parser("report", help="distribution, density and error-map data")
    p.add_argument("--gold", required=True)
    p.add_argument("--predictions")
    p.add_argument("--out-dir", required=True)
    _add_fallback(p)
    _add_geo(p)
    _add_common(p)
    p.set_defaults(func=cmd_report)
    subs["report"] = p

    p = sub.add_parser("synth", help="write the separable synthetic corpus")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--per-region", type=int, default=10)
    p.add_argument("--held-out-per-region", type=int, default=5)
    p.set_defaults(func=cmd_synth)
    subs["synth"] = p
    return parser, subs


def parse_args(argv: Sequence[str] | None = None) -> argparse.Namespace:
    parser, subs = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                config = json.load(fh)
        except OSError as exc:
            parser.exit(EXIT_IO, f"geobench: cannot read config: {exc}\n")
        except json.JSONDecodeError as exc:
            parser.exit(EXIT_USAGE, f"geobench: bad config file: {exc}\n")
        key = args.command + (f" {args.baseline_command}" if args.command == "baseline" else "")
        defaults = {k: v for k, v in config.items() if not isinstance(v, dict)}
        defaults.update(config.get(key, {}))
        defaults = {k.replace("-", "_"): v for k, v in defaults.items()}
        known = {a.dest for a in subs[key]._actions}
        subs[key].set_defaults(**{k: v for k, v in defaults.items() if k in known})
        args = parser.parse_args(argv)
    return args


def main(argv: Sequence[str] | None = None) -> int:
    args = parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"geobench: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (TsvParseError, MergeError, UnknownRegionError, nb.ModelFormatError, DataError, ValueError) as exc:
        print(f"geobench: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"geobench: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
