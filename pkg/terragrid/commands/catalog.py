# terragrid/commands/catalog.py
"""Catalog commands: ingest, filter, join, pair, statistics, splits and STAC export."""

import argparse
import csv
import io
import logging
import sys

from terragrid.core.catalog import (
    Catalog,
    IngestReport,
    SplitManifest,
    apply_split,
    closest_time_pairing,
    coverage_from_count,
    coverage_stats,
    detect_format,
    export_split,
    export_stac_items,
    join_by_cell,
    pairing_coverage,
    volume_gigapixels,
)
from terragrid.core.errors import InvalidParameterError
from terragrid.core.grid import format_cell
from terragrid.data import get_all_references
from terragrid.utils.formatters import write_jsonl, write_text_block
from terragrid.utils.helpers import (
    add_selector_arguments,
    format_timestamp,
    parse_timestamp,
    predicate_from_args,
)

logger = logging.getLogger(__name__)


def _ingest_path(catalog: Catalog, path: str, fmt=None) -> IngestReport:
    row_format = fmt or ("csv" if path == "-" else detect_format(path))
    if path == "-":
        stdin = io.TextIOWrapper(sys.stdin.buffer, encoding="utf-8", errors="surrogateescape", newline="")
        try:
            report = catalog.ingest(stdin, row_format)
        finally:
            stdin.detach()
    else:
        with open(path, encoding="utf-8", errors="surrogateescape", newline="") as stream:
            report = catalog.ingest(stream, row_format)
    for reject in report.rejects:
        logger.warning(f"⚠️ {path}:{reject.line}: {reject.reason}")
    logger.info(
        f"📥 {path}: {report.inserted} inserted, {report.duplicates} duplicates, "
        f"{report.rejected} rejected"
    )
    return report


def load_catalog(paths, spec, fmt=None) -> Catalog:
    """Ingest one or more files ('-' = stdin) into a single catalog, logging rejects."""
    catalog = Catalog(spec)
    for path in paths:
        _ingest_path(catalog, path, fmt)
    return catalog


def _write_catalog(catalog: Catalog, fmt: str):
    if fmt == "jsonl":
        catalog.write_jsonl(sys.stdout)
    else:
        catalog.write_csv(sys.stdout)


def _add_input_arguments(parser, multiple=False):
    if multiple:
        parser.add_argument("inputs", nargs="+", metavar="FILE", help="Catalog CSV/JSONL ('-' = stdin)")
    else:
        parser.add_argument("input", metavar="FILE", help="Catalog CSV/JSONL ('-' = stdin)")
    parser.add_argument(
        "--input-format",
        choices=("csv", "jsonl"),
        help="Input format (default: from the file extension)",
    )


def setup_catalog_commands(subparsers):
    """Setup catalog commands."""
    catalog_parser = subparsers.add_parser("catalog", help="Build, query and split metadata catalogs")
    catalog_commands = catalog_parser.add_subparsers(dest="catalog_command", metavar="ACTION")
    catalog_commands.required = True
    defaults = argparse.ArgumentDefaultsHelpFormatter

    ingest = catalog_commands.add_parser(
        "ingest", help="Validate, merge and de-duplicate catalog files", formatter_class=defaults
    )
    _add_input_arguments(ingest, multiple=True)
    ingest.add_argument("--format", choices=("csv", "jsonl"), default="csv", help="Output format")
    ingest.add_argument("--strict", action="store_true", help="Exit 1 if any row was rejected")

    filter_parser = catalog_commands.add_parser(
        "filter", help="Records matching every given condition", formatter_class=defaults
    )
    _add_input_arguments(filter_parser)
    add_selector_arguments(filter_parser)
    filter_parser.add_argument("--format", choices=("csv", "jsonl"), default="csv", help="Output format")

    join = catalog_commands.add_parser(
        "join", help="Cells present in both catalogs, with record counts", formatter_class=defaults
    )
    join.add_argument("left", metavar="A")
    join.add_argument("right", metavar="B")

    pair = catalog_commands.add_parser(
        "pair",
        help="For each record of A, the record of B in the same cell closest in time",
        formatter_class=defaults,
    )
    pair.add_argument("left", metavar="A")
    pair.add_argument("right", metavar="B")
    pair.add_argument(
        "--max-delta", type=int, help="Drop pairs further apart than this many seconds"
    )

    stats = catalog_commands.add_parser(
        "stats",
        help="Volume and coverage arithmetic for a catalog or a bare sample count",
        formatter_class=defaults,
    )
    stats.add_argument("input", nargs="?", metavar="FILE", help="Catalog CSV/JSONL")
    stats.add_argument("--count", type=int, help="Sample count (instead of FILE)")
    stats.add_argument("--patch-px", type=int, default=1068, help="Patch size in pixels")
    stats.add_argument("--gsd", type=float, help="Patch GSD in metres; adds coverage areas")
    stats.add_argument("--histogram", action="store_true", help="Print row,count for FILE")
    stats.add_argument(
        "--reference", action="store_true", help="Print the reference dataset volume table"
    )
    stats.add_argument("--input-format", choices=("csv", "jsonl"))

    split = catalog_commands.add_parser("split", help="Export or apply split manifests")
    split_commands = split.add_subparsers(dest="split_command", metavar="ACTION")
    split_commands.required = True

    split_export = split_commands.add_parser(
        "export", help="Write a manifest of the (cell, source) pairs selected", formatter_class=defaults
    )
    _add_input_arguments(split_export)
    split_export.add_argument("--name", required=True, help="Split name, e.g. train")
    split_export.add_argument("--created", help="Pin the manifest timestamp (default: now)")
    add_selector_arguments(split_export)

    split_apply = split_commands.add_parser(
        "apply", help="Records of FILE covered by a manifest", formatter_class=defaults
    )
    _add_input_arguments(split_apply)
    split_apply.add_argument("manifest", metavar="MANIFEST")
    split_apply.add_argument("--format", choices=("csv", "jsonl"), default="csv", help="Output format")

    stac = catalog_commands.add_parser("stac", help="STAC-shaped export")
    stac_commands = stac.add_subparsers(dest="stac_command", metavar="ACTION")
    stac_commands.required = True
    stac_export = stac_commands.add_parser(
        "export", help="One STAC Item per selected record, as JSONL", formatter_class=defaults
    )
    _add_input_arguments(stac_export)
    add_selector_arguments(stac_export)

    # ------------------------------------------------------------------

    def ingest_command(args, config) -> int:
        catalog = Catalog(config.grid_spec())
        rejected = sum(
            _ingest_path(catalog, path, args.input_format).rejected for path in args.inputs
        )
        _write_catalog(catalog, config.output_format("csv"))
        return 1 if args.strict and rejected else 0

    def filter_command(args, config) -> int:
        catalog = load_catalog([args.input], config.grid_spec(), args.input_format)
        view = catalog.filter(predicate_from_args(args))
        logger.info(f"🔎 {len(view)}/{len(catalog)} records kept")
        _write_catalog(view, config.output_format("csv"))
        return 0

    def join_command(args, config) -> int:
        spec = config.grid_spec()
        joined = join_by_cell(load_catalog([args.left], spec), load_catalog([args.right], spec))
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(["cell", "records_a", "records_b"])
        for entry in joined:
            writer.writerow([format_cell(entry.cell), len(entry.records_a), len(entry.records_b)])
        logger.info(f"🔗 {len(joined)} shared cells")
        return 0

    def pair_command(args, config) -> int:
        spec = config.grid_spec()
        left = load_catalog([args.left], spec)
        right = load_catalog([args.right], spec)
        pairs = closest_time_pairing(left, right, args.max_delta)

        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(
            [
                "cell",
                "source_a",
                "product_id_a",
                "time_a",
                "source_b",
                "product_id_b",
                "time_b",
                "delta_seconds",
            ]
        )
        for pair in pairs:
            writer.writerow(
                [
                    format_cell(pair.cell),
                    pair.record_a.source,
                    pair.record_a.product_id,
                    format_timestamp(pair.record_a.time_start),
                    pair.record_b.source,
                    pair.record_b.product_id,
                    format_timestamp(pair.record_b.time_start),
                    pair.delta_seconds,
                ]
            )
        coverage = pairing_coverage(pairs, left)
        if coverage is not None:
            logger.info(f"🔗 {len(pairs)} pairs, {coverage:.1%} of A's cells paired")
        return 0

    def stats_command(args, config) -> int:
        if args.reference:
            writer = csv.writer(sys.stdout, lineterminator="\n")
            writer.writerow(["id", "name", "count", "patch_px", "printed_gigapixels", "gigapixels"])
            for entry in get_all_references():
                writer.writerow(
                    [
                        entry["id"],
                        entry["name"],
                        entry["count"],
                        entry["patch_px"],
                        f"{entry['gigapixels']:.1f}",
                        f"{volume_gigapixels(entry['count'], entry['patch_px']):.1f}",
                    ]
                )
            return 0

        if (args.input is None) == (args.count is None):
            raise InvalidParameterError("Give exactly one of FILE, --count or --reference")

        spec = config.grid_spec()
        if args.count is not None:
            volume = volume_gigapixels(args.count, args.patch_px)
            if args.gsd is None:
                sys.stdout.write(f"{volume:.1f}\n")
                return 0
            coverage = coverage_from_count(spec, args.count, args.patch_px, args.gsd)
        else:
            catalog = load_catalog([args.input], spec, args.input_format)
            coverage = coverage_stats(catalog, args.patch_px, args.gsd or 10.0)
            volume = volume_gigapixels(len(catalog), args.patch_px)
            if args.histogram:
                writer = csv.writer(sys.stdout, lineterminator="\n")
                writer.writerow(["row", "cells"])
                for row, count in coverage.per_row_histogram.items():
                    writer.writerow([row, count])
                return 0

        write_text_block(
            {
                "cells": coverage.cell_count,
                "gigapixels": f"{volume:.1f}",
                "area_with_overlap_km2": f"{coverage.area_with_overlap_km2:.1f}",
                "area_without_overlap_km2": f"{coverage.area_without_overlap_km2:.1f}",
            },
            sys.stdout,
        )
        return 0

    def split_export_command(args, config) -> int:
        catalog = load_catalog([args.input], config.grid_spec(), args.input_format)
        created = parse_timestamp(args.created) if args.created else None
        manifest = export_split(catalog, args.name, predicate_from_args(args), created)
        manifest.dump(sys.stdout)
        return 0

    def split_apply_command(args, config) -> int:
        catalog = load_catalog([args.input], config.grid_spec(), args.input_format)
        with open(args.manifest, encoding="utf-8") as stream:
            manifest = SplitManifest.load(stream)
        application = apply_split(catalog, manifest)
        _write_catalog(application.view, config.output_format("csv"))
        return 0

    def stac_export_command(args, config) -> int:
        catalog = load_catalog([args.input], config.grid_spec(), args.input_format)
        view = catalog.filter(predicate_from_args(args))
        count = write_jsonl(export_stac_items(catalog, view), sys.stdout)
        logger.info(f"🗂️ {count} STAC items written")
        return 0

    ingest.set_defaults(handler=ingest_command)
    filter_parser.set_defaults(handler=filter_command)
    join.set_defaults(handler=join_command)
    pair.set_defaults(handler=pair_command)
    stats.set_defaults(handler=stats_command)
    split_export.set_defaults(handler=split_export_command)
    split_apply.set_defaults(handler=split_apply_command)
    stac_export.set_defaults(handler=stac_export_command)
