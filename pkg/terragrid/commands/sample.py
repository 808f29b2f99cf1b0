# terragrid/commands/sample.py
"""Scene-selection campaign commands."""

import argparse
import csv
import json
import logging
import os
import sys

from terragrid.core.catalog import Catalog
from terragrid.core.errors import InvalidParameterError
from terragrid.core.grid import cells_in_bbox, parse_cell, validate_cell
from terragrid.core.provider import SyntheticProvider
from terragrid.core.sampler import (
    SamplerConfig,
    SelectionResult,
    campaign_stats,
    run_campaign,
)
from terragrid.utils.formatters import write_jsonl, write_text_block
from terragrid.utils.helpers import looks_like_bbox, parse_bbox, parse_timestamp

logger = logging.getLogger(__name__)


def read_cells(source: str, spec):
    """Cells from a bbox string, a points CSV (with a 'cell' column) or one id per line."""
    if not os.path.exists(source) and looks_like_bbox(source):
        box = parse_bbox(source)
        return [
            point.cell
            for point in cells_in_bbox(spec, box.lat_min, box.lat_max, box.lon_min, box.lon_max)
        ]

    with open(source, encoding="utf-8", newline="") as stream:
        lines = stream.read().splitlines()
    if lines and lines[0].split(",")[0].strip() == "cell":
        return [validate_cell(spec, parse_cell(row["cell"])) for row in csv.DictReader(lines)]
    return [
        validate_cell(spec, parse_cell(line.strip()))
        for line in lines
        if line.strip() and not line.lstrip().startswith("#")
    ]


def read_results(path: str):
    results = []
    with open(path, encoding="utf-8") as stream:
        for line_number, line in enumerate(stream, start=1):
            if not line.strip():
                continue
            try:
                results.append(SelectionResult.from_dict(json.loads(line)))
            except json.JSONDecodeError as e:
                raise InvalidParameterError(f"{path}:{line_number}: invalid JSON ({e.msg})") from e
    return results


def setup_sample_commands(subparsers):
    """Setup sampling campaign commands."""
    sample_parser = subparsers.add_parser("sample", help="Run and summarise scene-selection campaigns")
    sample_commands = sample_parser.add_subparsers(dest="sample_command", metavar="ACTION")
    sample_commands.required = True

    run = sample_commands.add_parser(
        "run",
        help="Select one scene per cell",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    run.add_argument(
        "--cells",
        required=True,
        help="Cell list file (ids or a points CSV) or a LAT_MIN,LAT_MAX,LON_MIN,LON_MAX box",
    )
    run.add_argument("--provider", required=True, help="Synthetic provider JSONL file")
    run.add_argument("--seed", type=int, required=True, help="Campaign seed (64-bit unsigned)")
    run.add_argument("--from", dest="available_from", required=True, help="Start of availability (ISO-8601)")
    run.add_argument("--to", dest="available_to", required=True, help="End of availability (ISO-8601)")
    run.add_argument("--accept", type=float, default=0.25, help="Refined cloud ceiling (strict)")
    run.add_argument("--fallback", type=float, default=0.50, help="Relaxed ceiling (strict)")
    run.add_argument("--after", type=int, default=50, help="Inspections before the fallback applies")
    run.add_argument("--window-months", type=int, default=4, help="Window length in calendar months")
    run.add_argument("--max-nodata", type=float, default=0.05, help="No-data ceiling (inclusive)")
    run.add_argument("--source", default="S2-L1C", help="Source name for the emitted records")
    run.add_argument("--workers", type=int, default=1, help="Concurrent inspections")
    run.add_argument("--results", help="Write SelectionResults JSONL here instead of stdout")
    run.add_argument("--catalog", help="Write the selected records as catalog CSV here")
    run.add_argument("--progress", action="store_true", help="Progress bar on stderr")

    stats = sample_commands.add_parser("stats", help="Cloud statistics of a results file")
    stats.add_argument("results", metavar="RESULTS", help="SelectionResults JSONL")
    stats.add_argument("--format", choices=("text", "jsonl"), default="text")

    def run_command(args, config) -> int:
        spec = config.grid_spec()
        sampler_config = SamplerConfig(
            availability_range=(parse_timestamp(args.available_from), parse_timestamp(args.available_to)),
            seed=args.seed,
            window_months=args.window_months,
            accept_cloud=args.accept,
            fallback_cloud=args.fallback,
            fallback_after=args.after,
            max_nodata=args.max_nodata,
            source=args.source,
        )
        cells = read_cells(args.cells, spec)
        provider = SyntheticProvider.from_file(args.provider)
        campaign = run_campaign(
            cells, provider, sampler_config, workers=config.WORKERS, progress=args.progress
        )

        rows = (result.to_dict() for result in campaign.results)
        if args.results:
            with open(args.results, "w", encoding="utf-8", newline="\n") as stream:
                write_jsonl(rows, stream)
        else:
            write_jsonl(rows, sys.stdout)

        if args.catalog:
            with open(args.catalog, "w", encoding="utf-8", newline="") as stream:
                Catalog(spec, campaign.records).write_csv(stream)
            logger.info(f"🗂️ {len(campaign.records)} records written to {args.catalog}")
        return 0

    def stats_command(args, config) -> int:
        summary = campaign_stats(read_results(args.results))
        if config.output_format("text") == "jsonl":
            write_jsonl([summary.to_dict()], sys.stdout)
        else:
            write_text_block(summary.to_dict(), sys.stdout)
        return 0

    run.set_defaults(handler=run_command)
    stats.set_defaults(handler=stats_command)
