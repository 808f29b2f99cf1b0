# terragrid/utils/helpers.py
"""Helper functions shared by the library and the command handlers."""

import argparse
import math
from datetime import datetime, timezone
from typing import List, Optional, Tuple

from terragrid.core.errors import InvalidParameterError
from terragrid.core.grid import BoundingBox, parse_cell
from terragrid.utils.timestamps import (  # noqa: F401
    TIMESTAMP_FORMAT,
    epoch_seconds,
    format_timestamp,
    parse_optional_timestamp,
    parse_timestamp,
)


def parse_float_list(text: str, expected: Optional[int] = None) -> List[float]:
    """Parse '1,2,3' into floats, optionally checking the number of values."""
    try:
        values = [float(part) for part in text.split(",")]
    except ValueError as e:
        raise InvalidParameterError(f"Expected comma-separated numbers, got '{text}'") from e
    if expected is not None and len(values) != expected:
        raise InvalidParameterError(f"Expected {expected} values, got {len(values)} in '{text}'")
    if not all(math.isfinite(value) for value in values):
        raise InvalidParameterError(f"Non-finite value in '{text}'")
    return values


def parse_point(text: str) -> Tuple[float, float]:
    lat, lon = parse_float_list(text, expected=2)
    return lat, lon


def parse_bbox(text: str) -> BoundingBox:
    """Parse 'LAT_MIN,LAT_MAX,LON_MIN,LON_MAX'."""
    return BoundingBox(*parse_float_list(text, expected=4))


def looks_like_bbox(text: str) -> bool:
    try:
        parse_float_list(text, expected=4)
    except InvalidParameterError:
        return False
    return True


# ============================================================================
# argparse plumbing
# ============================================================================


def add_selector_arguments(parser: argparse.ArgumentParser):
    """Flags mirroring the catalog filter predicate."""
    group = parser.add_argument_group("selection")
    group.add_argument("--sources", help="Comma-separated source names, e.g. S2-L1C,S1-RTC")
    group.add_argument("--start", help="Earliest time_start (ISO-8601, inclusive)")
    group.add_argument("--end", help="Latest time_start (ISO-8601, inclusive)")
    group.add_argument(
        "--max-cloud", type=float, help="Keep records with cloud_fraction strictly below this"
    )
    group.add_argument(
        "--max-nodata", type=float, help="Keep records with nodata_fraction at or below this"
    )
    group.add_argument(
        "--bbox", help="LAT_MIN,LAT_MAX,LON_MIN,LON_MAX (write --bbox=... for negative values)"
    )
    group.add_argument("--cells", help="Comma-separated cell ids, e.g. 201U_54L,0U_0R")
    group.add_argument(
        "--include-unknown",
        action="store_true",
        help="Let records without a cloud/nodata value pass the thresholds",
    )


def build_predicate(
    sources: Optional[str] = None,
    start: Optional[str] = None,
    end: Optional[str] = None,
    max_cloud: Optional[float] = None,
    max_nodata: Optional[float] = None,
    bbox: Optional[str] = None,
    cells: Optional[str] = None,
    include_unknown: bool = False,
):
    """Build a FilterPredicate from selector strings (CLI flags or query parameters)."""
    from terragrid.core.catalog import FilterPredicate

    time_range = None
    if start or end:
        # Open ends stay unbounded
        low = parse_timestamp(start) if start else datetime.min.replace(tzinfo=timezone.utc)
        high = parse_timestamp(end) if end else datetime.max.replace(tzinfo=timezone.utc)
        time_range = (low, high)

    return FilterPredicate(
        sources=[s.strip() for s in sources.split(",") if s.strip()] if sources else None,
        time_range=time_range,
        max_cloud=max_cloud,
        max_nodata=max_nodata,
        bbox=parse_bbox(bbox) if bbox else None,
        cells=[parse_cell(c) for c in cells.split(",") if c.strip()] if cells else None,
        include_unknown=include_unknown,
    )


def predicate_from_args(args: argparse.Namespace):
    """Build a FilterPredicate from the selector flags."""
    return build_predicate(
        sources=args.sources,
        start=args.start,
        end=args.end,
        max_cloud=args.max_cloud,
        max_nodata=args.max_nodata,
        bbox=args.bbox,
        cells=args.cells,
        include_unknown=args.include_unknown,
    )
