# terragrid/commands/grid.py
"""Grid query commands: point enumeration, footprints and patch checks."""

import argparse
import logging
import sys

from terragrid.core.grid import (
    cell_footprint,
    check_patch_alignment,
    cells_in_bbox,
    cells_in_radius,
    col_range,
    great_circle_km,
    lon_spacing_deg,
    num_cols,
    parse_cell,
    row_latitude,
)
from terragrid.utils.formatters import (
    footprint_features,
    points_feature_collection,
    write_geojson,
    write_points_csv,
    write_text_block,
)
from terragrid.utils.helpers import parse_bbox, parse_float_list, parse_point

logger = logging.getLogger(__name__)


def _write_points(points, config):
    if config.output_format("csv") == "geojson":
        write_geojson(points_feature_collection(points), sys.stdout)
        return
    count = write_points_csv(points, sys.stdout)
    logger.info(f"📍 {count} grid points")


def setup_grid_commands(subparsers):
    """Setup grid query commands."""
    grid_parser = subparsers.add_parser("grid", help="Query grid points and cell geometry")
    grid_commands = grid_parser.add_subparsers(dest="grid_command", metavar="ACTION")
    grid_commands.required = True

    points = grid_commands.add_parser(
        "points",
        help="Anchors inside a latitude/longitude box",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    points.add_argument(
        "--bbox",
        required=True,
        help="LAT_MIN,LAT_MAX,LON_MIN,LON_MAX; LON_MIN > LON_MAX crosses the antimeridian "
        "(write --bbox=... for negative values)",
    )
    points.add_argument("--format", choices=("csv", "geojson"), default="csv", help="Output format")

    radius = grid_commands.add_parser(
        "radius",
        help="Anchors within a great-circle distance of a point",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    radius.add_argument("--center", required=True, help="LAT,LON (write --center=... for negatives)")
    radius.add_argument("--km", type=float, required=True, help="Radius in km")
    radius.add_argument("--format", choices=("csv", "geojson"), default="csv", help="Output format")

    check_patch = grid_commands.add_parser(
        "check-patch",
        help="Check that a patch covers whole pixels in every band (exit 1 if not)",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    check_patch.add_argument("--px", type=int, required=True, help="Patch size at the finest GSD")
    check_patch.add_argument(
        "--gsd", default="10,20,60", help="Comma-separated band GSDs in metres"
    )

    footprint = grid_commands.add_parser(
        "footprint",
        help="Nominal bounds of a cell (and its patch square) as GeoJSON",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    footprint.add_argument("cell", metavar="CELL")
    footprint.add_argument("--patch-px", type=int, help="Patch size in pixels, e.g. 1068")
    footprint.add_argument("--gsd", type=float, help="Patch GSD in metres, e.g. 10")

    row = grid_commands.add_parser("row", help="Latitude and column layout of one row")
    row.add_argument("row", type=int, help="Signed row index (0 = equator)")

    distance = grid_commands.add_parser(
        "distance", help="Great-circle distance in km between two LAT,LON points"
    )
    distance.add_argument("--from", dest="origin", required=True, help="LAT,LON")
    distance.add_argument("--to", dest="target", required=True, help="LAT,LON")

    def points_command(args, config) -> int:
        box = parse_bbox(args.bbox)
        spec = config.grid_spec()
        result = cells_in_bbox(spec, box.lat_min, box.lat_max, box.lon_min, box.lon_max)
        _write_points(result, config)
        return 0

    def radius_command(args, config) -> int:
        result = cells_in_radius(config.grid_spec(), parse_point(args.center), args.km)
        _write_points(result, config)
        return 0

    def check_patch_command(args, config) -> int:
        report = check_patch_alignment(args.px, parse_float_list(args.gsd))
        sys.stdout.write("gsd_m,pixels,aligned\n")
        for band in report.bands:
            sys.stdout.write(f"{band.gsd_m:g},{band.pixels},{str(band.aligned).lower()}\n")
        if report.passed:
            logger.info(f"✅ {args.px} px patch aligns with every band")
            return 0
        logger.warning(f"❌ {args.px} px patch does not divide evenly into every band")
        return 1

    def footprint_command(args, config) -> int:
        result = cell_footprint(config.grid_spec(), parse_cell(args.cell), args.patch_px, args.gsd)
        write_geojson(footprint_features(result), sys.stdout)
        return 0

    def row_command(args, config) -> int:
        spec = config.grid_spec()
        col_min, col_max = col_range(spec, args.row)
        write_text_block(
            {
                "row": args.row,
                "lat_deg": row_latitude(spec, args.row),
                "columns": num_cols(spec, args.row),
                "lon_spacing_deg": lon_spacing_deg(spec, args.row),
                "col_min": col_min,
                "col_max": col_max,
            },
            sys.stdout,
        )
        return 0

    def distance_command(args, config) -> int:
        km = great_circle_km(
            parse_point(args.origin), parse_point(args.target), config.EARTH_RADIUS_KM
        )
        sys.stdout.write(f"{km:.6f}\n")
        return 0

    points.set_defaults(handler=points_command)
    radius.set_defaults(handler=radius_command)
    check_patch.set_defaults(handler=check_patch_command)
    footprint.set_defaults(handler=footprint_command)
    row.set_defaults(handler=row_command)
    distance.set_defaults(handler=distance_command)
