# terragrid/commands/cell.py
"""Cell encode/decode commands."""

import argparse
import logging
import sys

from terragrid.core.grid import cell_to_coords, coords_to_cell, format_cell, parse_cell
from terragrid.utils.formatters import (
    points_feature_collection,
    write_geojson,
    write_points_csv,
)

logger = logging.getLogger(__name__)


def setup_cell_commands(subparsers):
    """Setup cell-related commands."""
    cell_parser = subparsers.add_parser("cell", help="Convert between coordinates and cell ids")
    cell_commands = cell_parser.add_subparsers(dest="cell_command", metavar="ACTION")
    cell_commands.required = True

    encode = cell_commands.add_parser(
        "encode",
        help="Cell id of the cell containing a coordinate",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    encode.add_argument("--lat", type=float, required=True, help="Latitude in degrees")
    encode.add_argument("--lon", type=float, required=True, help="Longitude in degrees")
    encode.add_argument(
        "--format", choices=("text", "csv", "geojson"), default="text", help="Output format"
    )

    decode = cell_commands.add_parser(
        "decode",
        help="Anchor coordinates of one or more cell ids",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    decode.add_argument("cells", nargs="+", metavar="CELL", help="Cell id, e.g. 201U_54L")
    decode.add_argument("--format", choices=("csv", "geojson"), default="csv", help="Output format")

    def encode_command(args, config) -> int:
        spec = config.grid_spec()
        cell = coords_to_cell(spec, args.lat, args.lon)
        fmt = config.output_format("text")
        if fmt == "text":
            sys.stdout.write(format_cell(cell) + "\n")
        elif fmt == "csv":
            write_points_csv([cell_to_coords(spec, cell)], sys.stdout)
        else:
            write_geojson(points_feature_collection([cell_to_coords(spec, cell)]), sys.stdout)
        return 0

    def decode_command(args, config) -> int:
        spec = config.grid_spec()
        # Parse everything first so a bad id produces no partial output
        points = [cell_to_coords(spec, parse_cell(text)) for text in args.cells]
        if config.output_format("csv") == "geojson":
            write_geojson(points_feature_collection(points), sys.stdout)
        else:
            write_points_csv(points, sys.stdout)
        return 0

    encode.set_defaults(handler=encode_command)
    decode.set_defaults(handler=decode_command)
