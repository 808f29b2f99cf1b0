# terragrid/utils/formatters.py
"""Output renderers: CSV, GeoJSON, JSONL and plain-text blocks.

Every renderer writes to a stream passed in by the caller and produces the
same bytes for the same input (LF line endings, fixed float formatting).
"""

import csv
import json
from typing import IO, Any, Iterable, Mapping

import geojson

from terragrid.core.grid import CellFootprint, GridPoint, format_cell

POINT_CSV_HEADER = ("cell", "row", "col", "lat", "lon")
COORD_DECIMALS = 9


def _coord(value: float) -> str:
    return f"{value:.{COORD_DECIMALS}f}"


def write_points_csv(points: Iterable[GridPoint], stream: IO[str]) -> int:
    """Stream points as CSV rows; returns the number written."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(POINT_CSV_HEADER)
    count = 0
    for point in points:
        writer.writerow(
            [
                format_cell(point.cell),
                point.cell.row,
                point.cell.col,
                _coord(point.lat_deg),
                _coord(point.lon_deg),
            ]
        )
        count += 1
    return count


def point_feature(point: GridPoint) -> geojson.Feature:
    return geojson.Feature(
        geometry=geojson.Point((point.lon_deg, point.lat_deg), precision=COORD_DECIMALS),
        properties={
            "cell": format_cell(point.cell),
            "row": point.cell.row,
            "col": point.cell.col,
        },
    )


def points_feature_collection(points: Iterable[GridPoint]) -> geojson.FeatureCollection:
    return geojson.FeatureCollection([point_feature(point) for point in points])


def footprint_features(footprint: CellFootprint) -> geojson.FeatureCollection:
    """Nominal box (and patch square, if any) as Polygon features."""
    features = [
        geojson.Feature(
            geometry=geojson.Polygon(
                [footprint.nominal_bounds.ring()], precision=COORD_DECIMALS
            ),
            properties={"cell": format_cell(footprint.cell), "kind": "nominal"},
        )
    ]
    if footprint.patch_bounds is not None:
        features.append(
            geojson.Feature(
                geometry=geojson.Polygon(
                    [footprint.patch_bounds.ring()], precision=COORD_DECIMALS
                ),
                properties={
                    "cell": format_cell(footprint.cell),
                    "kind": "patch",
                    "side_km": footprint.patch_side_km,
                },
            )
        )
    return geojson.FeatureCollection(features)


def write_geojson(obj: Any, stream: IO[str]):
    stream.write(geojson.dumps(obj, sort_keys=True))
    stream.write("\n")


def write_jsonl(objects: Iterable[Mapping[str, Any]], stream: IO[str], sort_keys: bool = False) -> int:
    count = 0
    for obj in objects:
        stream.write(json.dumps(obj, sort_keys=sort_keys, ensure_ascii=False) + "\n")
        count += 1
    return count


def write_text_block(values: Mapping[str, Any], stream: IO[str]):
    """Aligned 'key: value' lines; None prints as 'n/a'."""
    width = max((len(key) for key in values), default=0)
    for key, value in values.items():
        if value is None:
            shown = "n/a"
        elif isinstance(value, float):
            shown = f"{value:.6g}"
        else:
            shown = str(value)
        stream.write(f"{key.ljust(width)} : {shown}\n")
