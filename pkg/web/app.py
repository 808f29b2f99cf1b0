"""Flask JSON query service over the grid and an optional catalog."""

import itertools
import logging
import math

from flask import Flask, jsonify, request

from terragrid.core.catalog import Catalog, coverage_stats, volume_gigapixels
from terragrid.core.errors import InvalidParameterError, OutOfRangeError, TerragridError
from terragrid.core.grid import (
    cell_footprint,
    cell_to_coords,
    cells_in_bbox,
    cells_in_radius,
    coords_to_cell,
    format_cell,
    grid_summary,
    make_grid_spec,
    parse_cell,
)
from terragrid.utils.formatters import footprint_features, points_feature_collection
from terragrid.utils.helpers import build_predicate, parse_bbox
from web.config import WebConfig

# Setup logging
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)


def _float_arg(name, default=None):
    raw = request.args.get(name)
    if raw is None or raw == "":
        if default is None:
            raise InvalidParameterError(f"Missing query parameter '{name}'")
        return default
    try:
        value = float(raw)
    except ValueError:
        raise InvalidParameterError(f"Query parameter '{name}' must be a number, got '{raw}'") from None
    if not math.isfinite(value):
        raise InvalidParameterError(f"Query parameter '{name}' must be finite")
    return value


def _optional_float_arg(name):
    return _float_arg(name) if request.args.get(name) else None


def _int_arg(name, default=None):
    raw = request.args.get(name)
    if raw is None or raw == "":
        return default
    if not raw.isdigit() or int(raw) == 0:
        raise InvalidParameterError(f"Query parameter '{name}' must be a positive integer, got '{raw}'")
    return int(raw)


def _point_dict(point):
    return {
        "cell": format_cell(point.cell),
        "row": point.cell.row,
        "col": point.cell.col,
        "lat": point.lat_deg,
        "lon": point.lon_deg,
    }


def create_app(config=WebConfig, catalog=None) -> Flask:
    """Build the app; the catalog defaults to config.TERRAGRID_CATALOG (or an empty one)."""
    app = Flask(__name__)
    app.config.from_object(config)

    spec = make_grid_spec(app.config["TERRAGRID_SPACING_KM"], app.config["TERRAGRID_EARTH_RADIUS_KM"])
    if catalog is None:
        path = app.config.get("TERRAGRID_CATALOG")
        if path:
            catalog, report = Catalog.from_file(path, spec)
            logger.info(
                f"📥 Catalog {path}: {report.inserted} records, {report.rejected} rejected rows"
            )
        else:
            catalog = Catalog(spec)
            logger.info("No TERRAGRID_CATALOG set, catalog endpoints serve an empty catalog")
    elif catalog.spec != spec:
        raise InvalidParameterError(f"Catalog grid {catalog.spec!r} differs from service grid {spec!r}")

    max_results = app.config["MAX_RESULTS"]

    def _capped(items, what):
        selected = list(itertools.islice(items, max_results + 1))
        if len(selected) > max_results:
            raise InvalidParameterError(
                f"Query returns more than {max_results} {what}; narrow it down"
            )
        return selected

    # ============================================================================
    # Error Handlers
    # ============================================================================

    @app.errorhandler(OutOfRangeError)
    def handle_unknown_cell(error):
        return jsonify({"error": str(error)}), 404

    @app.errorhandler(TerragridError)
    def handle_domain_error(error):
        return jsonify({"error": str(error)}), 400

    # ============================================================================
    # Grid Routes
    # ============================================================================

    @app.route("/api/cell/encode", methods=["GET"])
    def api_cell_encode():
        """Cell containing ?lat=&lon=."""
        cell = coords_to_cell(spec, _float_arg("lat"), _float_arg("lon"))
        return jsonify(_point_dict(cell_to_coords(spec, cell)))

    @app.route("/api/cell/<cell_id>", methods=["GET"])
    def api_cell(cell_id):
        """Anchor of a cell."""
        return jsonify(_point_dict(cell_to_coords(spec, parse_cell(cell_id))))

    @app.route("/api/cell/<cell_id>/footprint", methods=["GET"])
    def api_cell_footprint(cell_id):
        """Nominal bounds, plus the patch square when ?patch_px=&gsd= are given."""
        footprint = cell_footprint(
            spec,
            parse_cell(cell_id),
            _int_arg("patch_px"),
            _optional_float_arg("gsd"),
        )
        return jsonify(footprint_features(footprint))

    @app.route("/api/grid/summary", methods=["GET"])
    def api_grid_summary():
        return jsonify(grid_summary(spec))

    @app.route("/api/grid/points", methods=["GET"])
    def api_grid_points():
        """Anchors inside ?bbox=LAT_MIN,LAT_MAX,LON_MIN,LON_MAX as GeoJSON."""
        raw = request.args.get("bbox")
        if not raw:
            raise InvalidParameterError("Missing query parameter 'bbox'")
        box = parse_bbox(raw)
        points = _capped(
            cells_in_bbox(spec, box.lat_min, box.lat_max, box.lon_min, box.lon_max), "points"
        )
        return jsonify(points_feature_collection(points))

    @app.route("/api/grid/radius", methods=["GET"])
    def api_grid_radius():
        """Anchors within ?km= of ?lat=&lon= as GeoJSON."""
        center = (_float_arg("lat"), _float_arg("lon"))
        points = _capped(cells_in_radius(spec, center, _float_arg("km")), "points")
        return jsonify(points_feature_collection(points))

    # ============================================================================
    # Catalog Routes
    # ============================================================================

    @app.route("/api/catalog/cell/<cell_id>", methods=["GET"])
    def api_catalog_cell(cell_id):
        """All records of one cell."""
        cell = parse_cell(cell_id)
        if cell not in catalog:
            return jsonify({"error": f"No records for cell {format_cell(cell)}"}), 404
        return jsonify({"cell": format_cell(cell), "records": [r.to_dict() for r in catalog.records_for(cell)]})

    @app.route("/api/catalog/search", methods=["GET"])
    def api_catalog_search():
        """Records matching the selector query parameters."""
        predicate = build_predicate(
            sources=request.args.get("sources"),
            start=request.args.get("start"),
            end=request.args.get("end"),
            max_cloud=_optional_float_arg("max_cloud"),
            max_nodata=_optional_float_arg("max_nodata"),
            bbox=request.args.get("bbox"),
            cells=request.args.get("cells"),
            include_unknown=request.args.get("include_unknown", "false").lower() in ("1", "true"),
        )
        records = _capped(iter(catalog.filter(predicate)), "records")
        return jsonify({"count": len(records), "records": [r.to_dict() for r in records]})

    @app.route("/api/catalog/stats", methods=["GET"])
    def api_catalog_stats():
        """Volume and coverage of the served catalog for ?patch_px=&gsd=."""
        patch_px = _int_arg("patch_px", 1068)
        gsd = _float_arg("gsd", 10.0)
        coverage = coverage_stats(catalog, patch_px, gsd)
        return jsonify(
            {
                "records": len(catalog),
                "cells": coverage.cell_count,
                "sources": sorted(catalog.source_names),
                "pixels": len(catalog) * patch_px**2,
                "gigapixels": volume_gigapixels(len(catalog), patch_px),
                "area_with_overlap_km2": coverage.area_with_overlap_km2,
                "area_without_overlap_km2": coverage.area_without_overlap_km2,
            }
        )

    return app


# ============================================================================
# Run Web Server
# ============================================================================


def run_web():
    """Run the Flask query service."""
    logger.info("=" * 80)
    logger.info("🚀 Starting terragrid query service...")
    logger.info(f"   Host: {WebConfig.HOST}")
    logger.info(f"   Port: {WebConfig.PORT}")
    logger.info(f"   Catalog: {WebConfig.TERRAGRID_CATALOG or 'none'}")
    logger.info("=" * 80)

    app = create_app()
    app.run(
        host=WebConfig.HOST,
        port=WebConfig.PORT,
        debug=WebConfig.DEBUG,
        use_reloader=False,
    )


if __name__ == "__main__":
    run_web()
