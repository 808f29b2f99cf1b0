# terragrid/core/grid.py
"""
Grid construction, cell naming and spatial queries.

The grid is defined by a single nominal spacing D. Rows are evenly spaced in
latitude with row 0 on the equator; every row gets its own column count so
neighbouring anchors stay close to D apart at every latitude.
"""

import hashlib
import logging
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any, Dict, Iterator, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from terragrid.core.errors import (
    CellParseError,
    DegenerateFootprintError,
    InvalidParameterError,
    OutOfRangeError,
)

logger = logging.getLogger(__name__)

DEFAULT_SPACING_KM = 10.0
DEFAULT_EARTH_RADIUS_KM = 6378.137  # WGS84 equatorial radius

# Inputs closer than this to an anchor snap onto it
ANCHOR_TOLERANCE_DEG = 1e-12

# Below this cos(lat) a patch has no finite longitudinal extent
_MIN_PARALLEL_SCALE = 1e-9


@dataclass(frozen=True)
class GridSpec:
    """Single-parameter grid definition plus its derived row layout."""

    spacing_km: float
    earth_radius_km: float
    n_rows: int
    lat_spacing_deg: float

    @property
    def row_min(self) -> int:
        return -(self.n_rows // 2)

    @property
    def row_max(self) -> int:
        return (self.n_rows + 1) // 2 - 1

    @cached_property
    def column_counts(self) -> np.ndarray:
        """Column count of every row, indexed by ``row - row_min``."""
        rows = np.arange(self.row_min, self.row_max + 1, dtype=np.float64)
        lats = rows * 180.0 / self.n_rows
        circumference = 2.0 * np.pi * self.earth_radius_km * np.cos(np.radians(lats))
        counts = np.ceil(circumference / self.spacing_km)
        return np.maximum(counts, 1.0).astype(np.int64)

    @property
    def total_points(self) -> int:
        """Number of anchors in the whole grid."""
        return int(self.column_counts.sum())

    @property
    def fingerprint(self) -> str:
        """Short stable hash of (D, R) used to tie manifests to a grid."""
        key = f"{self.spacing_km!r}:{self.earth_radius_km!r}"
        return hashlib.sha256(key.encode("utf-8")).hexdigest()[:16]

    def __repr__(self):
        return (
            f"<GridSpec D={self.spacing_km}km R={self.earth_radius_km}km "
            f"rows={self.n_rows}>"
        )


@dataclass(frozen=True, order=True)
class CellId:
    """Signed (row, col) index: row > 0 is north ('U'), col > 0 is east ('R')."""

    row: int
    col: int

    def __str__(self):
        return format_cell(self)

    @classmethod
    def parse(cls, text: str) -> "CellId":
        return parse_cell(text)


@dataclass(frozen=True)
class GridPoint:
    """An anchor of the grid."""

    cell: CellId
    lat_deg: float
    lon_deg: float


class Bounds(NamedTuple):
    """Degree-space box (lat_min, lat_max, lon_min, lon_max)."""

    lat_min: float
    lat_max: float
    lon_min: float
    lon_max: float

    def ring(self):
        """Closed exterior ring as (lon, lat) pairs, counter-clockwise from SW."""
        return [
            (self.lon_min, self.lat_min),
            (self.lon_max, self.lat_min),
            (self.lon_max, self.lat_max),
            (self.lon_min, self.lat_max),
            (self.lon_min, self.lat_min),
        ]

    def bbox(self) -> Tuple[float, float, float, float]:
        """GeoJSON/STAC ordering: west, south, east, north."""
        return (self.lon_min, self.lat_min, self.lon_max, self.lat_max)

    def intersection(self, other: "Bounds") -> Optional["Bounds"]:
        lat_min = max(self.lat_min, other.lat_min)
        lat_max = min(self.lat_max, other.lat_max)
        lon_min = max(self.lon_min, other.lon_min)
        lon_max = min(self.lon_max, other.lon_max)
        if lat_min >= lat_max or lon_min >= lon_max:
            return None
        return Bounds(lat_min, lat_max, lon_min, lon_max)


@dataclass(frozen=True)
class CellFootprint:
    """Nominal cell box and, optionally, a patch square centred on the anchor."""

    cell: CellId
    nominal_bounds: Bounds
    patch_bounds: Optional[Bounds] = None
    patch_side_km: Optional[float] = None


@dataclass(frozen=True)
class BandAlignment:
    gsd_m: float
    pixels: Fraction
    aligned: bool


@dataclass(frozen=True)
class AlignmentReport:
    """Whether a patch size maps to whole pixels at every band resolution."""

    patch_px: int
    bands: Tuple[BandAlignment, ...]

    @property
    def passed(self) -> bool:
        return all(band.aligned for band in self.bands)


# ============================================================================
# Construction
# ============================================================================


def _require_finite_positive(name: str, value) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InvalidParameterError(f"{name} must be a number, got {value!r}")
    if not math.isfinite(value) or value <= 0:
        raise InvalidParameterError(f"{name} must be finite and positive, got {value}")
    return float(value)


def make_grid_spec(
    spacing_km: float = DEFAULT_SPACING_KM,
    earth_radius_km: float = DEFAULT_EARTH_RADIUS_KM,
) -> GridSpec:
    """Build a grid from its nominal spacing and the sphere radius."""
    spacing_km = _require_finite_positive("spacing_km", spacing_km)
    earth_radius_km = _require_finite_positive("earth_radius_km", earth_radius_km)

    half_circumference = math.pi * earth_radius_km
    if spacing_km > half_circumference:
        raise InvalidParameterError(
            f"spacing_km {spacing_km} exceeds half the circumference ({half_circumference:.3f} km)"
        )

    n_rows = math.ceil(half_circumference / spacing_km)
    spec = GridSpec(
        spacing_km=spacing_km,
        earth_radius_km=earth_radius_km,
        n_rows=n_rows,
        lat_spacing_deg=180.0 / n_rows,
    )
    logger.debug(f"Grid spec created: {spec!r}")
    return spec


# ============================================================================
# Rows and columns
# ============================================================================


def _check_row(spec: GridSpec, row: int):
    if not spec.row_min <= row <= spec.row_max:
        raise OutOfRangeError(
            f"Row {row} outside [{spec.row_min}, {spec.row_max}] for {spec!r}"
        )


def num_cols(spec: GridSpec, row: int) -> int:
    """Number of columns in a row, at least one even at a pole."""
    _check_row(spec, row)
    return int(spec.column_counts[row - spec.row_min])


def lon_spacing_deg(spec: GridSpec, row: int) -> float:
    return 360.0 / num_cols(spec, row)


def col_range(spec: GridSpec, row: int) -> Tuple[int, int]:
    """Inclusive (col_min, col_max) of a row."""
    n_cols = num_cols(spec, row)
    return -(n_cols // 2), (n_cols + 1) // 2 - 1


def row_latitude(spec: GridSpec, row: int) -> float:
    return row * 180.0 / spec.n_rows


def _col_longitude(n_cols: int, col: int) -> float:
    return col * 360.0 / n_cols


def validate_cell(spec: GridSpec, cell: CellId) -> CellId:
    _check_row(spec, cell.row)
    col_min, col_max = col_range(spec, cell.row)
    if not col_min <= cell.col <= col_max:
        raise OutOfRangeError(
            f"Column {cell.col} outside [{col_min}, {col_max}] for row {cell.row}"
        )
    return cell


def normalize_longitude(lon_deg: float) -> float:
    """Wrap a longitude into [-180, 180)."""
    return ((lon_deg + 180.0) % 360.0) - 180.0


# ============================================================================
# Coordinate mapping
# ============================================================================


def cell_to_coords(spec: GridSpec, cell: CellId) -> GridPoint:
    validate_cell(spec, cell)
    n_cols = num_cols(spec, cell.row)
    return GridPoint(
        cell=cell,
        lat_deg=row_latitude(spec, cell.row),
        lon_deg=_col_longitude(n_cols, cell.col),
    )


def _anchor_index(value: float, count: int, span: float) -> int:
    """Index i of the anchor at or below value, where anchors sit at i*span/count."""
    nearest = round(value * count / span)
    if abs(value - nearest * span / count) <= ANCHOR_TOLERANCE_DEG:
        return nearest
    return math.floor(value * count / span)


def _clamp(value: int, low: int, high: int) -> int:
    return max(low, min(high, value))


def coords_to_cell(spec: GridSpec, lat_deg: float, lon_deg: float) -> CellId:
    """Cell whose anchor is the south-west corner of the box holding the point."""
    if not (math.isfinite(lat_deg) and math.isfinite(lon_deg)):
        raise InvalidParameterError(f"Non-finite coordinates ({lat_deg}, {lon_deg})")
    if not -90.0 <= lat_deg <= 90.0:
        raise InvalidParameterError(f"Latitude {lat_deg} outside [-90, 90]")

    row = _clamp(_anchor_index(lat_deg, spec.n_rows, 180.0), spec.row_min, spec.row_max)
    n_cols = num_cols(spec, row)
    col_min, col_max = col_range(spec, row)
    col = _clamp(_anchor_index(normalize_longitude(lon_deg), n_cols, 360.0), col_min, col_max)
    return CellId(row, col)


# ============================================================================
# Cell names
# ============================================================================

_TOKEN_RE = re.compile(r"^(\d+)([A-Za-z]+)$")
_SEPARATOR_RE = re.compile(r"\s*[_,]\s*")
_ROW_SUFFIXES = {"U": 1, "D": -1}
_COL_SUFFIXES = {"R": 1, "L": -1}


def format_cell(cell: CellId) -> str:
    row_suffix = "U" if cell.row >= 0 else "D"
    col_suffix = "R" if cell.col >= 0 else "L"
    return f"{abs(cell.row)}{row_suffix}_{abs(cell.col)}{col_suffix}"


def _parse_token(token: str, suffixes: dict) -> int:
    match = _TOKEN_RE.match(token)
    if not match:
        raise CellParseError(f"Malformed cell token '{token}'", token=token)
    number, suffix = match.groups()
    sign = suffixes.get(suffix.upper())
    if sign is None:
        raise CellParseError(
            f"Unknown suffix '{suffix}' in token '{token}' (expected one of {'/'.join(suffixes)})",
            token=suffix,
        )
    return sign * int(number)


def parse_cell(text: str) -> CellId:
    """Parse '201U_54L' or '201U, 54L' (suffixes are case-insensitive)."""
    if not isinstance(text, str):
        raise CellParseError(f"Cell id must be a string, got {text!r}", token=repr(text))
    parts = _SEPARATOR_RE.split(text.strip())
    if len(parts) != 2:
        raise CellParseError(f"Missing or repeated separator in cell id '{text}'", token=text)
    return CellId(_parse_token(parts[0], _ROW_SUFFIXES), _parse_token(parts[1], _COL_SUFFIXES))


# ============================================================================
# Distances and queries
# ============================================================================


def great_circle_km(
    a: Tuple[float, float],
    b: Tuple[float, float],
    radius_km: float = DEFAULT_EARTH_RADIUS_KM,
) -> float:
    """Haversine distance between two (lat, lon) points in degrees."""
    for value in (*a, *b, radius_km):
        if not math.isfinite(value):
            raise InvalidParameterError(f"Non-finite input to great_circle_km: {value}")
    lat1, lon1 = math.radians(a[0]), math.radians(a[1])
    lat2, lon2 = math.radians(b[0]), math.radians(b[1])
    h = (
        math.sin((lat2 - lat1) / 2.0) ** 2
        + math.cos(lat1) * math.cos(lat2) * math.sin((lon2 - lon1) / 2.0) ** 2
    )
    return 2.0 * radius_km * math.asin(min(1.0, math.sqrt(h)))


@dataclass(frozen=True)
class BoundingBox:
    """Closed in latitude, half-open in longitude; lon_min > lon_max wraps."""

    lat_min: float
    lat_max: float
    lon_min: float
    lon_max: float

    def __post_init__(self):
        for value in (self.lat_min, self.lat_max, self.lon_min, self.lon_max):
            if not math.isfinite(value):
                raise InvalidParameterError(f"Non-finite bounding box value {value}")
        if self.lat_min > self.lat_max:
            raise InvalidParameterError(
                f"Inverted latitude interval [{self.lat_min}, {self.lat_max}]"
            )
        if self.lat_min < -90.0 or self.lat_max > 90.0:
            raise InvalidParameterError("Latitudes must lie within [-90, 90]")
        if not (-180.0 <= self.lon_min <= 180.0 and -180.0 <= self.lon_max <= 180.0):
            raise InvalidParameterError("Longitudes must lie within [-180, 180]")

    @property
    def wraps(self) -> bool:
        return self.lon_min > self.lon_max

    def contains_lat(self, lat: float) -> bool:
        return self.lat_min <= lat <= self.lat_max

    def contains_lon(self, lon: float) -> bool:
        if self.wraps:
            return lon >= self.lon_min or lon < self.lon_max
        return self.lon_min <= lon < self.lon_max

    def contains(self, lat: float, lon: float) -> bool:
        return self.contains_lat(lat) and self.contains_lon(lon)


def _bbox_columns(
    box: BoundingBox, n_cols: int, col_min: int, col_max: int
) -> List[range]:
    """Candidate columns (one column of slack on each side) in ascending order."""

    def span(lon_low: float, lon_high: float) -> Tuple[int, int]:
        low = math.ceil(lon_low * n_cols / 360.0) - 1
        high = math.floor(lon_high * n_cols / 360.0) + 1
        return max(col_min, low), min(col_max, high)

    if not box.wraps:
        low, high = span(box.lon_min, box.lon_max)
        return [range(low, high + 1)]

    west_low, west_high = span(-180.0, box.lon_max)
    east_low, east_high = span(box.lon_min, 180.0)
    if west_high + 1 >= east_low:
        return [range(col_min, col_max + 1)]
    return [range(west_low, west_high + 1), range(east_low, east_high + 1)]


def cells_in_bbox(
    spec: GridSpec,
    lat_min: float,
    lat_max: float,
    lon_min: float,
    lon_max: float,
) -> Iterator[GridPoint]:
    """Anchors inside the box, ordered by (row, col), generated lazily."""
    box = BoundingBox(lat_min, lat_max, lon_min, lon_max)
    first_row = max(spec.row_min, math.ceil(lat_min * spec.n_rows / 180.0) - 1)
    last_row = min(spec.row_max, math.floor(lat_max * spec.n_rows / 180.0) + 1)

    for row in range(first_row, last_row + 1):
        lat = row_latitude(spec, row)
        if not box.contains_lat(lat):
            continue
        n_cols = num_cols(spec, row)
        col_min, col_max = col_range(spec, row)
        for columns in _bbox_columns(box, n_cols, col_min, col_max):
            for col in columns:
                lon = _col_longitude(n_cols, col)
                if box.contains_lon(lon):
                    yield GridPoint(CellId(row, col), lat, lon)


def _radius_columns(
    lon_c: float, dlon: Optional[float], n_cols: int, col_min: int
) -> Sequence[int]:
    if dlon is None or dlon >= 180.0:
        return range(col_min, col_min + n_cols)
    low = math.floor((lon_c - dlon) * n_cols / 360.0) - 1
    high = math.ceil((lon_c + dlon) * n_cols / 360.0) + 1
    if high - low + 1 >= n_cols:
        return range(col_min, col_min + n_cols)
    return sorted({(col - col_min) % n_cols + col_min for col in range(low, high + 1)})


def cells_in_radius(
    spec: GridSpec,
    center: Tuple[float, float],
    radius_km: float,
) -> Iterator[GridPoint]:
    """Anchors within radius_km of center, scanning only rows the cap can reach."""
    if not math.isfinite(radius_km) or radius_km < 0:
        raise InvalidParameterError(f"Radius must be finite and non-negative, got {radius_km}")
    lat_c, lon_c = center
    if not (math.isfinite(lat_c) and math.isfinite(lon_c)):
        raise InvalidParameterError(f"Non-finite center ({lat_c}, {lon_c})")
    if not -90.0 <= lat_c <= 90.0:
        raise InvalidParameterError(f"Center latitude {lat_c} outside [-90, 90]")
    lon_c = normalize_longitude(lon_c)

    angular = radius_km / spec.earth_radius_km
    reach_deg = math.degrees(angular)
    lat_low, lat_high = lat_c - reach_deg, lat_c + reach_deg
    first_row = max(spec.row_min, math.floor(lat_low * spec.n_rows / 180.0) - 1)
    last_row = min(spec.row_max, math.ceil(lat_high * spec.n_rows / 180.0) + 1)

    # Caps touching a pole or a hemisphere wide span every longitude
    dlon = None
    if angular < math.pi / 2 and lat_low > -90.0 and lat_high < 90.0:
        ratio = math.sin(angular) / math.cos(math.radians(lat_c))
        if ratio < 1.0:
            dlon = math.degrees(math.asin(ratio))

    for row in range(first_row, last_row + 1):
        lat = row_latitude(spec, row)
        n_cols = num_cols(spec, row)
        col_min, _ = col_range(spec, row)
        for col in _radius_columns(lon_c, dlon, n_cols, col_min):
            lon = _col_longitude(n_cols, col)
            if great_circle_km((lat_c, lon_c), (lat, lon), spec.earth_radius_km) <= radius_km:
                yield GridPoint(CellId(row, col), lat, lon)


# ============================================================================
# Footprints
# ============================================================================


def cell_footprint(
    spec: GridSpec,
    cell: CellId,
    patch_px: Optional[int] = None,
    gsd_m: Optional[float] = None,
) -> CellFootprint:
    """Nominal box of a cell, plus a centred patch square when patch_px and gsd_m are given."""
    point = cell_to_coords(spec, cell)
    n_cols = num_cols(spec, cell.row)
    nominal = Bounds(
        lat_min=point.lat_deg,
        lat_max=min(90.0, row_latitude(spec, cell.row + 1)),
        lon_min=point.lon_deg,
        lon_max=_col_longitude(n_cols, cell.col + 1),
    )

    if patch_px is None and gsd_m is None:
        return CellFootprint(cell=cell, nominal_bounds=nominal)
    if patch_px is None or gsd_m is None:
        raise InvalidParameterError("patch_px and gsd_m must be given together")
    if isinstance(patch_px, bool) or not isinstance(patch_px, int) or patch_px <= 0:
        raise InvalidParameterError(f"patch_px must be a positive integer, got {patch_px!r}")
    gsd_m = _require_finite_positive("gsd_m", gsd_m)

    side_km = patch_px * gsd_m / 1000.0
    km_per_deg = math.pi * spec.earth_radius_km / 180.0
    parallel_scale = math.cos(math.radians(point.lat_deg))
    if parallel_scale < _MIN_PARALLEL_SCALE:
        raise DegenerateFootprintError(
            f"Cell {cell} sits on a pole; a {side_km} km patch has no longitudinal extent"
        )

    half_lat = side_km / 2.0 / km_per_deg
    half_lon = side_km / 2.0 / (km_per_deg * parallel_scale)
    patch = Bounds(
        lat_min=point.lat_deg - half_lat,
        lat_max=point.lat_deg + half_lat,
        lon_min=point.lon_deg - half_lon,
        lon_max=point.lon_deg + half_lon,
    )
    return CellFootprint(
        cell=cell, nominal_bounds=nominal, patch_bounds=patch, patch_side_km=side_km
    )


def check_patch_alignment(patch_px: int, gsd_list_m: Sequence[float]) -> AlignmentReport:
    """Check that patch_px pixels at the finest GSD cover whole pixels in every band."""
    if isinstance(patch_px, bool) or not isinstance(patch_px, int) or patch_px <= 0:
        raise InvalidParameterError(f"patch_px must be a positive integer, got {patch_px!r}")
    if not gsd_list_m:
        raise InvalidParameterError("At least one GSD is required")
    gsds = [_require_finite_positive("gsd", gsd) for gsd in gsd_list_m]

    finest = Fraction(str(min(gsds)))
    bands = []
    for gsd in gsds:
        pixels = patch_px * finest / Fraction(str(gsd))
        bands.append(BandAlignment(gsd_m=gsd, pixels=pixels, aligned=pixels.denominator == 1))
    return AlignmentReport(patch_px=patch_px, bands=tuple(bands))


def grid_summary(spec: GridSpec) -> Dict[str, Any]:
    """Headline numbers of a grid, in a fixed key order."""
    sphere_area = 4.0 * math.pi * spec.earth_radius_km**2
    return {
        "spacing_km": spec.spacing_km,
        "earth_radius_km": spec.earth_radius_km,
        "rows": spec.n_rows,
        "row_min": spec.row_min,
        "row_max": spec.row_max,
        "lat_spacing_deg": spec.lat_spacing_deg,
        "lat_spacing_km": math.radians(spec.lat_spacing_deg) * spec.earth_radius_km,
        "equator_columns": num_cols(spec, 0),
        "total_points": spec.total_points,
        "area_per_point_km2": sphere_area / spec.total_points,
        "fingerprint": spec.fingerprint,
    }
