# terragrid/core/catalog.py
"""
Cell-keyed metadata catalog.

Records from any number of sources are indexed by grid cell so that datasets
built on the same grid can be filtered, joined and split the same way.
Persistence is by export to CSV/JSONL; the in-memory index is rebuilt by
ingesting those files.
"""

import bisect
import csv
import json
import logging
import math
import re
from dataclasses import dataclass, field
from datetime import datetime, timezone
from decimal import ROUND_HALF_EVEN, Decimal
from pathlib import Path
from typing import (
    IO,
    Any,
    Dict,
    FrozenSet,
    Iterable,
    Iterator,
    List,
    Mapping,
    NamedTuple,
    Optional,
    Tuple,
)

import pystac

from terragrid.core.errors import (
    IncompatibleGridError,
    InvalidParameterError,
    TerragridError,
)
from terragrid.core.grid import (
    BoundingBox,
    CellId,
    GridSpec,
    cell_footprint,
    cell_to_coords,
    coords_to_cell,
    format_cell,
    make_grid_spec,
    parse_cell,
    validate_cell,
)
from terragrid.utils.timestamps import (
    epoch_seconds,
    format_timestamp,
    parse_optional_timestamp,
    parse_timestamp,
)

logger = logging.getLogger(__name__)

CSV_FIELDS = (
    "cell",
    "source",
    "product_id",
    "time_start",
    "time_end",
    "cloud_fraction",
    "nodata_fraction",
    "crs_label",
    "centre_lat",
    "centre_lon",
)
REQUIRED_FIELDS = ("cell", "source", "product_id", "time_start")

# Bytes that were not valid UTF-8, as decoded with errors="surrogateescape"
_UNDECODABLE = re.compile("[\udc80-\udcff]")


@dataclass(frozen=True)
class MetadataRecord:
    """One dataset sample indexed by grid cell."""

    cell: CellId
    source: str
    product_id: str
    time_start: datetime
    time_end: Optional[datetime] = None
    cloud_fraction: Optional[float] = None
    nodata_fraction: Optional[float] = None
    crs_label: Optional[str] = None
    centre_lat: Optional[float] = None
    centre_lon: Optional[float] = None
    extra: Mapping[str, Any] = field(default_factory=dict, compare=False, hash=False)

    @property
    def key(self) -> Tuple[CellId, str, str, datetime]:
        """Identity used for de-duplication."""
        return (self.cell, self.source, self.product_id, self.time_start)

    @property
    def order_key(self):
        return (self.time_start, self.product_id, self.source)

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready mapping with the standard fields first, extras after."""
        data = {
            "cell": format_cell(self.cell),
            "source": self.source,
            "product_id": self.product_id,
            "time_start": format_timestamp(self.time_start),
            "time_end": format_timestamp(self.time_end) if self.time_end else None,
            "cloud_fraction": self.cloud_fraction,
            "nodata_fraction": self.nodata_fraction,
            "crs_label": self.crs_label,
            "centre_lat": self.centre_lat,
            "centre_lon": self.centre_lon,
        }
        for name in sorted(self.extra):
            data[name] = self.extra[name]
        return data


class RejectedRow(NamedTuple):
    line: int
    reason: str


@dataclass
class IngestReport:
    inserted: int = 0
    rejected: int = 0
    duplicates: int = 0
    rejects: List[RejectedRow] = field(default_factory=list)

    def reject(self, line: int, reason: str):
        self.rejected += 1
        self.rejects.append(RejectedRow(line, reason))


# ============================================================================
# Record parsing and validation
# ============================================================================


def _optional_float(data: Mapping[str, Any], name: str) -> Optional[float]:
    value = data.get(name)
    if value is None or value == "":
        return None
    if isinstance(value, bool):
        raise InvalidParameterError(f"{name}: expected a number, got {value!r}")
    try:
        number = float(value)
    except (TypeError, ValueError) as e:
        raise InvalidParameterError(f"{name}: expected a number, got {value!r}") from e
    if not math.isfinite(number):
        raise InvalidParameterError(f"{name}: non-finite value {value!r}")
    return number


def _optional_str(data: Mapping[str, Any], name: str) -> Optional[str]:
    value = data.get(name)
    if value is None or value == "":
        return None
    return str(value)


def record_from_mapping(data: Mapping[str, Any]) -> MetadataRecord:
    """Build a record from a CSV row or JSON object; unknown keys become extras."""
    for name in REQUIRED_FIELDS:
        if data.get(name) in (None, ""):
            raise InvalidParameterError(f"missing required field '{name}'")

    extra = {
        name: value
        for name, value in data.items()
        if name not in CSV_FIELDS and value not in (None, "")
    }
    return MetadataRecord(
        cell=parse_cell(str(data["cell"])),
        source=str(data["source"]),
        product_id=str(data["product_id"]),
        time_start=parse_timestamp(data["time_start"]),
        time_end=parse_optional_timestamp(data.get("time_end")),
        cloud_fraction=_optional_float(data, "cloud_fraction"),
        nodata_fraction=_optional_float(data, "nodata_fraction"),
        crs_label=_optional_str(data, "crs_label"),
        centre_lat=_optional_float(data, "centre_lat"),
        centre_lon=_optional_float(data, "centre_lon"),
        extra=extra,
    )


def validate_record(spec: GridSpec, record: MetadataRecord) -> MetadataRecord:
    """Enforce the record invariants under a grid; raises with a readable reason."""
    validate_cell(spec, record.cell)
    if record.time_end is not None and record.time_end < record.time_start:
        raise InvalidParameterError("time_end before time_start")
    for name in ("cloud_fraction", "nodata_fraction"):
        value = getattr(record, name)
        if value is not None and not 0.0 <= value <= 1.0:
            raise InvalidParameterError(f"{name}: fraction out of range ({value})")
    if (record.centre_lat is None) != (record.centre_lon is None):
        raise InvalidParameterError("centre_lat and centre_lon must be given together")
    if record.centre_lat is not None:
        owner = coords_to_cell(spec, record.centre_lat, record.centre_lon)
        if owner != record.cell:
            raise InvalidParameterError(
                f"centre ({record.centre_lat}, {record.centre_lon}) lies in {owner}, not {record.cell}"
            )
    return record


# ============================================================================
# Filter predicate
# ============================================================================


@dataclass(frozen=True)
class FilterPredicate:
    """Conjunction of optional record conditions; an empty predicate keeps everything."""

    sources: Optional[FrozenSet[str]] = None
    time_range: Optional[Tuple[datetime, datetime]] = None
    max_cloud: Optional[float] = None
    max_nodata: Optional[float] = None
    bbox: Optional[BoundingBox] = None
    cells: Optional[FrozenSet[CellId]] = None
    include_unknown: bool = False

    def __post_init__(self):
        if self.sources is not None:
            object.__setattr__(self, "sources", frozenset(self.sources))
        if self.cells is not None:
            object.__setattr__(self, "cells", frozenset(self.cells))
        if self.time_range is not None:
            start, end = self.time_range
            if end < start:
                raise InvalidParameterError(f"Time range ends before it starts ({start} > {end})")
        for name in ("max_cloud", "max_nodata"):
            value = getattr(self, name)
            if value is not None and not (math.isfinite(value) and 0.0 <= value <= 1.0):
                raise InvalidParameterError(f"{name} must lie in [0, 1], got {value}")

    def _passes_threshold(self, value: Optional[float], limit: Optional[float], strict: bool) -> bool:
        if limit is None:
            return True
        if value is None:
            return self.include_unknown
        return value < limit if strict else value <= limit

    def matches(self, spec: GridSpec, record: MetadataRecord) -> bool:
        if self.sources is not None and record.source not in self.sources:
            return False
        if self.cells is not None and record.cell not in self.cells:
            return False
        if self.time_range is not None:
            start, end = self.time_range
            if not start <= record.time_start <= end:
                return False
        if not self._passes_threshold(record.cloud_fraction, self.max_cloud, strict=True):
            return False
        if not self._passes_threshold(record.nodata_fraction, self.max_nodata, strict=False):
            return False
        if self.bbox is not None:
            anchor = cell_to_coords(spec, record.cell)
            if not self.bbox.contains(anchor.lat_deg, anchor.lon_deg):
                return False
        return True


# ============================================================================
# Catalog
# ============================================================================


class Catalog:
    """In-memory index of metadata records keyed by cell.

    Iteration order is (row, col, time_start, product_id). Catalogs returned by
    filter/apply operations are frozen snapshots.
    """

    def __init__(
        self,
        spec: Optional[GridSpec] = None,
        records: Iterable[MetadataRecord] = (),
        frozen: bool = False,
    ):
        self.spec = spec if spec is not None else make_grid_spec()
        self._by_cell: Dict[CellId, List[MetadataRecord]] = {}
        self._keys: Dict[Tuple, MetadataRecord] = {}
        self._frozen = False
        for record in records:
            self.add(record)
        self._frozen = frozen

    def __repr__(self):
        return (
            f"<Catalog records={len(self)} cells={len(self._by_cell)} "
            f"sources={sorted(self.source_names)} frozen={self._frozen}>"
        )

    def __len__(self):
        return len(self._keys)

    def __iter__(self) -> Iterator[MetadataRecord]:
        for cell in self.cells():
            yield from self._by_cell[cell]

    def __contains__(self, cell: CellId) -> bool:
        return cell in self._by_cell

    @property
    def frozen(self) -> bool:
        return self._frozen

    @property
    def source_names(self) -> FrozenSet[str]:
        return frozenset(record.source for record in self)

    def cells(self) -> List[CellId]:
        return sorted(self._by_cell)

    def records_for(self, cell: CellId) -> Tuple[MetadataRecord, ...]:
        return tuple(self._by_cell.get(cell, ()))

    def add(self, record: MetadataRecord) -> bool:
        """Insert a validated record; returns False for an exact duplicate."""
        if self._frozen:
            raise TerragridError("Cannot add records to a frozen catalog view")
        validate_record(self.spec, record)
        existing = self._keys.get(record.key)
        if existing is not None:
            if _conflicting(existing, record):
                logger.warning(f"Kept the first of two differing records for {_describe_key(record)}")
            return False
        self._keys[record.key] = record
        group = self._by_cell.setdefault(record.cell, [])
        bisect.insort_right(group, record, key=lambda r: r.order_key)
        return True

    # ------------------------------------------------------------------
    # Ingest
    # ------------------------------------------------------------------

    def ingest(self, stream: IO[str], fmt: str = "csv") -> IngestReport:
        """Insert every valid row of a CSV or JSONL stream; bad rows are reported, not raised."""
        if fmt == "csv":
            rows = self._csv_rows(stream)
        elif fmt == "jsonl":
            rows = self._jsonl_rows(stream)
        else:
            raise InvalidParameterError(f"Unknown ingest format '{fmt}' (expected csv or jsonl)")

        report = IngestReport()
        for line, data, error in rows:
            if error:
                report.reject(line, error)
                continue
            try:
                record = record_from_mapping(data)
                existing = self._keys.get(record.key)
                if existing is not None and _conflicting(existing, record):
                    report.reject(line, f"conflicts with an earlier record for {_describe_key(record)}")
                    continue
                inserted = self.add(record)
            except TerragridError as e:
                report.reject(line, str(e))
                continue
            if inserted:
                report.inserted += 1
            else:
                report.duplicates += 1

        logger.info(
            f"Ingested {fmt}: {report.inserted} inserted, {report.duplicates} duplicates, "
            f"{report.rejected} rejected"
        )
        for reject in report.rejects:
            logger.debug(f"Rejected line {reject.line}: {reject.reason}")
        return report

    @classmethod
    def from_file(
        cls, path, spec: Optional[GridSpec] = None, fmt: Optional[str] = None
    ) -> Tuple["Catalog", IngestReport]:
        """Load one CSV/JSONL file; the format follows the extension unless given."""
        catalog = cls(spec)
        fmt = fmt or detect_format(path)
        with open(path, encoding="utf-8", errors="surrogateescape", newline="") as stream:
            report = catalog.ingest(stream, fmt)
        return catalog, report

    @staticmethod
    def _csv_rows(stream: IO[str]):
        reader = csv.DictReader(stream)
        header = reader.fieldnames or []
        missing = [name for name in REQUIRED_FIELDS if name not in header]
        if missing:
            raise InvalidParameterError(f"CSV header lacks required columns: {', '.join(missing)}")
        for data in reader:
            if None in data:
                yield reader.line_num, None, "more values than header columns"
            elif any(_UNDECODABLE.search(value or "") for value in data.values()):
                yield reader.line_num, None, "invalid UTF-8"
            else:
                yield reader.line_num, data, None

    @staticmethod
    def _jsonl_rows(stream: IO[str]):
        for line_number, line in enumerate(stream, start=1):
            if not line.strip():
                continue
            if _UNDECODABLE.search(line):
                yield line_number, None, "invalid UTF-8"
                continue
            try:
                data = json.loads(line)
            except json.JSONDecodeError as e:
                yield line_number, None, f"malformed JSON: {e.msg}"
                continue
            if not isinstance(data, dict):
                yield line_number, None, "JSON line is not an object"
                continue
            yield line_number, data, None

    # ------------------------------------------------------------------
    # Views
    # ------------------------------------------------------------------

    def filter(self, predicate: Optional[FilterPredicate] = None) -> "Catalog":
        predicate = predicate or FilterPredicate()
        selected = [record for record in self if predicate.matches(self.spec, record)]
        logger.debug(f"Filter kept {len(selected)}/{len(self)} records")
        return Catalog(self.spec, selected, frozen=True)

    # ------------------------------------------------------------------
    # Export
    # ------------------------------------------------------------------

    def _extra_columns(self) -> List[str]:
        return sorted({name for record in self for name in record.extra})

    def write_csv(self, stream: IO[str]):
        extra_columns = self._extra_columns()
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(list(CSV_FIELDS) + extra_columns)
        for record in self:
            data = record.to_dict()
            row = [_csv_value(data[name]) for name in CSV_FIELDS]
            row += [_csv_value(record.extra.get(name)) for name in extra_columns]
            writer.writerow(row)

    def write_jsonl(self, stream: IO[str]):
        for record in self:
            stream.write(json.dumps(record.to_dict(), ensure_ascii=False) + "\n")


def detect_format(path) -> str:
    """'jsonl' for .jsonl/.json/.ndjson files, 'csv' otherwise."""
    return "jsonl" if Path(path).suffix.lower() in (".jsonl", ".json", ".ndjson") else "csv"


def _conflicting(a: MetadataRecord, b: MetadataRecord) -> bool:
    """Same identity, different content."""
    return a.to_dict() != b.to_dict()


def _describe_key(record: MetadataRecord) -> str:
    return f"{format_cell(record.cell)} {record.source} {record.product_id} {format_timestamp(record.time_start)}"


def _csv_value(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (dict, list, bool)):
        return json.dumps(value, sort_keys=True)
    return str(value)


def _require_same_grid(a: Catalog, b: Catalog):
    if a.spec != b.spec:
        raise IncompatibleGridError(f"Catalogs use different grids: {a.spec!r} vs {b.spec!r}")


# ============================================================================
# Joins and pairing
# ============================================================================


class CellJoin(NamedTuple):
    cell: CellId
    records_a: Tuple[MetadataRecord, ...]
    records_b: Tuple[MetadataRecord, ...]


class TimePair(NamedTuple):
    cell: CellId
    record_a: MetadataRecord
    record_b: MetadataRecord
    delta_seconds: int  # time_b - time_a


def join_by_cell(a: Catalog, b: Catalog) -> List[CellJoin]:
    """Inner join on cell, in cell order."""
    _require_same_grid(a, b)
    shared = sorted(set(a.cells()) & set(b.cells()))
    logger.debug(f"Join: {len(shared)} shared cells")
    return [CellJoin(cell, a.records_for(cell), b.records_for(cell)) for cell in shared]


def _closest(
    reference: MetadataRecord, candidates: Tuple[MetadataRecord, ...], times: List[int]
) -> Tuple[MetadataRecord, int]:
    t = epoch_seconds(reference.time_start)
    index = bisect.bisect_left(times, t)
    options = []
    if index < len(times):
        options.append(index)
    if index > 0:
        # First record at the latest time before t (lowest product_id there)
        options.append(bisect.bisect_left(times, times[index - 1]))
    best = min(
        options,
        key=lambda i: (abs(times[i] - t), times[i], candidates[i].product_id, candidates[i].source),
    )
    return candidates[best], times[best] - t


def closest_time_pairing(
    a: Catalog, b: Catalog, max_delta_seconds: Optional[int] = None
) -> List[TimePair]:
    """For every record of a, the record of b in the same cell closest in time.

    Ties go to the earlier record of b, then to the lower product id.
    """
    _require_same_grid(a, b)
    if max_delta_seconds is not None and max_delta_seconds < 0:
        raise InvalidParameterError(f"max_delta_seconds must be non-negative, got {max_delta_seconds}")

    pairs = []
    for join in join_by_cell(a, b):
        times = [epoch_seconds(record.time_start) for record in join.records_b]
        for reference in join.records_a:
            partner, delta = _closest(reference, join.records_b, times)
            if max_delta_seconds is not None and abs(delta) > max_delta_seconds:
                continue
            pairs.append(TimePair(join.cell, reference, partner, delta))
    return pairs


def pairing_coverage(pairs: Iterable[TimePair], reference: Catalog) -> Optional[float]:
    """Fraction of the reference catalog's cells that received at least one partner."""
    total = len(reference.cells())
    if total == 0:
        return None
    return len({pair.cell for pair in pairs}) / total


# ============================================================================
# Statistics
# ============================================================================


@dataclass(frozen=True)
class CoverageStats:
    cell_count: int
    area_with_overlap_km2: float
    area_without_overlap_km2: float
    per_row_histogram: Mapping[int, int]


def coverage_from_count(
    spec: GridSpec, cell_count: int, patch_px: int, gsd_m: float
) -> CoverageStats:
    """Surface covered by cell_count patches, with and without their mutual overlap."""
    if patch_px <= 0 or gsd_m <= 0 or not math.isfinite(gsd_m):
        raise InvalidParameterError("patch_px and gsd_m must be positive")
    if cell_count < 0:
        raise InvalidParameterError(f"cell_count must be non-negative, got {cell_count}")
    side_km = patch_px * gsd_m / 1000.0
    return CoverageStats(
        cell_count=cell_count,
        area_with_overlap_km2=cell_count * side_km**2,
        area_without_overlap_km2=cell_count * spec.spacing_km**2,
        per_row_histogram={},
    )


def coverage_stats(catalog: Catalog, patch_px: int, gsd_m: float) -> CoverageStats:
    cells = catalog.cells()
    histogram: Dict[int, int] = {}
    for cell in cells:
        histogram[cell.row] = histogram.get(cell.row, 0) + 1
    base = coverage_from_count(catalog.spec, len(cells), patch_px, gsd_m)
    return CoverageStats(
        cell_count=base.cell_count,
        area_with_overlap_km2=base.area_with_overlap_km2,
        area_without_overlap_km2=base.area_without_overlap_km2,
        per_row_histogram=dict(sorted(histogram.items())),
    )


def volume_gigapixels(sample_count: int, patch_px: int) -> float:
    """Dataset volume in gigapixels (per band, highest resolution), one decimal."""
    if sample_count < 0 or patch_px < 0:
        raise InvalidParameterError("sample_count and patch_px must be non-negative")
    pixels = Decimal(sample_count) * Decimal(patch_px) ** 2
    return float((pixels / Decimal(10**9)).quantize(Decimal("0.1"), rounding=ROUND_HALF_EVEN))


# ============================================================================
# Split manifests
# ============================================================================


@dataclass(frozen=True)
class SplitManifest:
    """Portable list of (cell, source) pairs reproducing a dataset subset."""

    name: str
    entries: Tuple[Tuple[CellId, str], ...]
    created: datetime
    spacing_km: float
    earth_radius_km: float

    @property
    def spec_fingerprint(self) -> str:
        return make_grid_spec(self.spacing_km, self.earth_radius_km).fingerprint

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "spec": {"spacing_km": self.spacing_km, "earth_radius_km": self.earth_radius_km},
            "entries": [{"cell": format_cell(cell), "source": source} for cell, source in self.entries],
            "created": format_timestamp(self.created),
        }

    def dump(self, stream: IO[str]):
        json.dump(self.to_dict(), stream, indent=2)
        stream.write("\n")

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "SplitManifest":
        try:
            spec = data["spec"]
            entries = []
            for entry in data["entries"]:
                item = (parse_cell(entry["cell"]), str(entry["source"]))
                if item not in entries:
                    entries.append(item)
            return cls(
                name=str(data["name"]),
                entries=tuple(entries),
                created=parse_timestamp(data["created"]),
                spacing_km=float(spec["spacing_km"]),
                earth_radius_km=float(spec["earth_radius_km"]),
            )
        except (KeyError, TypeError) as e:
            raise InvalidParameterError(f"Malformed split manifest: {e!r}") from e

    @classmethod
    def load(cls, stream: IO[str]) -> "SplitManifest":
        try:
            data = json.load(stream)
        except json.JSONDecodeError as e:
            raise InvalidParameterError(f"Split manifest is not valid JSON: {e.msg}") from e
        return cls.from_dict(data)


class SplitApplication(NamedTuple):
    view: Catalog
    warnings: List[str]


def export_split(
    catalog: Catalog,
    name: str,
    selector: Optional[FilterPredicate] = None,
    created: Optional[datetime] = None,
) -> SplitManifest:
    view = catalog.filter(selector)
    entries = sorted({(record.cell, record.source) for record in view})
    manifest = SplitManifest(
        name=name,
        entries=tuple(entries),
        created=created or datetime.now(timezone.utc).replace(microsecond=0),
        spacing_km=catalog.spec.spacing_km,
        earth_radius_km=catalog.spec.earth_radius_km,
    )
    logger.info(f"Split '{name}' exported with {len(entries)} (cell, source) entries")
    return manifest


def apply_split(catalog: Catalog, manifest: SplitManifest) -> SplitApplication:
    """Records whose (cell, source) appear in the manifest; unknown entries become warnings."""
    if manifest.spec_fingerprint != catalog.spec.fingerprint:
        raise IncompatibleGridError(
            f"Manifest '{manifest.name}' was built on D={manifest.spacing_km}km "
            f"R={manifest.earth_radius_km}km, catalog uses {catalog.spec!r}"
        )

    wanted = set(manifest.entries)
    warnings = []
    for cell, source in manifest.entries:
        if cell not in catalog:
            warnings.append(f"Unknown cell {format_cell(cell)} (source {source})")
        elif not any(record.source == source for record in catalog.records_for(cell)):
            warnings.append(f"Cell {format_cell(cell)} has no records from source {source}")

    selected = [record for record in catalog if (record.cell, record.source) in wanted]
    for warning in warnings:
        logger.warning(warning)
    return SplitApplication(Catalog(catalog.spec, selected, frozen=True), warnings)


# ============================================================================
# STAC-shaped export
# ============================================================================


def stac_item(spec: GridSpec, record: MetadataRecord) -> Dict[str, Any]:
    """STAC-Item-shaped dict for one record; geometry is the cell's nominal box."""
    bounds = cell_footprint(spec, record.cell).nominal_bounds
    properties: Dict[str, Any] = {
        "grid:cell": format_cell(record.cell),
        "source": record.source,
        "product_id": record.product_id,
    }
    item_datetime: Optional[datetime] = record.time_start
    if record.time_end is not None:
        item_datetime = None
        properties["start_datetime"] = format_timestamp(record.time_start)
        properties["end_datetime"] = format_timestamp(record.time_end)
    if record.cloud_fraction is not None:
        properties["eo:cloud_cover"] = round(record.cloud_fraction * 100.0, 6)
    if record.nodata_fraction is not None:
        properties["nodata_fraction"] = record.nodata_fraction
    if record.crs_label is not None:
        properties["crs_label"] = record.crs_label
    for name, value in record.extra.items():
        properties.setdefault(name, value)

    item = pystac.Item(
        id=f"{record.source}_{format_cell(record.cell)}_{record.product_id}",
        geometry={"type": "Polygon", "coordinates": [[list(p) for p in bounds.ring()]]},
        bbox=list(bounds.bbox()),
        datetime=item_datetime,
        properties=properties,
    )
    return item.to_dict(include_self_link=False, transform_hrefs=False)


def export_stac_items(catalog: Catalog, view: Optional[Catalog] = None) -> Iterator[Dict[str, Any]]:
    source = view if view is not None else catalog
    _require_same_grid(catalog, source)
    for record in source:
        yield stac_item(catalog.spec, record)
