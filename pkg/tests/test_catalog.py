"""Tests for terragrid.core.catalog."""

import io
from dataclasses import replace
from datetime import timedelta

import numpy as np
import pytest

from conftest import make_record, utc
from terragrid.core.catalog import (
    Catalog,
    FilterPredicate,
    SplitManifest,
    apply_split,
    closest_time_pairing,
    coverage_from_count,
    coverage_stats,
    export_split,
    export_stac_items,
    join_by_cell,
    pairing_coverage,
    stac_item,
    volume_gigapixels,
)
from terragrid.core.errors import IncompatibleGridError, InvalidParameterError, TerragridError
from terragrid.core.grid import BoundingBox, CellId, col_range, make_grid_spec
from terragrid.data import get_all_references, get_reference

CSV_HEADER = (
    "cell,source,product_id,time_start,time_end,cloud_fraction,nodata_fraction,"
    "crs_label,centre_lat,centre_lon\n"
)


def _random_catalog(spec, rng, sources=("S2-L1C", "S1-RTC"), n_records=60, n_cells=15):
    """Catalog over a few nearby cells with random times, sources and cloud values."""
    cells = []
    while len(cells) < n_cells:
        row = int(rng.integers(-20, 20))
        col_min, col_max = col_range(spec, row)
        cell = CellId(row, int(rng.integers(-20, 20)))
        if col_min <= cell.col <= col_max and cell not in cells:
            cells.append(cell)

    catalog = Catalog(spec)
    base = utc(2020)
    for index in range(n_records):
        cloud = float(rng.uniform(0, 1)) if rng.uniform() < 0.8 else None
        catalog.add(
            make_record(
                cells[int(rng.integers(len(cells)))],
                sources[int(rng.integers(len(sources)))],
                f"P{index:04d}",
                base + timedelta(hours=int(rng.integers(0, 24 * 90))),
                cloud=cloud,
            )
        )
    return catalog


class TestIngest:
    """Tests for Catalog.ingest."""

    def test_valid_rows(self, spec):
        text = (
            CSV_HEADER
            + "0U_0R,S2-L1C,A,2020-01-01T00:00:00Z,,0.1,0.0,,,\n"
            + "0U_1R,S2-L1C,B,2020-01-02T00:00:00Z,,,,EPSG:32631,,\n"
            + "201U_54L,S1-RTC,C,2020-01-03,,,,,,\n"
        )
        catalog = Catalog(spec)

        report = catalog.ingest(io.StringIO(text))

        assert (report.inserted, report.rejected, report.duplicates) == (3, 0, 0)
        assert len(catalog) == 3
        assert catalog.source_names == {"S2-L1C", "S1-RTC"}

    def test_fraction_out_of_range_is_rejected(self, spec):
        text = CSV_HEADER + "0U_0R,S2-L1C,A,2020-01-01T00:00:00Z,,1.2,,,,\n"
        catalog = Catalog(spec)

        report = catalog.ingest(io.StringIO(text))

        assert report.inserted == 0
        assert report.rejected == 1
        assert "fraction out of range" in report.rejects[0].reason
        assert report.rejects[0].line == 2

    def test_bad_rows_never_abort_the_stream(self, spec):
        text = (
            CSV_HEADER
            + "9999U_0R,S2-L1C,A,2020-01-01T00:00:00Z,,,,,,\n"
            + "0U_0X,S2-L1C,B,2020-01-01T00:00:00Z,,,,,,\n"
            + "0U_0R,S2-L1C,C,not-a-time,,,,,,\n"
            + "0U_0R,S2-L1C,D,2020-01-02T00:00:00Z,2020-01-01T00:00:00Z,,,,,\n"
            + "0U_0R,,E,2020-01-01T00:00:00Z,,,,,,\n"
            + "0U_0R,S2-L1C,F,2020-01-01T00:00:00Z,,,,,,\n"
        )
        catalog = Catalog(spec)

        report = catalog.ingest(io.StringIO(text))

        assert report.inserted == 1
        assert report.rejected == 5

    def test_duplicates_are_idempotent(self, spec):
        row = "0U_0R,S2-L1C,A,2020-01-01T00:00:00Z,,0.1,,,,\n"
        catalog = Catalog(spec)
        catalog.ingest(io.StringIO(CSV_HEADER + row))

        report = catalog.ingest(io.StringIO(CSV_HEADER + row))

        assert (report.inserted, report.rejected, report.duplicates) == (0, 0, 1)
        assert len(catalog) == 1

    def test_same_key_with_different_fields_is_rejected(self, spec):
        text = (
            CSV_HEADER
            + "0U_0R,S2-L1C,A,2020-01-01T00:00:00Z,,0.1,,,,\n"
            + "0U_0R,S2-L1C,A,2020-01-01T00:00:00Z,,0.9,,,,\n"
        )
        catalog = Catalog(spec)

        report = catalog.ingest(io.StringIO(text))

        assert (report.inserted, report.rejected, report.duplicates) == (1, 1, 0)
        assert report.rejects[0].line == 3
        assert "conflicts with an earlier record" in report.rejects[0].reason
        (record,) = list(catalog)
        assert record.cloud_fraction == 0.1

    def test_conflicting_record_in_constructor_keeps_the_first(self, spec, caplog):
        first = make_record("0U_0R", "S2-L1C", "A", utc(2020, 1, 1), cloud=0.1)
        second = replace(first, cloud_fraction=0.9)

        with caplog.at_level("WARNING", logger="terragrid"):
            catalog = Catalog(spec, [first, second])

        assert list(catalog) == [first]
        assert "differing records" in caplog.text

    def test_undecodable_bytes_reject_only_their_row(self, spec):
        raw = (
            CSV_HEADER.encode("utf-8")
            + b"0U_0R,S2-L1C,A,2020-01-01T00:00:00Z,,,,,,\n"
            + b"0U_0R,S2-L1C,B\xff\xfe,2020-01-02T00:00:00Z,,,,,,\n"
            + b"0U_0R,S2-L1C,C,2020-01-03T00:00:00Z,,,,,,\n"
        )
        catalog = Catalog(spec)

        report = catalog.ingest(io.StringIO(raw.decode("utf-8", "surrogateescape")))

        assert (report.inserted, report.rejected) == (2, 1)
        assert report.rejects[0].line == 3
        assert report.rejects[0].reason == "invalid UTF-8"
        assert [r.product_id for r in catalog] == ["A", "C"]

    def test_undecodable_jsonl_line_is_rejected(self, spec):
        raw = (
            b'{"cell": "0U_0R", "source": "S1-RTC", "product_id": "X", "time_start": "2020-05-01T00:00:00Z"}\n'
            b'{"cell": "0U_0R", "source": "S1-RTC", "product_id": "Y\xff", "time_start": "2020-05-02T00:00:00Z"}\n'
        )
        catalog = Catalog(spec)

        report = catalog.ingest(io.StringIO(raw.decode("utf-8", "surrogateescape")), "jsonl")

        assert (report.inserted, report.rejected) == (1, 1)
        assert report.rejects[0].reason == "invalid UTF-8"

    def test_centre_must_lie_in_cell(self, spec):
        good = CSV_HEADER + "0U_0R,S2-L1C,A,2020-01-01T00:00:00Z,,,,,0.01,0.01\n"
        bad = CSV_HEADER + "0U_0R,S2-L1C,B,2020-01-01T00:00:00Z,,,,,5.0,5.0\n"
        catalog = Catalog(spec)

        assert catalog.ingest(io.StringIO(good)).inserted == 1
        assert catalog.ingest(io.StringIO(bad)).rejected == 1

    def test_jsonl(self, spec):
        text = (
            '{"cell": "0U_0R", "source": "S1-RTC", "product_id": "X", "time_start": "2020-05-01T12:00:00Z", "orbit": 42}\n'
            "\n"
            "{not json\n"
            "[1, 2]\n"
        )
        catalog = Catalog(spec)

        report = catalog.ingest(io.StringIO(text), "jsonl")

        assert report.inserted == 1
        assert report.rejected == 2
        (record,) = list(catalog)
        assert record.extra == {"orbit": 42}

    def test_missing_header_column(self, spec):
        with pytest.raises(InvalidParameterError):
            Catalog(spec).ingest(io.StringIO("cell,source\n0U_0R,S2-L1C\n"))

    def test_unknown_format(self, spec):
        with pytest.raises(InvalidParameterError):
            Catalog(spec).ingest(io.StringIO(""), "parquet")


class TestCatalogOrder:
    """Iteration is ordered by (row, col, time_start, product_id)."""

    def test_iteration_order(self, small_catalog):
        keys = [(r.cell, r.time_start, r.product_id) for r in small_catalog]
        assert keys == sorted(keys)
        assert [r.product_id for r in small_catalog][:3] == ["S1A_002", "S1A_001", "S2A_001"]

    def test_records_for(self, small_catalog):
        records = small_catalog.records_for(CellId(0, 0))
        assert [r.product_id for r in records] == ["S1A_001", "S2A_001", "S2B_002"]
        assert small_catalog.records_for(CellId(5, 5)) == ()

    def test_frozen_views(self, small_catalog):
        view = small_catalog.filter()
        assert view.frozen
        with pytest.raises(TerragridError):
            view.add(make_record("0U_0R", "S2-L1C", "Z", utc(2020)))


class TestExport:
    """CSV and JSONL exports are stable under ingest."""

    def test_csv_format(self, spec):
        catalog = Catalog(spec, [make_record("201U_54L", "S2-L1C", "A", utc(2021, 6, 1), cloud=0.1)])
        stream = io.StringIO()

        catalog.write_csv(stream)

        assert stream.getvalue() == CSV_HEADER + "201U_54L,S2-L1C,A,2021-06-01T00:00:00Z,,0.1,,,,\n"

    @pytest.mark.parametrize("fmt", ["csv", "jsonl"])
    def test_round_trip_is_byte_stable(self, spec, fmt):
        rng = np.random.default_rng(5)
        original = _random_catalog(spec, rng)
        first = io.StringIO()
        getattr(original, f"write_{fmt}")(first)

        reloaded = Catalog(spec)
        report = reloaded.ingest(io.StringIO(first.getvalue()), fmt)
        second = io.StringIO()
        getattr(reloaded, f"write_{fmt}")(second)

        assert report.inserted == len(original)
        assert second.getvalue() == first.getvalue()

    def test_from_file_detects_format(self, spec, tmp_path, small_catalog):
        path = tmp_path / "catalog.jsonl"
        with open(path, "w", encoding="utf-8") as stream:
            small_catalog.write_jsonl(stream)

        catalog, report = Catalog.from_file(path, spec)

        assert report.inserted == len(small_catalog)
        assert [r.key for r in catalog] == [r.key for r in small_catalog]


class TestFilter:
    """Tests for FilterPredicate and Catalog.filter."""

    def test_empty_predicate_keeps_everything(self, small_catalog):
        assert len(small_catalog.filter(FilterPredicate())) == len(small_catalog)

    def test_sources(self, small_catalog):
        view = small_catalog.filter(FilterPredicate(sources={"S1-RTC"}))
        assert {r.product_id for r in view} == {"S1A_001", "S1A_002"}

    def test_max_cloud_is_strict(self, small_catalog):
        view = small_catalog.filter(FilterPredicate(max_cloud=0.3))
        assert {r.product_id for r in view} == {"S2A_001", "S2A_003"}

    def test_unknown_values(self, small_catalog):
        view = small_catalog.filter(FilterPredicate(max_cloud=0.3, include_unknown=True))
        assert {r.product_id for r in view} == {"S2A_001", "S2A_003", "S1A_001", "S1A_002"}

    def test_max_nodata_is_inclusive(self, small_catalog):
        view = small_catalog.filter(FilterPredicate(max_nodata=0.01))
        assert {r.product_id for r in view} == {"S2A_001", "S2B_002"}

    def test_time_range_is_inclusive(self, small_catalog):
        view = small_catalog.filter(FilterPredicate(time_range=(utc(2020, 1, 8), utc(2020, 3, 5))))
        assert {r.product_id for r in view} == {"S1A_001", "S2A_001", "S2B_002"}

    def test_bbox_uses_cell_anchor(self, small_catalog):
        view = small_catalog.filter(FilterPredicate(bbox=BoundingBox(10.0, 20.0, -10.0, 0.0)))
        assert [r.product_id for r in view] == ["S2A_003"]

    def test_cells(self, small_catalog):
        view = small_catalog.filter(FilterPredicate(cells={CellId(-317, 0)}))
        assert [r.product_id for r in view] == ["S1A_002"]

    def test_inverted_time_range(self):
        with pytest.raises(InvalidParameterError):
            FilterPredicate(time_range=(utc(2021), utc(2020)))

    def test_threshold_out_of_range(self):
        with pytest.raises(InvalidParameterError):
            FilterPredicate(max_cloud=1.5)


class TestJoinAndPairing:
    """Join and closest-time pairing against brute force."""

    def test_join_matches_brute_force(self, spec):
        rng = np.random.default_rng(11)
        for _ in range(20):
            a = _random_catalog(spec, rng, sources=("S2-L1C",))
            b = _random_catalog(spec, rng, sources=("S1-RTC",))

            expected = [
                (cell, a.records_for(cell), b.records_for(cell))
                for cell in sorted(set(a.cells()) & set(b.cells()))
            ]
            assert [tuple(j) for j in join_by_cell(a, b)] == expected

    def test_pairing_matches_brute_force(self, spec):
        rng = np.random.default_rng(12)
        for _ in range(20):
            a = _random_catalog(spec, rng, sources=("S2-L1C",))
            b = _random_catalog(spec, rng, sources=("S1-RTC",), n_records=80)

            expected = []
            for record in a:
                candidates = b.records_for(record.cell)
                if not candidates:
                    continue
                best = min(
                    candidates,
                    key=lambda c: (
                        abs((c.time_start - record.time_start).total_seconds()),
                        c.time_start,
                        c.product_id,
                        c.source,
                    ),
                )
                delta = int((best.time_start - record.time_start).total_seconds())
                expected.append((record.cell, record, best, delta))

            assert [tuple(p) for p in closest_time_pairing(a, b)] == expected

    def test_ties_go_to_the_earlier_record(self, spec):
        a = Catalog(spec, [make_record("0U_0R", "S2-L1C", "A", utc(2020, 1, 2))])
        b = Catalog(
            spec,
            [
                make_record("0U_0R", "S1-RTC", "LATE", utc(2020, 1, 3)),
                make_record("0U_0R", "S1-RTC", "EARLY", utc(2020, 1, 1)),
            ],
        )

        (pair,) = closest_time_pairing(a, b)

        assert pair.record_b.product_id == "EARLY"
        assert pair.delta_seconds == -86400

    def test_max_delta_and_coverage(self, spec):
        a = Catalog(
            spec,
            [
                make_record("0U_0R", "S2-L1C", "A", utc(2020, 1, 1)),
                make_record("0U_1R", "S2-L1C", "B", utc(2020, 1, 1)),
                make_record("0U_2R", "S2-L1C", "C", utc(2020, 1, 1)),
                make_record("0U_3R", "S2-L1C", "D", utc(2020, 1, 1)),
            ],
        )
        b = Catalog(
            spec,
            [
                make_record("0U_0R", "S1-RTC", "X", utc(2020, 1, 1, 6)),
                make_record("0U_1R", "S1-RTC", "Y", utc(2020, 1, 10)),
            ],
        )

        pairs = closest_time_pairing(a, b, max_delta_seconds=86400)

        assert [p.record_b.product_id for p in pairs] == ["X"]
        assert pairing_coverage(pairs, a) == 0.25
        assert pairing_coverage([], Catalog(spec)) is None

    def test_different_grids(self, spec):
        with pytest.raises(IncompatibleGridError):
            join_by_cell(Catalog(spec), Catalog(make_grid_spec(20.0)))


class TestStatistics:
    """Volume and coverage arithmetic."""

    @pytest.mark.parametrize(
        "name, count, patch_px, printed",
        [
            ("BigEarthNet", 590_326, 120, 8.5),
            ("SEN12MS-CR", 122_218, 256, 8.0),
            ("SEN12MS-CR-TS", 467_340, 256, 30.6),
            ("SeCo", 1_000_000, 265, 70.2),
            ("S2", 2_245_886, 1068, 2561.7),
            ("S1", 1_469_955, 1068, 1676.7),
        ],
    )
    def test_volume(self, name, count, patch_px, printed):
        assert volume_gigapixels(count, patch_px) == pytest.approx(printed, abs=0.05)

    def test_reference_table(self):
        for entry in get_all_references():
            computed = volume_gigapixels(entry["count"], entry["patch_px"])
            assert computed == pytest.approx(entry["gigapixels"], abs=0.05), entry["name"]

    def test_reference_lookup(self):
        assert get_reference("SeCo")["count"] == 1_000_000
        assert get_reference("unknown") is None

    def test_half_even_rounding(self):
        # 250 * 1000^2 = 0.25 Gpx exactly -> 0.2; 350 * 1000^2 -> 0.4
        assert volume_gigapixels(250, 1000) == 0.2
        assert volume_gigapixels(350, 1000) == 0.4

    def test_coverage_of_the_global_grid(self, spec):
        stats = coverage_from_count(spec, 2_245_886, 1068, 10)

        assert stats.area_with_overlap_km2 == pytest.approx(256.2e6, rel=1e-3)
        assert stats.area_with_overlap_km2 == pytest.approx(250e6, rel=0.03)
        assert stats.area_without_overlap_km2 == pytest.approx(224.6e6, rel=1e-3)
        assert stats.area_without_overlap_km2 == pytest.approx(225e6, rel=0.01)

    def test_coverage_histogram(self, small_catalog):
        stats = coverage_stats(small_catalog, 1068, 10)

        assert stats.cell_count == 3
        assert stats.per_row_histogram == {-317: 1, 0: 1, 201: 1}

    def test_invalid_arguments(self, spec):
        with pytest.raises(InvalidParameterError):
            coverage_from_count(spec, 10, 0, 10)
        with pytest.raises(InvalidParameterError):
            volume_gigapixels(-1, 10)


class TestSplits:
    """Split manifests reproduce (cell, source) coverage exactly."""

    def test_round_trip_on_random_catalogs(self, spec):
        rng = np.random.default_rng(13)
        for index in range(100):
            catalog = _random_catalog(spec, rng, n_records=int(rng.integers(1, 40)))
            selector = FilterPredicate(max_cloud=float(rng.uniform()), include_unknown=bool(index % 2))
            manifest = export_split(catalog, f"split-{index}", selector, created=utc(2024))

            stream = io.StringIO()
            manifest.dump(stream)
            loaded = SplitManifest.load(io.StringIO(stream.getvalue()))
            application = apply_split(catalog, loaded)

            expected = {(r.cell, r.source) for r in catalog.filter(selector)}
            assert set(loaded.entries) == expected
            assert {(r.cell, r.source) for r in application.view} == expected
            assert application.warnings == []

    def test_manifest_layout(self, small_catalog):
        manifest = export_split(small_catalog, "train", created=utc(2024, 2, 29))

        data = manifest.to_dict()

        assert data["name"] == "train"
        assert data["spec"] == {"spacing_km": 10.0, "earth_radius_km": 6378.137}
        assert data["created"] == "2024-02-29T00:00:00Z"
        assert data["entries"][0] == {"cell": "317D_0R", "source": "S1-RTC"}
        assert len(data["entries"]) == 4

    def test_unknown_entries_become_warnings(self, spec, small_catalog):
        manifest = SplitManifest(
            name="val",
            entries=((CellId(0, 0), "S2-L1C"), (CellId(5, 5), "S2-L1C"), (CellId(0, 0), "S3")),
            created=utc(2024),
            spacing_km=10.0,
            earth_radius_km=6378.137,
        )

        application = apply_split(small_catalog, manifest)

        assert len(application.warnings) == 2
        assert {r.product_id for r in application.view} == {"S2A_001", "S2B_002"}

    def test_grid_mismatch(self, small_catalog):
        manifest = SplitManifest("x", (), utc(2024), 20.0, 6378.137)
        with pytest.raises(IncompatibleGridError):
            apply_split(small_catalog, manifest)

    def test_malformed_manifest(self):
        with pytest.raises(InvalidParameterError):
            SplitManifest.load(io.StringIO('{"name": "x"}'))
        with pytest.raises(InvalidParameterError):
            SplitManifest.load(io.StringIO("not json"))


class TestStac:
    """STAC-shaped item export."""

    def test_item(self, spec):
        record = make_record("0U_0R", "S2-L1C", "S2A_001", utc(2020, 1, 10), cloud=0.3)

        item = stac_item(spec, record)

        assert item["type"] == "Feature"
        assert item["id"] == "S2-L1C_0U_0R_S2A_001"
        assert item["properties"]["datetime"] == "2020-01-10T00:00:00Z"
        assert item["properties"]["eo:cloud_cover"] == 30.0
        assert item["properties"]["grid:cell"] == "0U_0R"
        assert item["geometry"]["type"] == "Polygon"
        assert item["bbox"][0] == 0.0

    def test_time_span(self, spec):
        record = make_record("0U_0R", "S1-RTC", "S1A", utc(2020, 1, 1))
        record = replace(record, time_end=utc(2020, 1, 2))

        properties = stac_item(spec, record)["properties"]

        assert properties["datetime"] is None
        assert properties["start_datetime"] == "2020-01-01T00:00:00Z"
        assert properties["end_datetime"] == "2020-01-02T00:00:00Z"

    def test_export_follows_view(self, small_catalog):
        view = small_catalog.filter(FilterPredicate(sources={"S1-RTC"}))

        items = list(export_stac_items(small_catalog, view))

        assert [item["properties"]["grid:cell"] for item in items] == ["317D_0R", "0U_0R"]
