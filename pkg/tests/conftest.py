"""Shared fixtures for the terragrid test suite."""

import json
from datetime import datetime, timezone

import pytest

from terragrid.core.catalog import Catalog, MetadataRecord
from terragrid.core.grid import make_grid_spec, parse_cell


def utc(year, month=1, day=1, hour=0, minute=0, second=0):
    return datetime(year, month, day, hour, minute, second, tzinfo=timezone.utc)


def make_record(cell, source, product_id, time_start, cloud=None, nodata=None, **extra):
    return MetadataRecord(
        cell=parse_cell(cell) if isinstance(cell, str) else cell,
        source=source,
        product_id=product_id,
        time_start=time_start,
        cloud_fraction=cloud,
        nodata_fraction=nodata,
        extra=extra,
    )


@pytest.fixture(scope="session")
def spec():
    """The default 10 km grid."""
    return make_grid_spec()


@pytest.fixture(scope="session")
def coarse_spec():
    """A 1000 km grid small enough for exhaustive scans."""
    return make_grid_spec(1000.0)


@pytest.fixture
def small_catalog(spec):
    records = [
        make_record("0U_0R", "S2-L1C", "S2A_001", utc(2020, 1, 10), cloud=0.0, nodata=0.0),
        make_record("0U_0R", "S2-L1C", "S2B_002", utc(2020, 3, 5), cloud=0.3, nodata=0.01),
        make_record("0U_0R", "S1-RTC", "S1A_001", utc(2020, 1, 8)),
        make_record("201U_54L", "S2-L1C", "S2A_003", utc(2021, 6, 1), cloud=0.1, nodata=0.2),
        make_record("317D_0R", "S1-RTC", "S1A_002", utc(2019, 12, 31, 23, 59, 59)),
    ]
    return Catalog(spec, records)


@pytest.fixture
def write_jsonl(tmp_path):
    """Write rows to a JSONL file under tmp_path and return its path."""

    def _write(name, rows):
        path = tmp_path / name
        with open(path, "w", encoding="utf-8", newline="\n") as stream:
            for row in rows:
                stream.write(json.dumps(row) + "\n")
        return path

    return _write
