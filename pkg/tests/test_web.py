"""Tests for the Flask query service."""

import pytest

from terragrid.core.catalog import Catalog
from terragrid.core.errors import InvalidParameterError
from terragrid.core.grid import make_grid_spec
from web.app import create_app
from web.config import WebConfig


class ServiceConfig(WebConfig):
    TESTING = True
    TERRAGRID_SPACING_KM = 10.0
    TERRAGRID_EARTH_RADIUS_KM = 6378.137
    TERRAGRID_CATALOG = None
    MAX_RESULTS = 50


@pytest.fixture
def client(small_catalog):
    return create_app(ServiceConfig, catalog=small_catalog).test_client()


class TestGridRoutes:
    def test_encode(self, client):
        response = client.get("/api/cell/encode?lat=0&lon=0")

        assert response.status_code == 200
        assert response.get_json() == {"cell": "0U_0R", "row": 0, "col": 0, "lat": 0.0, "lon": 0.0}

    def test_encode_needs_numbers(self, client):
        assert client.get("/api/cell/encode?lat=north&lon=0").status_code == 400
        assert client.get("/api/cell/encode?lat=0").status_code == 400

    def test_decode(self, client):
        data = client.get("/api/cell/201U_54L").get_json()

        assert (data["row"], data["col"]) == (201, -54)
        assert data["lat"] > 0 > data["lon"]

    def test_malformed_cell_is_bad_request(self, client):
        response = client.get("/api/cell/0U_0X")

        assert response.status_code == 400
        assert "error" in response.get_json()

    def test_cell_outside_grid_is_not_found(self, client):
        assert client.get("/api/cell/9999U_0R").status_code == 404

    def test_footprint(self, client):
        data = client.get("/api/cell/0U_0R/footprint?patch_px=1068&gsd=10").get_json()

        assert [f["properties"]["kind"] for f in data["features"]] == ["nominal", "patch"]

    def test_footprint_rejects_bad_patch(self, client):
        assert client.get("/api/cell/0U_0R/footprint?patch_px=-5&gsd=10").status_code == 400

    def test_summary(self, client):
        data = client.get("/api/grid/summary").get_json()

        assert data["rows"] == 2004
        assert data["equator_columns"] == 4008

    def test_points(self, client):
        data = client.get("/api/grid/points?bbox=-0.05,0.05,-0.05,0.05").get_json()

        assert data["type"] == "FeatureCollection"
        assert [f["properties"]["cell"] for f in data["features"]] == ["0U_0R"]

    def test_points_are_capped(self, client):
        response = client.get("/api/grid/points?bbox=0,10,0,10")

        assert response.status_code == 400
        assert "narrow" in response.get_json()["error"]

    def test_radius(self, client):
        data = client.get("/api/grid/radius?lat=0&lon=0&km=10.5").get_json()

        cells = {f["properties"]["cell"] for f in data["features"]}
        assert {"0U_0R", "1U_0R", "1D_0R", "0U_1R", "0U_1L"} <= cells


class TestCatalogRoutes:
    def test_cell_records(self, client):
        data = client.get("/api/catalog/cell/0U_0R").get_json()

        assert data["cell"] == "0U_0R"
        assert len(data["records"]) == 3

    def test_cell_without_records(self, client):
        assert client.get("/api/catalog/cell/5U_5R").status_code == 404

    def test_search(self, client):
        data = client.get("/api/catalog/search?sources=S2-L1C&max_cloud=0.2").get_json()

        assert data["count"] == 2
        assert sorted(r["product_id"] for r in data["records"]) == ["S2A_001", "S2A_003"]

    def test_search_by_time(self, client):
        data = client.get("/api/catalog/search?start=2020-01-01&end=2020-12-31").get_json()

        assert sorted(r["product_id"] for r in data["records"]) == ["S1A_001", "S2A_001", "S2B_002"]

    def test_search_bad_time(self, client):
        assert client.get("/api/catalog/search?start=yesterday-ish").status_code == 400

    def test_stats(self, client):
        data = client.get("/api/catalog/stats").get_json()

        assert data["records"] == 5
        assert data["cells"] == 3
        assert data["sources"] == ["S1-RTC", "S2-L1C"]
        assert data["pixels"] == 5 * 1068**2
        assert data["gigapixels"] == 0.0
        assert data["area_with_overlap_km2"] >= data["area_without_overlap_km2"] > 0

    def test_stats_reports_rounded_gigapixels(self, client):
        data = client.get("/api/catalog/stats?patch_px=20000").get_json()

        assert data["pixels"] == 5 * 20000**2
        assert data["gigapixels"] == 2.0

    @pytest.mark.parametrize("patch_px", ["1068.9", "-1", "0", "abc"])
    def test_stats_rejects_non_integer_patch(self, client, patch_px):
        assert client.get(f"/api/catalog/stats?patch_px={patch_px}").status_code == 400


class TestCreateApp:
    def test_empty_catalog_without_path(self):
        client = create_app(ServiceConfig).test_client()

        assert client.get("/api/catalog/stats").get_json()["records"] == 0

    def test_catalog_from_file(self, tmp_path):
        path = tmp_path / "served.csv"
        path.write_text(
            "cell,source,product_id,time_start\n0U_0R,S2-L1C,A,2020-01-01T00:00:00Z\n",
            encoding="utf-8",
        )

        class FileConfig(ServiceConfig):
            TERRAGRID_CATALOG = str(path)

        client = create_app(FileConfig).test_client()

        assert client.get("/api/catalog/cell/0U_0R").status_code == 200

    def test_catalog_on_another_grid(self):
        with pytest.raises(InvalidParameterError):
            create_app(ServiceConfig, catalog=Catalog(make_grid_spec(100.0)))
