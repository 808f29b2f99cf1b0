# terragrid/data/reference.py
"""
Reference volumes of large EO datasets.

Each entry's printed volume is sample_count * patch_px^2 pixels (per band, at
the highest resolution), in gigapixels. Only datasets whose published volume
follows that formula are listed. Lookups are cached at module load.
"""

REFERENCE_DATASETS = [
    {
        "id": "bigearthnet",
        "name": "BigEarthNet",
        "modality": "S2 L2A, S1 GRD",
        "patch_px": 120,
        "count": 590_326,
        "coverage": "Europe",
        "gigapixels": 8.5,
    },
    {
        "id": "sen12ms-cr",
        "name": "SEN12MS-CR",
        "modality": "S2 L1C, S1 GRD",
        "patch_px": 256,
        "count": 122_218,
        "coverage": "Global",
        "gigapixels": 8.0,
    },
    {
        "id": "sen12ms-cr-ts",
        "name": "SEN12MS-CR-TS",
        "modality": "S2 L1C, S1 GRD",
        "patch_px": 256,
        "count": 467_340,
        "coverage": "Global",
        "gigapixels": 30.6,
    },
    {
        "id": "cloudsen12",
        "name": "CloudSEN12",
        "modality": "S2 L1C, S2 L2A, S1 GRD",
        "patch_px": 509,
        "count": 49_400,
        "coverage": "Global",
        "gigapixels": 12.8,
    },
    {
        "id": "seco",
        "name": "SeCo",
        "modality": "S2 L2A",
        "patch_px": 265,
        "count": 1_000_000,
        "coverage": "Global",
        "gigapixels": 70.2,
    },
    {
        "id": "ssl4eo-s12",
        "name": "SSL4EO-S12",
        "modality": "S2 L1C, S2 L2A, S1 GRD",
        "patch_px": 264,
        "count": 1_000_000,
        "coverage": "Global",
        "gigapixels": 69.7,
    },
    {
        "id": "satlas-naip",
        "name": "SATLAS (NAIP)",
        "modality": "NAIP",
        "patch_px": 8192,
        "count": 46_000,
        "coverage": "USA",
        "gigapixels": 3087.0,
    },
    {
        "id": "satlas-s2",
        "name": "SATLAS (S2)",
        "modality": "S2 L1C",
        "patch_px": 512,
        "count": 856_000,
        "coverage": "Global",
        "gigapixels": 224.4,
    },
    {
        "id": "graft-naip",
        "name": "GRAFT (NAIP)",
        "modality": "NAIP",
        "patch_px": 448,
        "count": 10_200_000,
        "coverage": "USA",
        "gigapixels": 2047.2,
    },
    {
        "id": "graft-s2",
        "name": "GRAFT (S2)",
        "modality": "S2 RGB",
        "patch_px": 448,
        "count": 8_700_000,
        "coverage": "Global",
        "gigapixels": 1746.1,
    },
    {
        "id": "global-s2",
        "name": "10 km grid, S2 L1C/L2A",
        "modality": "S2 L1C, S2 L2A",
        "patch_px": 1068,
        "count": 2_245_886,
        "coverage": "Global",
        "gigapixels": 2561.7,
    },
    {
        "id": "global-s1",
        "name": "10 km grid, S1 RTC",
        "modality": "S1 RTC",
        "patch_px": 1068,
        "count": 1_469_955,
        "coverage": "Global",
        "gigapixels": 1676.7,
    },
]

_REFERENCE_BY_ID = {entry["id"]: entry for entry in REFERENCE_DATASETS}


def get_all_references():
    """All reference entries in table order."""
    return REFERENCE_DATASETS


def get_reference(reference_id):
    """Find an entry by id (case-insensitive). O(1) dictionary lookup."""
    return _REFERENCE_BY_ID.get(reference_id.lower())
