# terragrid/core/__init__.py
"""Core grid, catalog and sampling functionality."""

from .catalog import Catalog, FilterPredicate, MetadataRecord, SplitManifest
from .config import Config
from .errors import TerragridError
from .grid import CellId, GridSpec, make_grid_spec
from .provider import SceneProvider, SyntheticProvider
from .sampler import SamplerConfig, run_campaign, select_scene

__all__ = [
    "Catalog",
    "CellId",
    "Config",
    "FilterPredicate",
    "GridSpec",
    "MetadataRecord",
    "SamplerConfig",
    "SceneProvider",
    "SplitManifest",
    "SyntheticProvider",
    "TerragridError",
    "make_grid_spec",
    "run_campaign",
    "select_scene",
]
