# terragrid/data/__init__.py
"""Reference data for terragrid."""

from .reference import REFERENCE_DATASETS, get_all_references, get_reference

__all__ = ["REFERENCE_DATASETS", "get_all_references", "get_reference"]
