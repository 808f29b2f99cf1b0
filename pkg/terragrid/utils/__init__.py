# terragrid/utils/__init__.py
"""Utility functions for terragrid."""

from .helpers import (
    format_timestamp,
    parse_bbox,
    parse_float_list,
    parse_point,
    parse_timestamp,
)

__all__ = [
    "format_timestamp",
    "parse_bbox",
    "parse_float_list",
    "parse_point",
    "parse_timestamp",
]
