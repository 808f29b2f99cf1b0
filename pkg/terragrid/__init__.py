# terragrid/__init__.py
"""Geographic sampling grid, EO metadata catalog and scene selection."""

__version__ = "1.0.0"
