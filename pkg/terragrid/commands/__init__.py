# terragrid/commands/__init__.py
"""Command modules for the terragrid CLI."""

from terragrid.commands.catalog import setup_catalog_commands
from terragrid.commands.cell import setup_cell_commands
from terragrid.commands.grid import setup_grid_commands
from terragrid.commands.sample import setup_sample_commands
from terragrid.commands.stats import setup_stats_command


def setup_all_commands(subparsers):
    """Setup all CLI commands."""
    setup_cell_commands(subparsers)
    setup_grid_commands(subparsers)
    setup_catalog_commands(subparsers)
    setup_sample_commands(subparsers)
    setup_stats_command(subparsers)


__all__ = [
    "setup_all_commands",
    "setup_cell_commands",
    "setup_grid_commands",
    "setup_catalog_commands",
    "setup_sample_commands",
    "setup_stats_command",
]
