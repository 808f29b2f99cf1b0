# terragrid/commands/stats.py
"""Grid summary command."""

import sys

from terragrid.core.grid import grid_summary
from terragrid.utils.formatters import write_jsonl, write_text_block


def setup_stats_command(subparsers):
    """Setup the grid summary command."""
    stats = subparsers.add_parser("stats", help="Summary of the grid for --spacing-km/--earth-radius-km")
    stats.add_argument("--format", choices=("text", "jsonl"), default="text")

    def stats_command(args, config) -> int:
        summary = grid_summary(config.grid_spec())
        if config.output_format("text") == "jsonl":
            write_jsonl([summary], sys.stdout)
        else:
            write_text_block(summary, sys.stdout)
        return 0

    stats.set_defaults(handler=stats_command)
