# terragrid/main.py
"""Main command-line module."""

import argparse
import logging
import sys
from typing import List, Optional

from terragrid import __version__
from terragrid.commands import setup_all_commands
from terragrid.core.config import Config
from terragrid.core.errors import TerragridError
from terragrid.core.grid import DEFAULT_EARTH_RADIUS_KM, DEFAULT_SPACING_KM

logger = logging.getLogger(__name__)


# Setup logging configuration
def setup_logging(quiet: bool = False, log_file: Optional[str] = None):
    """Configure logging for one CLI run. Diagnostics only ever go to stderr or the log file."""
    # Clear any existing handlers
    root_logger = logging.getLogger()
    root_logger.handlers.clear()
    root_logger.setLevel(logging.DEBUG if log_file else logging.INFO)

    # Create formatters
    detailed_formatter = logging.Formatter(
        "[%(asctime)s] %(levelname)-8s | %(name)-25s | %(funcName)-20s:%(lineno)-4d | %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    )

    console_formatter = logging.Formatter(
        "[%(asctime)s] %(levelname)-8s | %(message)s",
        datefmt="%H:%M:%S",
    )

    # File handler - detailed logging
    if log_file:
        file_handler = logging.FileHandler(log_file, encoding="utf-8", mode="a")
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(detailed_formatter)
        root_logger.addHandler(file_handler)

    # Console handler - cleaner output
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(logging.WARNING if quiet else logging.INFO)
    console_handler.setFormatter(console_formatter)
    root_logger.addHandler(console_handler)

    return logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="terragrid",
        description="Global sampling grid, EO metadata catalog and scene selection.",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument(
        "--spacing-km",
        type=float,
        default=DEFAULT_SPACING_KM,
        help="Nominal grid spacing D in km",
    )
    parser.add_argument(
        "--earth-radius-km",
        type=float,
        default=DEFAULT_EARTH_RADIUS_KM,
        help="Sphere radius in km (WGS84 equatorial radius)",
    )
    parser.add_argument("--quiet", action="store_true", help="Only log warnings and errors")
    parser.add_argument("--log-file", help="Append a detailed debug log to this file")

    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
    subparsers.required = True
    setup_all_commands(subparsers)

    version = subparsers.add_parser("version", help="Print the version")
    version.set_defaults(handler=_handle_version)
    return parser


def _handle_version(args, config: Config) -> int:
    sys.stdout.write(f"terragrid {__version__}\n")
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point for the command line. Returns the process exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)  # usage errors exit 2 here

    setup_logging(quiet=args.quiet, log_file=args.log_file)
    config = Config.from_args(args)
    logger.debug(f"Running '{args.command}' with {config!r}")

    try:
        return args.handler(args, config)
    except TerragridError as e:
        logger.error(f"❌ {e}")
        return 1
    except OSError as e:
        logger.error(f"❌ {e}")
        return 1
    except KeyboardInterrupt:
        logger.info("👋 Interrupted")
        return 130
    except Exception as e:
        logger.error(f"💥 Unexpected error: {e}", exc_info=True)
        return 1


if __name__ == "__main__":
    sys.exit(main())
