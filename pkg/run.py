#!/usr/bin/env python3
"""
terragrid query service
Entry point for the read-only JSON API over the grid and a catalog.

For production use gunicorn instead:
    gunicorn "web.app:create_app()"
"""

import logging

logger = logging.getLogger(__name__)


def run_web_server():
    """Run the query service."""
    from web.app import run_web

    run_web()


if __name__ == "__main__":
    run_web_server()
    logger.info("👋 Query service has stopped")
