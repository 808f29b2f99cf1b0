# terragrid/__main__.py
"""Allow running the CLI with ``python -m terragrid``."""

import sys

from terragrid.main import main

sys.exit(main())
