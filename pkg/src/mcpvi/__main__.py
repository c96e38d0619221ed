"""Entry point for ``python -m mcpvi``."""

import sys

from .cli import main

sys.exit(main())
