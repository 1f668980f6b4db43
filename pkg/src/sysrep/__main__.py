"""Allow ``python3 -m sysrep``."""

import sys

from .cli import main

sys.exit(main())
