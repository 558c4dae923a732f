"""Allow running as python -m cftnvm"""

import sys

from .cli import main

sys.exit(main())
