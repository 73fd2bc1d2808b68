"""
Run the ``retirement-thiele`` command with ``python -m retirement_thiele``.
"""

import sys

from retirement_thiele.cli.main import main

if __name__ == "__main__":
    sys.exit(main())
