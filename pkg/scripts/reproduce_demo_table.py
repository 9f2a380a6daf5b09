#!/usr/bin/env python3
"""Print the demo study's sharp-bound table in text and JSON form."""

import sys

from harmbounds.cli import main

if __name__ == "__main__":
    status = main(["example"])
    if status == 0:
        status = main(["example", "--format", "json"])
    sys.exit(status)
