#!/usr/bin/env python3
"""Run the concordance/degeneracy proposition harness.

Usage: run_proposition_harness.py [samples] [seed]
"""

import sys

from harmbounds.cli import main

if __name__ == "__main__":
    samples = sys.argv[1] if len(sys.argv) > 1 else "10000"
    seed = sys.argv[2] if len(sys.argv) > 2 else "42"
    sys.exit(main(["verify", "--samples", samples, "--seed", seed]))
