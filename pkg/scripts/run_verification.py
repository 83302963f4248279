"""Run every verification suite and print one line per check.

Equivalent to ``wreathmolien verify --suite all --format text``; extra
arguments are passed through (e.g. ``--samples 20 --identity-table corrected``).
"""

import sys

from wreathmolien.cli import run

if __name__ == "__main__":
    sys.exit(run(["verify", "--suite", "all", "--format", "text", *sys.argv[1:]]))
