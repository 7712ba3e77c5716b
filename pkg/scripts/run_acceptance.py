#!/usr/bin/env python3
"""Run the nine acceptance checks and print one PASS/FAIL line each."""
import runpy
import sys
from pathlib import Path

if __name__ == "__main__":
    mod = runpy.run_path(str(Path(__file__).resolve().parent.parent / "tests" / "test_acceptance.py"))
    sys.exit(mod["main"]())
