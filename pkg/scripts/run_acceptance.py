#!/usr/bin/env python3
"""Print the acceptance lines (same checks as tests/test_acceptance.py)."""
import os
import runpy
import sys

here = os.path.dirname(os.path.abspath(__file__))
sys.argv = [os.path.join(here, "..", "tests", "test_acceptance.py")]
runpy.run_path(sys.argv[0], run_name="__main__")
