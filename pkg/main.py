#!/usr/bin/env python3
"""
Main entry point for the Rician finite-blocklength bounds toolkit.

This script runs one sweep of achievability and converse bounds and writes
the rows as CSV.
"""

import sys
import os

# Add the current directory to Python path to import our modules
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from rician_fbl.main import main

if __name__ == "__main__":
    sys.exit(main())
