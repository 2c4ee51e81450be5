#!/usr/bin/env python3
"""
Entry point for the oscillatory quadrature CLI.
"""
import sys
from src.main import main

if __name__ == "__main__":
    sys.exit(main())
