#!/usr/bin/env python3
"""
Cobham Toolkit CLI
Inspect automatic sequences and extract eventual-periodicity certificates.
"""

import sys

from cobhamkit.cli import main

if __name__ == "__main__":
    sys.exit(main())
