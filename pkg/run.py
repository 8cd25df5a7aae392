#!/usr/bin/env python3
"""Run Zeeman Lasing."""

import sys
from zeeman_lasing.main import main

if __name__ == "__main__":
    sys.exit(main())
