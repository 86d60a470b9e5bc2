#!/usr/bin/env python3
"""Regenerate goldens/golden_vectors.json; run from the repository root.

Thin launcher so the generator works without installing the package:
it just puts this directory on the path and delegates.
"""

import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from kkoracle.generate import main

if __name__ == "__main__":
    sys.exit(main())
