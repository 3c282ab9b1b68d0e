#!/usr/bin/env python3
"""
Parallel guided ejection search - command line

    python scripts/main.py solve --instance lc101.txt --workers 4 --out lc101.sol
    python scripts/main.py profile --sizes 100,200,400,800 --reps 5 --report scaling.csv
    python scripts/main.py validate --instance lc101.txt --solution lc101.sol
"""

import sys
from pathlib import Path

# Add project root to path
project_root = Path(__file__).resolve().parent.parent
sys.path.append(str(project_root))

from src.cli.main import main

if __name__ == "__main__":
    sys.exit(main())
