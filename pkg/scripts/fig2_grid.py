"""Data behind the exponential-mean grid (revelation): writes out/fig2_grid.csv."""

import sys
from pathlib import Path

from contract_lab.cli import main

ROOT = Path(__file__).resolve().parent.parent

if __name__ == "__main__":
    out = ROOT / "out" / "fig2_grid.csv"
    sys.exit(main(["grid", "revelation", "--config", str(ROOT / "configs" / "fig2-grid.json"), "--out", str(out)]))
