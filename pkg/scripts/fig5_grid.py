"""Data behind the exponential-mean grid (garbling_prime): writes out/fig5_grid.csv."""

import sys
from pathlib import Path

from contract_lab.cli import main

ROOT = Path(__file__).resolve().parent.parent

if __name__ == "__main__":
    out = ROOT / "out" / "fig5_grid.csv"
    sys.exit(main(["grid", "garbling_prime", "--config", str(ROOT / "configs" / "fig5-grid.json"), "--out", str(out)]))
