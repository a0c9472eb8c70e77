"""Garbling and restriction trajectories for the Exp(0.5) / Exp(0.01) scenario.

Writes out/fig6_trajectories.json with both paths and the shared anchors,
plus the two sweep CSVs.
"""

import sys
from pathlib import Path

from contract_lab.cli import emit, main, render_json
from contract_lab.config import load_config
from contract_lab.parallel import worker_count
from contract_lab.welfare import build_trajectories

ROOT = Path(__file__).resolve().parent.parent


def run() -> int:
    config = ROOT / "configs" / "fig6-trajectories.json"
    out = ROOT / "out"
    out.mkdir(exist_ok=True)
    cfg = load_config(config)
    garb, rest = build_trajectories(cfg.scenario(), cfg.grids.eps_n or 101, "fig6", workers=worker_count())
    emit(render_json("trajectories", {"trajectories": [garb.to_dict(), rest.to_dict()]}), str(out / "fig6_trajectories.json"))
    for kind in ("garbling", "restriction"):
        code = main(["sweep", kind, "--config", str(config), "--out", str(out / f"fig6_{kind}.csv")])
        if code:
            return code
    return 0


if __name__ == "__main__":
    sys.exit(run())
