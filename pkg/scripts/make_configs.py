"""Write the example configs in configs/ from their definitions in contract_lab.config."""

import json
from pathlib import Path

from contract_lab.config import builtin_configs

ROOT = Path(__file__).resolve().parent.parent


def main() -> None:
    out = ROOT / "configs"
    out.mkdir(exist_ok=True)
    for name, cfg in builtin_configs().items():
        (out / f"{name}.json").write_text(json.dumps(cfg, indent=2) + "\n", encoding="utf-8")
        print(out / f"{name}.json")


if __name__ == "__main__":
    main()
