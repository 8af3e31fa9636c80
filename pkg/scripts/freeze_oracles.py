"""Recompute the sympy oracle values and write tests/frozen_values.json."""
import json
import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))

from oracles import frozen_values  # noqa: E402

if __name__ == "__main__":
    out = ROOT / "tests" / "frozen_values.json"
    out.write_text(json.dumps(frozen_values(), indent=1, sort_keys=True) + "\n")
    print(f"wrote {out}")
