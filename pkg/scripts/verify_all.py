"""Run the full verification for both built-in maps and write text and JSON reports."""

import argparse
import json
import time
from pathlib import Path

from ratdyn.verify import PIPELINES, verify_theorem


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="reports", help="output directory")
    ap.add_argument("--depth", type=int, default=12)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, make in PIPELINES.items():
        t0 = time.perf_counter()
        rep = verify_theorem(make(4), depth=args.depth)
        (out / f"verify-{name}.txt").write_text(rep.to_text() + "\n", encoding="utf-8")
        (out / f"verify-{name}.json").write_text(json.dumps(rep.to_dict(), indent=2) + "\n", encoding="utf-8")
        print(f"{name}: {rep.status} ({time.perf_counter() - t0:.1f} s)")


if __name__ == "__main__":
    main()
