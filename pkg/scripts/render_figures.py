"""Render the basin picture of phi^4 and a plot of C4 near its singular point."""

import argparse
from pathlib import Path

from ratdyn.cli import named_curve
from ratdyn.maps import builtin_map
from ratdyn.render import RenderConfig, render, render_curve


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="figures", help="output directory")
    ap.add_argument("--size", type=int, default=800)
    ap.add_argument("--format", choices=("png", "ppm"), default="png")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    phi = builtin_map("phi")

    cfg = RenderConfig(width=args.size, height=args.size)
    res = render(phi, cfg, out / f"basins.{args.format}")
    print("\n".join(res.lines()))

    C4, _ = named_curve(phi, "C4")
    cfg = RenderConfig(width=args.size, height=args.size, window=(-1.0, 1.0, -10.0, -8.0))
    res = render_curve(C4, cfg, out / f"c4.{args.format}", marks=[(0.0, -9.0)])
    print("\n".join(res.lines()))


if __name__ == "__main__":
    main()
