"""Run every sweep in the figure catalog and write CSV + JSON tables.

    python scripts/reproduce_figures.py --out results --threads 4
"""
import argparse
import time

from accelcv.config import ScenarioConfig
from accelcv.sweeps import FIGURE_CATALOG, load_curve, run_scenario


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="results")
    parser.add_argument("--threads", type=int, default=4)
    args = parser.parse_args()

    kinds = []
    for kind, _ in FIGURE_CATALOG.values():
        if kind is not None and kind not in kinds:
            kinds.append(kind)

    curve = load_curve(ScenarioConfig(threads=args.threads))
    for kind in kinds:
        cfg = ScenarioConfig(kind=kind, threads=args.threads, output=args.out)
        t0 = time.perf_counter()
        art = run_scenario(cfg, curve)
        csv_path, _ = art.write(args.out, cfg.name)
        print(f"{kind.value:16s} {len(art.rows):6d} rows  {time.perf_counter() - t0:6.1f} s  -> {csv_path}")

    print("\nfigure -> table")
    for figure, (kind, what) in FIGURE_CATALOG.items():
        print(f"  {figure:30s} {kind.value if kind else '-':16s} {what}")


if __name__ == "__main__":
    main()
