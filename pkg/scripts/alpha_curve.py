"""Compute alpha(A) at the grid nodes and check it against a refined grid.

    python scripts/alpha_curve.py [--refine]
"""
import argparse

from accelcv.channel import DEFAULT_ALPHA_GRID
from accelcv.modes import ModeParameters, Resolution, wedge_overlaps


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--refine", action="store_true", help="also evaluate at twice the sampling density")
    parser.add_argument("--mass", type=float, default=0.1)
    parser.add_argument("--width", type=float, default=2.0)
    parser.add_argument("--omega0", type=float, default=5.0)
    args = parser.parse_args()

    params = ModeParameters(mass=args.mass, width=args.width, omega0=args.omega0)
    base, fine = Resolution(), Resolution().refined(2)
    header = f"{'A':>6s} {'alpha':>20s} {'|beta|/|alpha|':>15s} {'neg. fraction':>14s}"
    print(header + (f" {'d(alpha) refined':>17s}" if args.refine else ""))
    for a in DEFAULT_ALPHA_GRID:
        if a > params.max_acceleration:
            break
        rep = wedge_overlaps(a, "I", params, base)
        line = f"{a:6.3f} {abs(rep.alpha):20.16f} {abs(rep.beta) / abs(rep.alpha):15.2e} {rep.negative_fraction_rindler:14.3e}"
        if args.refine:
            ref = wedge_overlaps(a, "I", params, fine)
            line += f" {abs(ref.alpha) - abs(rep.alpha):17.2e}"
        print(line)


if __name__ == "__main__":
    main()
