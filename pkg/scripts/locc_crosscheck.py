"""Cross-check the balancing channel.

Compares the closed-form optimized fidelity with the fidelity of the state
actually sent through the channel, finds the squeezing below which the
channel stops helping, and reports the recovery ratios against the
symmetric equal-negativity reference.

    python scripts/locc_crosscheck.py
"""
import numpy as np

from accelcv.channel import alpha_at, compute_alpha_curve
from accelcv.protocols import (
    dense_coding_closed_form,
    optimized_fidelity,
    optimized_mutual_information,
    pipeline_optimized_fidelity,
    symmetric_reference_alpha,
    teleportation_fidelity_closed_form,
)


def main():
    rng = np.random.default_rng(0)
    dev = 0.0
    for _ in range(2000):
        a1, a2, r = rng.uniform(0.05, 1), rng.uniform(0.05, 1), rng.uniform(0.1, 4)
        dev = max(dev, abs(optimized_fidelity(a1, a2, r) - pipeline_optimized_fidelity(a1, a2, r)))
    print(f"closed form vs channel pipeline, 2000 random points: max |dF| = {dev:.2e}")

    curve = compute_alpha_curve()
    acc = np.linspace(0, curve.max_acceleration, 40)
    alphas = alpha_at(curve, acc)
    print("\nr     asymmetric points where F_opt < F")
    for r in np.arange(0.5, 3.51, 0.25):
        worse = sum(
            optimized_fidelity(a1, a2, r) < teleportation_fidelity_closed_form(a1, a2, r)
            for a1 in alphas
            for a2 in alphas
            if a1 != a2
        )
        print(f"{r:4.2f}  {worse}")

    r = 3.5
    f_min = h_min = (np.inf, None)
    gap_max = (0.0, None)
    for i, a1 in enumerate(alphas):
        for j, a2 in enumerate(alphas):
            a_ref = symmetric_reference_alpha(a1, a2, r)
            f = optimized_fidelity(a1, a2, r) / teleportation_fidelity_closed_form(a_ref, a_ref, r)
            h_ref = dense_coding_closed_form(a_ref, a_ref, r, 10)
            h = optimized_mutual_information(a1, a2, r, 10)
            point = (acc[i], acc[j])
            f_min = min(f_min, (f, point))
            h_min = min(h_min, (h / h_ref, point))
            gap_max = max(gap_max, (abs(h - h_ref) / h_ref, point))
    print("\nr = 3.5 over the 40 x 40 acceleration grid")
    print(f"  min F_opt / F_ref = {f_min[0]:.5f} at A = {f_min[1]}")
    print(f"  min H_opt / H_ref = {h_min[0]:.5f} at A = {h_min[1]}")
    print(f"  max |H_opt - H_ref| / H_ref (n = 10) = {gap_max[0]:.5f} at A = {gap_max[1]}")


if __name__ == "__main__":
    main()
