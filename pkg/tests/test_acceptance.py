"""Acceptance criteria, one test per criterion.

Every test records ``(passed, detail)`` in ``conftest.ACCEPTANCE`` before
asserting, and the terminal summary prints one line per criterion.
"""
import math

import numpy as np
import pytest
from conftest import ACCEPTANCE, PHYSICALITY

from accelcv.channel import BETA_RATIO_LIMIT, accelerated_tmsv, alpha_at, apply_channel, simplified_channel
from accelcv.config import ScenarioConfig
from accelcv.gaussian import log_negativity, tmsv_state, vacuum
from accelcv.montecarlo import monte_carlo_dense_coding, monte_carlo_teleportation
from accelcv.protocols import (
    build_locc_compensation,
    dense_coding_closed_form,
    dense_coding_mutual_information,
    optimal_fidelity_lower_bound,
    optimized_fidelity,
    teleportation_fidelity,
    teleportation_fidelity_closed_form,
)
from accelcv.sweeps import run_scenario

MC_SEED = 20261016


def record(k, ok, detail):
    ACCEPTANCE[k] = (bool(ok), detail)
    print(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def test_criterion_01_vacuum_separability():
    values = [log_negativity(vacuum(), m).log_negativity for m in ("auto", "standard", "general")]
    record(1, all(v == 0.0 for v in values), f"E(vacuum) = {values}")


def test_criterion_02_inertial_closed_forms():
    worst_f = worst_h = worst_state = 0.0
    for r in np.arange(0, 4.01, 0.5):
        worst_f = max(worst_f, abs(teleportation_fidelity_closed_form(1, 1, r) - 1 / (1 + math.exp(-2 * r))))
        worst_f = max(worst_f, abs(teleportation_fidelity(tmsv_state(r)).fidelity - 1 / (1 + math.exp(-2 * r))))
        for n in (1.0, 10.0, 20.0):
            want = math.log2(1 + 0.5 * n * math.exp(2 * r))
            worst_h = max(worst_h, abs(dense_coding_closed_form(1, 1, r, n) - want))
            # from the covariance matrix the squeezed variance carries eps * cosh(2r) absolute error
            h = dense_coding_mutual_information(tmsv_state(r), n).mutual_information
            worst_state = max(worst_state, abs(h - want))
    record(
        2,
        worst_f <= 1e-12 and worst_h <= 1e-12,
        f"max |dF| = {worst_f:.2e}, max |dH| = {worst_h:.2e} (covariance path {worst_state:.2e})",
    )


def test_criterion_03_two_path_equivalences():
    rng = np.random.default_rng(3)
    triples = np.column_stack([rng.uniform(0, 1, 1000), rng.uniform(0, 1, 1000), rng.uniform(0, 4, 1000)])
    worst = [0.0, 0.0, 0.0]
    for a1, a2, r in triples:
        direct = accelerated_tmsv(a1, a2, r)
        piped = apply_channel(simplified_channel(a1, a2), tmsv_state(r)).covariance
        worst[0] = max(worst[0], np.abs(direct.covariance - piped).max() / max(1.0, np.abs(piped).max()))
        worst[1] = max(worst[1], abs(teleportation_fidelity(direct).fidelity - teleportation_fidelity_closed_form(a1, a2, r)))
        h = dense_coding_mutual_information(direct, 10).mutual_information
        worst[2] = max(worst[2], abs(h - dense_coding_closed_form(a1, a2, r, 10)))
    record(
        3,
        max(worst) <= 1e-12,
        f"1000 triples: channel {worst[0]:.2e} (relative), fidelity {worst[1]:.2e}, information {worst[2]:.2e}",
    )


def test_criterion_04_beta_negligible(alpha_curve):
    worst = float(np.max(alpha_curve.beta_ratio))
    record(4, worst <= BETA_RATIO_LIMIT, f"max |beta|/|alpha| over {len(alpha_curve.alphas)} nodes = {worst:.2e}")


def test_criterion_05_monotonicity(alpha_curve):
    fine = np.linspace(0, alpha_curve.max_acceleration, 501)
    alphas = alpha_at(alpha_curve, fine)
    ok_alpha = bool(np.all(np.diff(alphas) < 0)) and bool(np.all(np.diff(alpha_curve.alphas) < 0))
    problems = []
    for kind, col in (("negativity_1d", "log_negativity"), ("fidelity_1d", "fidelity"), ("mutual_info_1d", "mutual_information")):
        art = run_scenario(ScenarioConfig(kind=kind, squeezing=(1.0, 2.0, 3.0)), alpha_curve)
        values = np.array(art.column(col))
        rs = np.array(art.column("r"))
        for r in (1.0, 2.0, 3.0):
            if np.any(np.diff(values[rs == r]) > 0):
                problems.append(f"{col} at r={r}")
    record(5, ok_alpha and not problems, f"alpha strictly decreasing: {ok_alpha}; increases found: {problems or 'none'}")


def test_criterion_06_argmax_ridge():
    r = 3.0
    scan = np.linspace(0, 1, 200)
    step = scan[1] - scan[0]
    worst = 0.0
    for a1 in np.linspace(0.05, 1.0, 20):
        values = [teleportation_fidelity_closed_form(a1, b, r) for b in scan]
        predicted = min(a1 / math.tanh(r), 1.0)
        worst = max(worst, abs(scan[int(np.argmax(values))] - predicted))
    record(6, worst <= step, f"max |argmax - alpha_I coth 3| = {worst:.4f}, grid step {step:.4f}")


def test_criterion_07_lower_bound_dominance(alpha_curve):
    acc = np.linspace(0, alpha_curve.max_acceleration, 40)
    alphas = alpha_at(alpha_curve, acc)
    worst, count, over = math.inf, 0, 0
    for r in (1.0, 2.0, 3.5):
        for a1 in alphas:
            for a2 in alphas:
                f = optimized_fidelity(a1, a2, r)
                worst = min(worst, f - optimal_fidelity_lower_bound(accelerated_tmsv(a1, a2, r)))
                over += f > 1
                count += 1
    record(7, worst >= 0 and over == 0, f"{count} points, min(F_opt - bound) = {worst:.3e}, F_opt > 1 at {over}")


@pytest.fixture(scope="module")
def locc_table(alpha_curve):
    cfg = ScenarioConfig(kind="locc_comparison", squeezing=(3.5,), n=(10.0, 20.0))
    art = run_scenario(cfg, alpha_curve)
    return {name: np.array(art.column(name)) for name in art.columns}


def test_criterion_08_locc_recovery(locc_table):
    t = locc_table
    at10 = t["n"] == 10.0
    f_ratio = t["fidelity_optimized"][at10] / t["fidelity_reference"][at10]
    h_ratio = t["mutual_information_optimized"] / t["mutual_information_reference"]
    i = int(np.argmin(f_ratio))
    where = f"A_I={t['acceleration_I'][at10][i]:.3f}, A_II={t['acceleration_II'][at10][i]:.3f}"
    record(
        8,
        f_ratio.min() >= 0.89 and h_ratio.min() >= 0.85,
        f"min F_opt/F_ref = {f_ratio.min():.5f} (at {where}), min H_opt/H_ref = {h_ratio.min():.5f}",
    )


def test_criterion_09_dense_coding_gap(locc_table):
    t = locc_table
    gap = np.abs(t["mutual_information_optimized"] - t["mutual_information_reference"]) / t["mutual_information_reference"]
    g10, g20 = gap[t["n"] == 10.0].max(), gap[t["n"] == 20.0].max()
    record(9, g10 < 0.15 and g20 <= g10, f"max gap n=10: {g10:.5f}, n=20: {g20:.5f}")


MC_POINTS = [(0.0, 0.0, 0.0), (1.0, 1.0, 1.0), (0.9, 0.6, 1.0), (0.95, 0.8, 2.0), (0.7, 0.7, 0.5)]


def test_criterion_10_monte_carlo_oracle():
    worst = 0.0
    for k, (a1, a2, r) in enumerate(MC_POINTS):
        s = accelerated_tmsv(a1, a2, r)
        tel = monte_carlo_teleportation(s, 100_000, [MC_SEED, k])
        den = monte_carlo_dense_coding(s, 10, 100_000, [MC_SEED, k])
        worst = max(
            worst,
            abs(tel.value - teleportation_fidelity_closed_form(a1, a2, r)) / tel.stderr,
            abs(den.value - dense_coding_closed_form(a1, a2, r, 10)) / den.stderr,
        )
    record(10, worst <= 3, f"5 points x 2 protocols at 1e5 samples, worst deviation {worst:.2f} standard errors")


def test_criterion_11_physicality(alpha_curve):
    before = PHYSICALITY["checked"]
    rng = np.random.default_rng(11)
    for _ in range(300):
        a1, a2, r = rng.uniform(0.05, 1), rng.uniform(0.05, 1), rng.uniform(0.1, 4)
        s = accelerated_tmsv(a1, a2, r)
        apply_channel(simplified_channel(rng.uniform(0, 1), rng.uniform(0, 1)), s)
        if abs(a1 - a2) > 1e-9:
            apply_channel(build_locc_compensation(a1, a2, r).as_channel(), s)
    run_scenario(ScenarioConfig(kind="fidelity_2d", squeezing=(1.0, 3.5)), alpha_curve)
    monte_carlo_teleportation(accelerated_tmsv(0.8, 0.6, 1.0), 10_000, 1)
    checked = PHYSICALITY["checked"] - before
    violations = len(PHYSICALITY["violations"])
    record(
        11,
        checked > 0 and violations == 0,
        f"{checked} states checked in this test, {violations} violations so far, worst margin {PHYSICALITY['worst_margin']:.2e}",
    )


def test_criterion_12_determinism(alpha_curve):
    configs = [
        ScenarioConfig(kind="negativity_2d"),
        ScenarioConfig(kind="locc_comparison", accelerations=(0.0, 0.1, 0.3, 0.5)),
        ScenarioConfig(kind="fidelity_1d", accelerations=(0.0, 0.25, 0.5), mc_samples=10_000, seed=1),
    ]
    same = []
    for cfg in configs:
        a = run_scenario(cfg, alpha_curve).csv_text()
        b = run_scenario(cfg, alpha_curve).csv_text()
        c = run_scenario(ScenarioConfig(**{**cfg.to_dict(), "threads": 4}), alpha_curve).csv_text()
        same.append(a == b == c)
    record(12, all(same), f"byte-identical reruns (incl. 4 threads): {same}")
