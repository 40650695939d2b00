"""Command-line front end: ``python -m accelcv <command> ...``.

Single-point commands print JSON to stdout; ``sweep`` writes CSV and JSON
files under ``--out``.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .config import ConfigError, ScenarioConfig, config_from_mapping, validate_config

log = logging.getLogger("accelcv")


def _load(args, **overrides) -> ScenarioConfig:
    extra = {"threads": args.threads, "seed": args.seed, **overrides}
    if args.config:
        return validate_config(args.config, extra)
    return config_from_mapping({}, extra)


def _alpha(cfg: ScenarioConfig, accel: float, cache: dict) -> float:
    """alpha at one acceleration; direct overlap at admissible nodes, curve otherwise."""
    from .channel import alpha_at
    from .modes import MIN_DIRECT_ACCELERATION, wedge_overlaps
    from .sweeps import load_curve

    if accel == 0:
        return 1.0
    if accel >= MIN_DIRECT_ACCELERATION:
        return abs(wedge_overlaps(accel, "I", cfg.mode_parameters(), cfg.resolution()).alpha)
    if "curve" not in cache:
        cache["curve"] = load_curve(cfg)
    return alpha_at(cache["curve"], accel)


def _alphas(args, cfg) -> tuple[float, float]:
    if args.alpha is not None:
        a1, a2 = args.alpha
        return a1, a2
    cache: dict = {}
    a1 = _alpha(cfg, args.accel[0], cache)
    a2 = a1 if args.accel[1] == args.accel[0] else _alpha(cfg, args.accel[1], cache)
    return a1, a2


def _emit(payload: dict) -> None:
    json.dump(payload, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def cmd_overlaps(args) -> int:
    from .modes import Chart, Wedge, build_inertial_mode, build_rindler_mode, dump_mode_csv, wedge_overlaps

    cfg = _load(args)
    params, res = cfg.mode_parameters(), cfg.resolution()
    out = []
    for accel in args.acceleration:
        rep = wedge_overlaps(accel, args.wedge, params, res)
        out.append(
            {
                "acceleration": accel,
                "wedge": args.wedge,
                "alpha": abs(rep.alpha),
                "beta_abs": abs(rep.beta),
                "beta_ratio": abs(rep.beta) / abs(rep.alpha),
                "negative_fraction_inertial": rep.negative_fraction_inertial,
                "negative_fraction_rindler": rep.negative_fraction_rindler,
                "grid_points": rep.grid_points,
            }
        )
        if args.dump_modes:
            out_dir = Path(args.out)
            out_dir.mkdir(parents=True, exist_ok=True)
            for chart, builder in ((Chart.MINKOWSKI, build_inertial_mode), (Chart.RINDLER, build_rindler_mode)):
                mode = builder(params.spec(accel, Wedge(args.wedge), chart), res)
                dump_mode_csv(mode, out_dir / f"mode_{chart.value.lower()}_{args.wedge}_{accel!r}.csv")
    _emit({"overlaps": out})
    return 0


def cmd_negativity(args) -> int:
    from .channel import accelerated_tmsv
    from .gaussian import log_negativity

    cfg = _load(args)
    a1, a2 = _alphas(args, cfg)
    rep = log_negativity(accelerated_tmsv(a1, a2, args.r), method=args.method)
    _emit({"alpha_I": a1, "alpha_II": a2, "r": args.r, "delta": rep.delta, "nu_pt_min": rep.nu_pt_min, "log_negativity": rep.log_negativity})
    return 0


def cmd_teleport(args) -> int:
    from .channel import accelerated_tmsv
    from .montecarlo import monte_carlo_teleportation
    from .protocols import teleportation_fidelity

    cfg = _load(args)
    a1, a2 = _alphas(args, cfg)
    state = accelerated_tmsv(a1, a2, args.r)
    res = teleportation_fidelity(state)
    payload = {
        "alpha_I": a1, "alpha_II": a2, "r": args.r,
        "fidelity": res.fidelity, "gamma_det": res.gamma_det, "lower_bound": res.lower_bound,
        "classical_threshold_exceeded": res.classical_threshold_exceeded,
    }
    if args.mc_samples:
        est = monte_carlo_teleportation(state, args.mc_samples, cfg.seed or 0, workers=cfg.threads)
        payload.update(fidelity_mc=est.value, fidelity_mc_stderr=est.stderr)
    _emit(payload)
    return 0


def cmd_densecode(args) -> int:
    from .channel import accelerated_tmsv
    from .montecarlo import monte_carlo_dense_coding
    from .protocols import dense_coding_mutual_information

    cfg = _load(args)
    a1, a2 = _alphas(args, cfg)
    state = accelerated_tmsv(a1, a2, args.r)
    res = dense_coding_mutual_information(state, args.n)
    payload = {
        "alpha_I": a1, "alpha_II": a2, "r": args.r, "n": args.n,
        "mutual_information": res.mutual_information, "v_q_plus": res.v_q_plus, "v_p_minus": res.v_p_minus,
    }
    if args.mc_samples:
        est = monte_carlo_dense_coding(state, args.n, args.mc_samples, cfg.seed or 0, workers=cfg.threads)
        payload.update(mutual_information_mc=est.value, mutual_information_mc_stderr=est.stderr)
    _emit(payload)
    return 0


def cmd_optimize(args) -> int:
    from .channel import accelerated_tmsv
    from .protocols import (
        build_locc_compensation,
        decompose_locc,
        dense_coding_mutual_information,
        optimized_fidelity,
        optimized_mutual_information,
        symmetric_reference_alpha,
        teleportation_fidelity,
    )

    cfg = _load(args)
    a1, a2 = _alphas(args, cfg)
    chan = build_locc_compensation(a1, a2, args.r)
    tau, side = decompose_locc(chan)
    a_ref = symmetric_reference_alpha(a1, a2, args.r)
    ref = accelerated_tmsv(a_ref, a_ref, args.r)
    state = accelerated_tmsv(a1, a2, args.r)
    _emit(
        {
            "alpha_I": a1, "alpha_II": a2, "r": args.r, "n": args.n,
            "epsilon": chan.epsilon, "theta": chan.theta, "transmissivity": tau, "attenuated_side": side.value,
            "fidelity": teleportation_fidelity(state).fidelity,
            "fidelity_optimized": optimized_fidelity(a1, a2, args.r),
            "fidelity_reference": teleportation_fidelity(ref).fidelity,
            "mutual_information": dense_coding_mutual_information(state, args.n).mutual_information,
            "mutual_information_optimized": optimized_mutual_information(a1, a2, args.r, args.n),
            "mutual_information_reference": dense_coding_mutual_information(ref, args.n).mutual_information,
            "alpha_reference": a_ref,
        }
    )
    return 0


def cmd_sweep(args) -> int:
    from .sweeps import run_scenario

    overrides = {"output": args.out} if args.out else {}
    if args.kind:
        overrides["kind"] = args.kind
    cfg = _load(args, **overrides)
    log.info("running %s (%s)", cfg.name, cfg.kind.value)
    art = run_scenario(cfg)
    csv_path, json_path = art.write(cfg.output, cfg.name)
    print(csv_path)
    print(json_path)
    return 0


def cmd_validate(args) -> int:
    cfg = _load(args)
    _emit(cfg.to_dict())
    return 0


def _point_args(p: argparse.ArgumentParser, n: bool = False) -> None:
    group = p.add_mutually_exclusive_group()
    group.add_argument("--accel", nargs=2, type=float, metavar=("A_I", "A_II"), default=[0.1, 0.1], help="proper accelerations")
    group.add_argument("--alpha", nargs=2, type=float, metavar=("ALPHA_I", "ALPHA_II"), help="overlaps, bypassing the mode computation")
    p.add_argument("--r", type=float, default=1.0, help="squeezing")
    if n:
        p.add_argument("--n", type=float, default=10.0, help="message variance scale")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="YAML scenario file")
    common.add_argument("--out", help="output directory")
    common.add_argument("--threads", type=int, default=None)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="accelcv", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("overlaps", parents=[common], help="Bogoliubov overlaps at given accelerations")
    p.add_argument("acceleration", type=float, nargs="+")
    p.add_argument("--wedge", choices=["I", "II"], default="I")
    p.add_argument("--dump-modes", action="store_true", help="write sampled mode functions as CSV under --out")
    p.set_defaults(func=cmd_overlaps)

    p = sub.add_parser("negativity", parents=[common], help="log-negativity of the accelerated resource")
    _point_args(p)
    p.add_argument("--method", choices=["auto", "standard", "general"], default="auto")
    p.set_defaults(func=cmd_negativity)

    p = sub.add_parser("teleport", parents=[common], help="teleportation fidelity")
    _point_args(p)
    p.add_argument("--mc-samples", type=int, default=0)
    p.set_defaults(func=cmd_teleport)

    p = sub.add_parser("densecode", parents=[common], help="dense-coding mutual information")
    _point_args(p, n=True)
    p.add_argument("--mc-samples", type=int, default=0)
    p.set_defaults(func=cmd_densecode)

    p = sub.add_parser("optimize", parents=[common], help="LOCC compensation and the symmetric reference")
    _point_args(p, n=True)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("sweep", parents=[common], help="run a scenario and write CSV + JSON")
    p.add_argument("--kind", help="override the sweep kind of the config")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("validate", parents=[common], help="validate a config and print it with defaults filled in")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
