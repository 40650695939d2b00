"""Scenario runner: turns a :class:`ScenarioConfig` into a CSV table plus JSON metadata.

Overlaps are computed once per ``alpha_grid`` node; every sweep point reads
alpha from the interpolated curve. Rows are emitted in grid order and floats
are written with ``repr``, so identical configs give byte-identical tables.
"""
from __future__ import annotations

import csv
import datetime as _dt
import hashlib
import io
import itertools
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .channel import AlphaCurve, accelerated_tmsv, alpha_at, compute_alpha_curve
from .config import ScenarioConfig, SweepKind
from .gaussian import log_negativity
from .montecarlo import monte_carlo_dense_coding, monte_carlo_teleportation
from .protocols import (
    build_locc_compensation,
    dense_coding_mutual_information,
    optimal_fidelity_lower_bound,
    optimized_fidelity,
    optimized_mutual_information,
    symmetric_reference_alpha,
    teleportation_fidelity,
)

__all__ = ["SweepArtifact", "SweepPointError", "FIGURE_CATALOG", "COLUMNS", "run_scenario", "load_curve"]

# figure -> (sweep kind, what to plot); the geometry sketch has no data
FIGURE_CATALOG = {
    "accelerated_observers_sketch": (None, "schematic only"),
    "mode_functions": (SweepKind.ALPHA_CURVE, "`accelcv overlaps --dump-modes` at A = 0.1"),
    "alpha_vs_acceleration": (SweepKind.ALPHA_CURVE, "alpha vs acceleration"),
    "negativity_symmetric": (SweepKind.NEGATIVITY_1D, "log_negativity vs acceleration per r"),
    "negativity_asymmetric": (SweepKind.NEGATIVITY_2D, "log_negativity over (acceleration_I, acceleration_II)"),
    "fidelity_symmetric": (SweepKind.FIDELITY_1D, "fidelity vs acceleration per r"),
    "fidelity_asymmetric": (SweepKind.FIDELITY_2D, "fidelity_clipped over the acceleration plane per r"),
    "fidelity_vs_lower_bound": (SweepKind.FIDELITY_2D, "fidelity and lower_bound at r = 3.5"),
    "mutual_info_symmetric": (SweepKind.MUTUAL_INFO_1D, "mutual_information vs acceleration per r"),
    "mutual_info_asymmetric": (SweepKind.MUTUAL_INFO_2D, "mutual_information over the acceleration plane per r"),
    "locc_fidelity": (SweepKind.LOCC_COMPARISON, "fidelity vs fidelity_optimized"),
    "locc_mutual_info": (SweepKind.LOCC_COMPARISON, "mutual_information_optimized vs mutual_information_reference"),
}

_PAIR = ["acceleration_I", "acceleration_II", "alpha_I", "alpha_II"]
COLUMNS = {
    SweepKind.ALPHA_CURVE: ["acceleration", "alpha", "beta_ratio"],
    SweepKind.NEGATIVITY_1D: ["r", "acceleration", "alpha", "nu_pt_min", "log_negativity"],
    SweepKind.NEGATIVITY_2D: ["r", *_PAIR, "nu_pt_min", "log_negativity"],
    SweepKind.FIDELITY_1D: ["r", "acceleration", "alpha", "fidelity", "lower_bound"],
    SweepKind.FIDELITY_2D: ["r", *_PAIR, "fidelity", "fidelity_clipped", "lower_bound"],
    SweepKind.MUTUAL_INFO_1D: ["r", "n", "acceleration", "alpha", "mutual_information"],
    SweepKind.MUTUAL_INFO_2D: ["r", "n", *_PAIR, "mutual_information"],
    SweepKind.LOCC_COMPARISON: [
        "r", "n", *_PAIR, "epsilon", "theta", "alpha_reference",
        "fidelity", "fidelity_optimized", "fidelity_reference", "lower_bound",
        "mutual_information", "mutual_information_optimized", "mutual_information_reference",
    ],
}
_MC_COLUMNS = {
    SweepKind.FIDELITY_1D: ["fidelity_mc", "fidelity_mc_stderr"],
    SweepKind.MUTUAL_INFO_1D: ["mutual_information_mc", "mutual_information_mc_stderr"],
}


class SweepPointError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class SweepArtifact:
    kind: SweepKind
    columns: list[str]
    rows: list[tuple]
    metadata: dict = field(default_factory=dict)

    def csv_text(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([repr(float(v)) for v in row])
        return buf.getvalue()

    def column(self, name: str) -> list[float]:
        i = self.columns.index(name)
        return [row[i] for row in self.rows]

    def write(self, out_dir, name: str | None = None) -> tuple[Path, Path]:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        stem = name or self.metadata.get("config", {}).get("name", self.kind.value)
        text = self.csv_text()
        csv_path = out_dir / f"{stem}.csv"
        csv_path.write_text(text)
        meta = dict(self.metadata, table_sha256=hashlib.sha256(text.encode()).hexdigest(), rows=len(self.rows))
        json_path = out_dir / f"{stem}.json"
        json_path.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
        return csv_path, json_path


def load_curve(cfg: ScenarioConfig) -> AlphaCurve:
    return compute_alpha_curve(cfg.mode_parameters(), cfg.resolution(), cfg.alpha_grid, threads=cfg.threads)


def _point_label(point: dict) -> str:
    return ", ".join(f"{k}={v!r}" for k, v in point.items())


def _evaluate(fn, points, threads):
    def guarded(point):
        try:
            return fn(**point)
        except Exception as exc:
            raise SweepPointError(f"failed at {_point_label(point)}: {exc}") from exc

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(guarded, points))
    return [guarded(p) for p in points]


def _alpha_lookup(curve, accelerations):
    # one interpolation per distinct acceleration
    return {a: alpha_at(curve, a) for a in sorted(set(accelerations))}


def run_scenario(config: ScenarioConfig, curve: AlphaCurve | None = None) -> SweepArtifact:
    """Run one sweep. ``curve`` may be passed in to share overlaps across runs."""
    kind = config.kind
    if curve is None:
        curve = load_curve(config)
    columns = list(COLUMNS[kind])
    with_mc = config.mc_samples > 0 and kind in _MC_COLUMNS
    if with_mc:
        columns += _MC_COLUMNS[kind]

    if kind is SweepKind.ALPHA_CURVE:
        br = curve.beta_ratio if curve.beta_ratio is not None else [math.nan] * len(curve.alphas)
        rows = [(0.0, 1.0, 0.0)] + [(float(a), float(al), float(b)) for a, al, b in zip(curve.accelerations, curve.alphas, br)]
    else:
        axis_II = config.accelerations_II if kind.is_2d else ()
        alpha = _alpha_lookup(curve, config.accelerations + axis_II)
        fn, points = _dispatch(config, alpha, with_mc)
        rows = _evaluate(fn, points, config.threads)

    metadata = {
        "kind": kind.value,
        "config": config.to_dict(),
        "version": __version__,
        "created": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        "columns": columns,
        "alpha_curve": {
            "accelerations": [float(a) for a in curve.accelerations],
            "alphas": [float(a) for a in curve.alphas],
        },
    }
    return SweepArtifact(kind, columns, rows, metadata)


def _dispatch(cfg: ScenarioConfig, alpha: dict, with_mc: bool):
    kind = cfg.kind
    clip = cfg.clip_threshold
    mc_seed = itertools.count()

    def pair(a1, a2):
        return alpha[a1], alpha[a2]

    def negativity_1d(r, acc):
        rep = log_negativity(accelerated_tmsv(alpha[acc], alpha[acc], r))
        return (r, acc, alpha[acc], rep.nu_pt_min, rep.log_negativity)

    def negativity_2d(r, acc_I, acc_II):
        a1, a2 = pair(acc_I, acc_II)
        rep = log_negativity(accelerated_tmsv(a1, a2, r))
        return (r, acc_I, acc_II, a1, a2, rep.nu_pt_min, rep.log_negativity)

    def fidelity_1d(r, acc, index=0):
        state = accelerated_tmsv(alpha[acc], alpha[acc], r)
        tel = teleportation_fidelity(state)
        row = (r, acc, alpha[acc], tel.fidelity, tel.lower_bound)
        if with_mc:
            est = monte_carlo_teleportation(state, cfg.mc_samples, [cfg.seed, index])
            row += (est.value, est.stderr)
        return row

    def fidelity_2d(r, acc_I, acc_II):
        a1, a2 = pair(acc_I, acc_II)
        tel = teleportation_fidelity(accelerated_tmsv(a1, a2, r))
        return (r, acc_I, acc_II, a1, a2, tel.fidelity, max(tel.fidelity, clip), tel.lower_bound)

    def mutual_info_1d(r, n, acc, index=0):
        state = accelerated_tmsv(alpha[acc], alpha[acc], r)
        row = (r, n, acc, alpha[acc], dense_coding_mutual_information(state, n).mutual_information)
        if with_mc:
            est = monte_carlo_dense_coding(state, n, cfg.mc_samples, [cfg.seed, index])
            row += (est.value, est.stderr)
        return row

    def mutual_info_2d(r, n, acc_I, acc_II):
        a1, a2 = pair(acc_I, acc_II)
        h = dense_coding_mutual_information(accelerated_tmsv(a1, a2, r), n).mutual_information
        return (r, n, acc_I, acc_II, a1, a2, h)

    def locc(r, n, acc_I, acc_II):
        a1, a2 = pair(acc_I, acc_II)
        state = accelerated_tmsv(a1, a2, r)
        chan = build_locc_compensation(a1, a2, r)
        a_ref = symmetric_reference_alpha(a1, a2, r)
        ref = accelerated_tmsv(a_ref, a_ref, r)
        return (
            r, n, acc_I, acc_II, a1, a2, chan.epsilon, chan.theta, a_ref,
            teleportation_fidelity(state).fidelity,
            optimized_fidelity(a1, a2, r),
            teleportation_fidelity(ref).fidelity,
            optimal_fidelity_lower_bound(state),
            dense_coding_mutual_information(state, n).mutual_information,
            optimized_mutual_information(a1, a2, r, n),
            dense_coding_mutual_information(ref, n).mutual_information,
        )

    rs, ns = cfg.squeezing, cfg.n
    accs, accs_II = cfg.accelerations, cfg.accelerations_II
    if kind is SweepKind.NEGATIVITY_1D:
        return negativity_1d, [dict(r=r, acc=a) for r in rs for a in accs]
    if kind is SweepKind.NEGATIVITY_2D:
        return negativity_2d, [dict(r=r, acc_I=a1, acc_II=a2) for r in rs for a1 in accs for a2 in accs_II]
    if kind is SweepKind.FIDELITY_1D:
        pts = [dict(r=r, acc=a) for r in rs for a in accs]
        if with_mc:
            pts = [dict(p, index=next(mc_seed)) for p in pts]
        return fidelity_1d, pts
    if kind is SweepKind.FIDELITY_2D:
        return fidelity_2d, [dict(r=r, acc_I=a1, acc_II=a2) for r in rs for a1 in accs for a2 in accs_II]
    if kind is SweepKind.MUTUAL_INFO_1D:
        pts = [dict(r=r, n=n, acc=a) for r in rs for n in ns for a in accs]
        if with_mc:
            pts = [dict(p, index=next(mc_seed)) for p in pts]
        return mutual_info_1d, pts
    if kind is SweepKind.MUTUAL_INFO_2D:
        return mutual_info_2d, [dict(r=r, n=n, acc_I=a1, acc_II=a2) for r in rs for n in ns for a1 in accs for a2 in accs_II]
    if kind is SweepKind.LOCC_COMPARISON:
        return locc, [dict(r=r, n=n, acc_I=a1, acc_II=a2) for r in rs for n in ns for a1 in accs for a2 in accs_II]
    raise ValueError(f"no dispatcher for {kind}")
