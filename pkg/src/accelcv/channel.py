"""Acceleration-induced Gaussian channel and the alpha(A) curve.

A detected packet sees the free-field state through ``sigma -> M sigma M^T + N``.
With negligible beta and phase-fixed alpha this is a pure-loss channel on
each mode with transmissivity ``alpha**2``.
"""
from __future__ import annotations

import csv
import enum
import hashlib
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np
from scipy.interpolate import PchipInterpolator

from .gaussian import OMEGA, GaussianState, tmsv_state
from .modes import (
    AccelerationRangeError,
    BogoliubovCoefficients,
    ModeParameters,
    Resolution,
    wedge_overlaps,
)

__all__ = [
    "ChannelMode",
    "TwoModeChannel",
    "BetaTooLargeError",
    "ChannelNotCPError",
    "AlphaCurve",
    "DEFAULT_ALPHA_GRID",
    "BETA_RATIO_LIMIT",
    "build_channel",
    "simplified_channel",
    "apply_channel",
    "accelerated_tmsv",
    "standard_form_abc",
    "alpha_at",
    "compute_alpha_curve",
    "cache_directory",
]

BETA_RATIO_LIMIT = 1e-6
CP_TOL = 1e-10
# 0.03, 0.05, then 0.05 steps from 0.1 up to the horizon limit 1 / L
DEFAULT_ALPHA_GRID = (0.03, 0.05) + tuple(round(0.05 * k, 10) for k in range(2, 11))


class BetaTooLargeError(ValueError):
    pass


class ChannelNotCPError(ValueError):
    pass


class ChannelMode(str, enum.Enum):
    SIMPLIFIED = "simplified"
    GENERAL_M = "general_m"


@dataclass(frozen=True, eq=False)
class TwoModeChannel:
    """Affine Gaussian map ``sigma -> M sigma M^T + N``, ``d -> M d``."""

    M: np.ndarray
    N: np.ndarray

    def __post_init__(self):
        M = np.array(self.M, dtype=float)
        N = np.array(self.N, dtype=float)
        if M.shape != (4, 4) or N.shape != (4, 4):
            raise ValueError("channel matrices must be 4x4")
        if np.abs(N - N.T).max() > 1e-12 * max(1.0, np.abs(N).max()):
            raise ValueError("noise matrix must be symmetric")
        M.setflags(write=False)
        N.setflags(write=False)
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "N", N)
        if self.cp_margin() < -CP_TOL:
            raise ChannelNotCPError(f"channel violates complete positivity (margin {self.cp_margin():.3g})")

    def cp_margin(self) -> float:
        """Smallest eigenvalue of ``N + i Omega - i M Omega M^T``."""
        herm = self.N + 1j * OMEGA - 1j * self.M @ OMEGA @ self.M.T
        return float(np.linalg.eigvalsh(herm).min())

    def then(self, other: "TwoModeChannel") -> "TwoModeChannel":
        """Apply ``self`` first, then ``other``."""
        return TwoModeChannel(other.M @ self.M, other.M @ self.N @ other.M.T + other.N)


def simplified_channel(alpha_I: float, alpha_II: float) -> TwoModeChannel:
    for a in (alpha_I, alpha_II):
        if not 0.0 <= a <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {a}")
    M = np.diag([alpha_I, alpha_I, alpha_II, alpha_II])
    N = np.diag([1 - alpha_I**2, 1 - alpha_I**2, 1 - alpha_II**2, 1 - alpha_II**2])
    return TwoModeChannel(M, N)


def _general_block(alpha: complex, beta: complex) -> np.ndarray:
    return np.array(
        [
            [(alpha - beta).real, -(alpha + beta).imag],
            [(alpha - beta).imag, (alpha + beta).real],
        ]
    )


def build_channel(coeffs: BogoliubovCoefficients, mode: ChannelMode | str = ChannelMode.SIMPLIFIED) -> TwoModeChannel:
    """Channel from Bogoliubov overlaps.

    ``GENERAL_M`` keeps the full real/imaginary structure of ``M`` but pairs
    it with the simplified noise, so it is only meaningful while beta is
    negligible.
    """
    mode = ChannelMode(mode)
    ratio = coeffs.beta_ratio()
    if mode is ChannelMode.SIMPLIFIED:
        if ratio > BETA_RATIO_LIMIT:
            raise BetaTooLargeError(f"|beta|/|alpha| = {ratio:.3g} exceeds {BETA_RATIO_LIMIT}")
        return simplified_channel(abs(coeffs.alpha_I), abs(coeffs.alpha_II))
    M = np.zeros((4, 4))
    M[:2, :2] = _general_block(complex(coeffs.alpha_I), complex(coeffs.beta_I))
    M[2:, 2:] = _general_block(complex(coeffs.alpha_II), complex(coeffs.beta_II))
    aI, aII = abs(coeffs.alpha_I), abs(coeffs.alpha_II)
    N = np.diag([1 - aI**2, 1 - aI**2, 1 - aII**2, 1 - aII**2])
    return TwoModeChannel(M, N)


def apply_channel(channel: TwoModeChannel, state: GaussianState) -> GaussianState:
    cov = channel.M @ state.covariance @ channel.M.T + channel.N
    return GaussianState(channel.M @ state.first_moments, 0.5 * (cov + cov.T))


def standard_form_abc(alpha_I: float, alpha_II: float, r: float) -> tuple[float, float, float]:
    ch, sh = math.cosh(2 * r), math.sinh(2 * r)
    a = 1 - alpha_I**2 + alpha_I**2 * ch
    b = 1 - alpha_II**2 + alpha_II**2 * ch
    c = alpha_I * alpha_II * sh
    return a, b, c


def accelerated_tmsv(alpha_I: float, alpha_II: float, r: float) -> GaussianState:
    """Squeezed vacuum seen through the simplified channel, from the closed form."""
    for a in (alpha_I, alpha_II):
        if not 0.0 <= a <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {a}")
    if r < 0:
        raise ValueError(f"squeezing must be non-negative, got {r}")
    a, b, c = standard_form_abc(alpha_I, alpha_II, r)
    cov = np.array(
        [
            [a, 0.0, -c, 0.0],
            [0.0, a, 0.0, c],
            [-c, 0.0, b, 0.0],
            [0.0, c, 0.0, b],
        ]
    )
    return GaussianState(np.zeros(4), cov)


@dataclass(frozen=True, eq=False)
class AlphaCurve:
    """Computed ``alpha(A)`` nodes plus the inertial anchor ``alpha(0) = 1``.

    ``beta_ratio`` holds ``|beta| / |alpha|`` at each node.
    """

    accelerations: np.ndarray
    alphas: np.ndarray
    beta_ratio: np.ndarray | None = None

    def __post_init__(self):
        acc = np.array(self.accelerations, dtype=float)
        alp = np.array(self.alphas, dtype=float)
        if acc.ndim != 1 or acc.shape != alp.shape or acc.size == 0:
            raise ValueError("accelerations and alphas must be matching 1-d arrays")
        if np.any(np.diff(acc) <= 0) or acc[0] <= 0:
            raise ValueError("accelerations must be positive and strictly increasing")
        if np.any(alp <= 0) or np.any(alp > 1):
            raise ValueError("alpha values must lie in (0, 1]")
        if np.any(np.diff(np.concatenate(([1.0], alp))) >= 0):
            raise ValueError("alpha must decrease strictly with acceleration")
        for arr in (acc, alp):
            arr.setflags(write=False)
        object.__setattr__(self, "accelerations", acc)
        object.__setattr__(self, "alphas", alp)
        if self.beta_ratio is not None:
            br = np.array(self.beta_ratio, dtype=float)
            br.setflags(write=False)
            object.__setattr__(self, "beta_ratio", br)
        object.__setattr__(
            self, "_interp", PchipInterpolator(np.concatenate(([0.0], acc)), np.concatenate(([1.0], alp)), extrapolate=False)
        )

    @property
    def max_acceleration(self) -> float:
        return float(self.accelerations[-1])

    def __call__(self, accel):
        return alpha_at(self, accel)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["acceleration", "alpha", "beta_ratio"])
            br = self.beta_ratio if self.beta_ratio is not None else [math.nan] * len(self.alphas)
            for row in zip(self.accelerations, self.alphas, br):
                writer.writerow([repr(float(v)) for v in row])

    @classmethod
    def from_csv(cls, path) -> "AlphaCurve":
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
        br = [float(r.get("beta_ratio", "nan")) for r in rows]
        return cls(
            [float(r["acceleration"]) for r in rows],
            [float(r["alpha"]) for r in rows],
            None if all(math.isnan(b) for b in br) else br,
        )


def alpha_at(curve: AlphaCurve, accel):
    """Monotone cubic interpolation through ``(0, 1)`` and the nodes; exact at nodes."""
    arr = np.asarray(accel, dtype=float)
    if np.any(arr < 0) or np.any(arr > curve.max_acceleration):
        raise AccelerationRangeError(f"acceleration {accel} outside [0, {curve.max_acceleration}]")
    out = curve._interp(arr)
    # hit nodes exactly rather than through the polynomial
    idx = np.searchsorted(curve.accelerations, arr)
    idx = np.clip(idx, 0, curve.accelerations.size - 1)
    on_node = curve.accelerations[idx] == arr
    out = np.where(on_node, curve.alphas[idx], out)
    out = np.where(arr == 0, 1.0, out)
    return float(out) if np.ndim(accel) == 0 else out


def cache_directory() -> Path | None:
    """Directory named by ``ACCELCV_CACHE_DIR``, or ``None`` when caching is off."""
    path = os.environ.get("ACCELCV_CACHE_DIR")
    return Path(path) if path else None


def _cache_key(params: ModeParameters, resolution: Resolution, grid) -> str:
    payload = repr((sorted(asdict(params).items()), sorted(asdict(resolution).items()), tuple(float(a) for a in grid)))
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


def compute_alpha_curve(
    params: ModeParameters = ModeParameters(),
    resolution: Resolution = Resolution(),
    grid=DEFAULT_ALPHA_GRID,
    *,
    threads: int = 1,
    cache_dir: Path | str | None = None,
    use_cache: bool = True,
) -> AlphaCurve:
    """Evaluate ``alpha`` at every grid node (one wedge suffices by mirror symmetry).

    Nodes are farmed out to a thread pool; results are collected in grid
    order so the output does not depend on ``threads``. With a cache
    directory (argument or ``ACCELCV_CACHE_DIR``) the curve is stored as CSV
    under a hash of the parameters, resolution and grid.
    """
    grid = tuple(float(a) for a in grid)
    if cache_dir is None and use_cache:
        cache_dir = cache_directory()
    path = None
    if cache_dir is not None and use_cache:
        path = Path(cache_dir) / f"alpha_curve_{_cache_key(params, resolution, grid)}.csv"
        if path.exists():
            return AlphaCurve.from_csv(path)

    def node(a):
        rep = wedge_overlaps(a, "I", params, resolution)
        return abs(rep.alpha), abs(rep.beta) / abs(rep.alpha)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(node, grid))
    else:
        results = [node(a) for a in grid]
    curve = AlphaCurve(grid, [r[0] for r in results], [r[1] for r in results])
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(f".tmp{os.getpid()}")
        curve.to_csv(tmp)
        os.replace(tmp, path)
    return curve


def tmsv_through(curve: AlphaCurve, accel_I: float, accel_II: float, r: float) -> GaussianState:
    return accelerated_tmsv(alpha_at(curve, accel_I), alpha_at(curve, accel_II), r)


def inertial_reference(r: float) -> GaussianState:
    return tmsv_state(r)
