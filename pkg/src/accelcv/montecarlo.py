"""Shot-by-shot simulations of the two protocols, used as statistical oracles.

Gaussian states are sampled through their Wigner variables (vacuum variance
one). Samples are generated in fixed-size chunks, each with a seed spawned
from the user seed, and chunk statistics are combined in chunk order, so a
result depends only on ``(seed, samples)`` and not on ``workers``.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .gaussian import GaussianState
from .protocols import ZETA, _require_centred

__all__ = ["MonteCarloEstimate", "monte_carlo_teleportation", "monte_carlo_dense_coding", "CHUNK"]

CHUNK = 2_000
MIN_SAMPLES = 10_000
# spread of the coherent-input amplitudes; the averaged fidelity does not depend on it
INPUT_SPREAD = 3.0


@dataclass(frozen=True)
class MonteCarloEstimate:
    value: float
    stderr: float
    samples: int

    def agrees_with(self, target: float, sigmas: float = 3.0) -> bool:
        return abs(self.value - target) <= sigmas * self.stderr


def _chunks(samples: int, seed):
    if samples < MIN_SAMPLES:
        raise ValueError(f"need at least {MIN_SAMPLES} samples, got {samples}")
    sizes = [CHUNK] * (samples // CHUNK)
    if samples % CHUNK:
        sizes.append(samples % CHUNK)
    seeds = np.random.SeedSequence(seed).spawn(len(sizes))
    return list(zip(sizes, seeds))


def _run(fn, jobs, workers: int):
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda job: fn(*job), jobs))
    return [fn(*job) for job in jobs]


def monte_carlo_teleportation(resource: GaussianState, samples: int = 100_000, seed=0, *, workers: int = 1) -> MonteCarloEstimate:
    """Empirical fidelity of measure-and-displace teleportation of coherent states.

    Each shot draws a coherent amplitude, a joint homodyne outcome
    ``(q_in + q_I, p_in - p_I)``, conditions the receiver's mode on it and
    displaces by the outcome, then scores the overlap with the input.
    """
    _require_centred(resource)
    s1, s2, g = resource.sigma_I, resource.sigma_II, resource.gamma
    outcome_cov = np.eye(2) + ZETA @ s1 @ ZETA
    cross = g.T @ ZETA  # Cov(mode II, (q_I, -p_I))
    gain = cross @ np.linalg.inv(outcome_cov)
    cond_cov = s2 - gain @ cross.T
    overlap = np.eye(2) + cond_cov
    overlap_inv = np.linalg.inv(overlap)
    prefactor = 2.0 / math.sqrt(np.linalg.det(overlap))
    chol = np.linalg.cholesky(outcome_cov)

    def chunk(size, ss):
        rng = np.random.default_rng(ss)
        d = INPUT_SPREAD * rng.standard_normal((size, 2))
        m = d + rng.standard_normal((size, 2)) @ chol.T
        out_mean = (m - d) @ gain.T + m
        delta = out_mean - d
        f = prefactor * np.exp(-0.5 * np.einsum("ni,ij,nj->n", delta, overlap_inv, delta))
        return math.fsum(f), math.fsum(f * f)

    stats = _run(chunk, _chunks(samples, seed), workers)
    total = math.fsum(s for s, _ in stats)
    total_sq = math.fsum(q for _, q in stats)
    mean = total / samples
    var = max(total_sq / samples - mean * mean, 0.0) * samples / (samples - 1)
    return MonteCarloEstimate(mean, math.sqrt(var / samples), samples)


def _gaussian_mi_bits(cov: np.ndarray) -> float:
    _, ld_x = np.linalg.slogdet(cov[:2, :2])
    _, ld_y = np.linalg.slogdet(cov[2:, 2:])
    _, ld = np.linalg.slogdet(cov)
    return 0.5 * (ld_x + ld_y - ld) / math.log(2.0)


def monte_carlo_dense_coding(
    resource: GaussianState, n: float, samples: int = 100_000, seed=0, *, workers: int = 1
) -> MonteCarloEstimate:
    """Mutual information estimated from sampled (message, readout) pairs.

    The sender displaces mode I by a Gaussian message with variance ``n`` per
    quadrature; the receiver combines both modes on a balanced beam splitter
    and reads ``q_+`` and ``p_-``. The estimate is the Gaussian mutual
    information of the sample covariance, with a delete-one-chunk jackknife
    standard error.
    """
    _require_centred(resource)
    if not n > 0:
        raise ValueError(f"n must be positive, got {n}")
    chol = np.linalg.cholesky(resource.covariance)
    root_n = math.sqrt(n)

    def chunk(size, ss):
        rng = np.random.default_rng(ss)
        x = root_n * rng.standard_normal((size, 2))
        w = rng.standard_normal((size, 4)) @ chol.T
        q_plus = (w[:, 0] + x[:, 0] + w[:, 2]) / math.sqrt(2)
        p_minus = (-(w[:, 1] + x[:, 1]) + w[:, 3]) / math.sqrt(2)
        z = np.column_stack([x, q_plus, p_minus])
        return size, z.sum(axis=0), z.T @ z

    stats = _run(chunk, _chunks(samples, seed), workers)
    tot_n = sum(size for size, _, _ in stats)
    tot_s = np.sum([s for _, s, _ in stats], axis=0)
    tot_ss = np.sum([ss for _, _, ss in stats], axis=0)

    def mi(count, s, ss):
        mu = s / count
        return _gaussian_mi_bits((ss - count * np.outer(mu, mu)) / (count - 1))

    value = mi(tot_n, tot_s, tot_ss)
    # delete-one-chunk jackknife
    k = len(stats)
    loo = np.array([mi(tot_n - size, tot_s - s, tot_ss - ss) for size, s, ss in stats])
    stderr = float(np.sqrt((k - 1) / k * np.sum((loo - loo.mean()) ** 2)))
    return MonteCarloEstimate(float(value), stderr, tot_n)
