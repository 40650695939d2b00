"""Teleportation and dense coding with two-mode Gaussian resources.

All covariances use the vacuum-identity convention. For a coherent input the
averaged teleportation fidelity is ``2 / sqrt(det Gamma)`` with
``Gamma = 2 sigma_in + Z sigma_I Z + sigma_II + Z gamma + gamma^T Z``, which is
``sigma_in + sigma_out`` for the teleported output.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .channel import TwoModeChannel, accelerated_tmsv, apply_channel
from .gaussian import GaussianState, log_negativity, partial_transpose, symplectic_eigenvalues

__all__ = [
    "ZETA",
    "TeleportationResult",
    "DenseCodingResult",
    "LoccChannel",
    "Side",
    "SingularGammaError",
    "DegenerateResourceError",
    "NoReferenceError",
    "NonzeroMeanError",
    "teleportation_fidelity",
    "teleportation_fidelity_closed_form",
    "fidelity_argmax_alpha_II",
    "pt_min_eigenvalue",
    "optimal_fidelity_lower_bound",
    "dense_coding_mutual_information",
    "dense_coding_closed_form",
    "locc_epsilon",
    "build_locc_compensation",
    "optimized_fidelity",
    "optimized_mutual_information",
    "symmetric_reference_alpha",
    "symmetric_reference_resource",
    "decompose_locc",
    "locc_from_transmissivity",
]

ZETA = np.diag([1.0, -1.0])
DEGENERACY_TOL = 1e-12
REFERENCE_TOL = 1e-10
CLASSICAL_TOL = 1e-12


class SingularGammaError(ValueError):
    pass


class DegenerateResourceError(ValueError):
    pass


class NoReferenceError(ValueError):
    pass


class NonzeroMeanError(ValueError):
    """Resources with displaced means would need an extra correcting displacement."""


def _require_centred(resource: GaussianState) -> None:
    if np.any(resource.first_moments != 0):
        raise NonzeroMeanError("resource must have zero first moments")


@dataclass(frozen=True)
class TeleportationResult:
    fidelity: float
    gamma_det: float
    lower_bound: float
    classical_threshold_exceeded: bool


@dataclass(frozen=True)
class DenseCodingResult:
    mutual_information: float
    n: float
    v_q_plus: float
    v_p_minus: float


def pt_min_eigenvalue(resource: GaussianState) -> float:
    """Smallest symplectic eigenvalue of the partially transposed resource."""
    return symplectic_eigenvalues(partial_transpose(resource).covariance)[0]


def optimal_fidelity_lower_bound(resource: GaussianState) -> float:
    nu = pt_min_eigenvalue(resource)
    return (1 + nu) / (1 + 3 * nu)


def teleportation_fidelity(resource: GaussianState, input_cov=None) -> TeleportationResult:
    """Outcome-averaged fidelity of the measure-and-displace protocol.

    Parameters
    ----------
    resource : GaussianState
        Shared state; mode I goes to the sender, mode II to the receiver.
    input_cov : array_like, optional
        Covariance of the input state, identity (coherent input) by default.
    """
    _require_centred(resource)
    sin = np.eye(2) if input_cov is None else np.asarray(input_cov, dtype=float)
    g = resource.gamma
    gamma = 2 * sin + ZETA @ resource.sigma_I @ ZETA + resource.sigma_II + ZETA @ g + g.T @ ZETA
    det = float(np.linalg.det(gamma))
    if not det > 0:
        raise SingularGammaError(f"det Gamma = {det}")
    fid = 2.0 / math.sqrt(det)
    return TeleportationResult(
        fidelity=fid,
        gamma_det=det,
        lower_bound=optimal_fidelity_lower_bound(resource),
        classical_threshold_exceeded=fid > 0.5 + CLASSICAL_TOL,
    )


def _correlated_variance(alpha_I: float, alpha_II: float, r: float) -> float:
    """Variance of (q_I - q_II)/sqrt2 in the accelerated resource.

    Written as a sum of non-negative terms so that e^{-2r} does not come out
    of a cosh - sinh cancellation.
    """
    a, b = alpha_I, alpha_II
    return 0.5 * (2 - (a * a + b * b) + (a - b) ** 2 * math.cosh(2 * r)) + a * b * math.exp(-2 * r)


def teleportation_fidelity_closed_form(alpha_I: float, alpha_II: float, r: float) -> float:
    return 1.0 / (1 + _correlated_variance(alpha_I, alpha_II, r))


def fidelity_argmax_alpha_II(alpha_I: float, r: float, alpha_max: float = 1.0) -> float:
    """The alpha_II maximizing the closed-form fidelity at fixed alpha_I."""
    if r == 0:
        return 0.0
    return min(max(alpha_I / math.tanh(r), 0.0), alpha_max)


def _dense_variances(resource: GaussianState) -> tuple[float, float]:
    s = resource.covariance
    v_q = 0.5 * (s[0, 0] + s[2, 2] + 2 * s[0, 2])
    v_p = 0.5 * (s[1, 1] + s[3, 3] - 2 * s[1, 3])
    return float(v_q), float(v_p)


def dense_coding_mutual_information(resource: GaussianState, n: float) -> DenseCodingResult:
    """Mutual information (bits) of Gaussian-displacement dense coding.

    The receiver reads ``q_+ = q_I + q_II`` and ``p_- = -p_I + p_II`` after a
    balanced beam splitter; ``n`` is the message variance scale.
    """
    _require_centred(resource)
    if not n > 0:
        raise ValueError(f"n must be positive, got {n}")
    v_q, v_p = _dense_variances(resource)
    h = 0.5 * (math.log2(1 + n / (2 * v_q)) + math.log2(1 + n / (2 * v_p)))
    return DenseCodingResult(mutual_information=h, n=float(n), v_q_plus=v_q, v_p_minus=v_p)


def dense_coding_closed_form(alpha_I: float, alpha_II: float, r: float, n: float) -> float:
    return math.log2(1 + n / (2 * _correlated_variance(alpha_I, alpha_II, r)))


class Side(str, enum.Enum):
    I = "I"
    II = "II"


@dataclass(frozen=True, eq=False)
class LoccChannel:
    """One-sided attenuation that balances an asymmetric resource.

    For ``theta <= pi/4`` mode I is scaled by ``tan(theta)``, otherwise mode II
    by ``cot(theta)``; the scaled side gets the noise that keeps the map
    trace preserving.
    """

    theta: float
    epsilon: float
    S_I: np.ndarray
    S_II: np.ndarray
    G_I: np.ndarray
    G_II: np.ndarray

    @classmethod
    def from_theta(cls, theta: float, epsilon: float) -> "LoccChannel":
        if not 0 < theta < math.pi / 2:
            raise DegenerateResourceError(f"theta={theta} outside (0, pi/2)")
        eye, zero = np.eye(2), np.zeros((2, 2))
        if theta == math.pi / 4:
            return cls(theta, epsilon, eye.copy(), eye.copy(), zero, zero.copy())
        if theta < math.pi / 4:
            f = math.tan(theta)
            return cls(theta, epsilon, f * eye, eye.copy(), (1 - f * f) * eye, zero)
        f = 1.0 / math.tan(theta)
        return cls(theta, epsilon, eye.copy(), f * eye, zero, (1 - f * f) * eye)

    def as_channel(self) -> TwoModeChannel:
        M = np.zeros((4, 4))
        N = np.zeros((4, 4))
        M[:2, :2], M[2:, 2:] = self.S_I, self.S_II
        N[:2, :2], N[2:, 2:] = self.G_I, self.G_II
        return TwoModeChannel(M, N)

    def is_identity(self) -> bool:
        return bool(np.all(self.S_I == np.eye(2)) and np.all(self.S_II == np.eye(2)))


def locc_epsilon(alpha_I: float, alpha_II: float, r: float) -> float:
    a2, b2 = alpha_I**2, alpha_II**2
    den = math.sqrt((a2 + b2) ** 2 * (math.cosh(2 * r) - 1) + 8 * a2 * b2)
    if den == 0:
        raise DegenerateResourceError("epsilon undefined for this resource")
    return math.sqrt(2) * (a2 - b2) * math.sinh(r) / den


def _check_locc_args(alpha_I, alpha_II, r):
    for a in (alpha_I, alpha_II):
        if not 0 < a <= 1:
            raise DegenerateResourceError(f"alpha must lie in (0, 1], got {a}")
    if not r > 0:
        raise ValueError(f"squeezing must be positive, got {r}")


def build_locc_compensation(alpha_I: float, alpha_II: float, r: float) -> LoccChannel:
    _check_locc_args(alpha_I, alpha_II, r)
    eps = locc_epsilon(alpha_I, alpha_II, r)
    if abs(eps) >= 1 - DEGENERACY_TOL:
        raise DegenerateResourceError(f"|epsilon| = {abs(eps)} too close to 1")
    if eps == 0:
        theta = math.pi / 4
    else:
        theta = math.atan(math.sqrt((1 - eps) / (1 + eps)))
    return LoccChannel.from_theta(theta, eps)


def optimized_fidelity(alpha_I: float, alpha_II: float, r: float) -> float:
    """Fidelity after the balancing channel, from the uncompensated resource's nu."""
    chan = build_locc_compensation(alpha_I, alpha_II, r)
    nu = log_negativity(accelerated_tmsv(alpha_I, alpha_II, r)).nu_pt_min
    e = abs(chan.epsilon)
    return (1 + e) / (1 + nu + 2 * e)


def optimized_mutual_information(alpha_I: float, alpha_II: float, r: float, n: float) -> float:
    f = optimized_fidelity(alpha_I, alpha_II, r)
    if not f < 1:
        raise ValueError("optimized fidelity reached 1; mutual information diverges")
    return math.log2(1 + 0.5 * n * f / (1 - f))


def pipeline_optimized_fidelity(alpha_I: float, alpha_II: float, r: float) -> float:
    """Teleportation fidelity of the resource after the balancing channel is applied."""
    chan = build_locc_compensation(alpha_I, alpha_II, r).as_channel()
    return teleportation_fidelity(apply_channel(chan, accelerated_tmsv(alpha_I, alpha_II, r))).fidelity


def _symmetric_negativity(alpha: float, r: float) -> float:
    return log_negativity(accelerated_tmsv(alpha, alpha, r)).log_negativity


def symmetric_reference_alpha(alpha_I: float, alpha_II: float, r: float) -> float:
    """``alpha*`` with ``E(alpha*, alpha*, r) == E(alpha_I, alpha_II, r)``."""
    if alpha_I == alpha_II:
        return float(alpha_I)
    target = log_negativity(accelerated_tmsv(alpha_I, alpha_II, r)).log_negativity
    if not target > 0:
        raise NoReferenceError("resource is not entangled")
    top = _symmetric_negativity(1.0, r)
    if target > top + REFERENCE_TOL:
        raise NoReferenceError(f"target negativity {target} exceeds the inertial value {top}")
    if target >= top:
        return 1.0
    root = brentq(lambda a: _symmetric_negativity(a, r) - target, 0.0, 1.0, xtol=1e-15, rtol=1e-15, maxiter=200)
    resid = abs(_symmetric_negativity(root, r) - target)
    if resid > REFERENCE_TOL:
        raise NoReferenceError(f"reference residual {resid:.3g} above tolerance")
    return float(root)


def symmetric_reference_resource(alpha_I: float, alpha_II: float, r: float) -> GaussianState:
    a = symmetric_reference_alpha(alpha_I, alpha_II, r)
    return accelerated_tmsv(a, a, r)


def decompose_locc(channel: LoccChannel) -> tuple[float, Side]:
    """Beam-splitter transmissivity and the side it acts on."""
    if channel.theta <= math.pi / 4:
        return float(channel.S_I[0, 0] ** 2), Side.I
    return float(channel.S_II[0, 0] ** 2), Side.II


def locc_from_transmissivity(tau: float, side: Side | str, theta: float = math.nan, epsilon: float = math.nan) -> LoccChannel:
    if not 0 < tau <= 1:
        raise ValueError(f"transmissivity must lie in (0, 1], got {tau}")
    f = math.sqrt(tau)
    eye, zero = np.eye(2), np.zeros((2, 2))
    if Side(side) is Side.I:
        return LoccChannel(theta, epsilon, f * eye, eye.copy(), (1 - f * f) * eye, zero)
    return LoccChannel(theta, epsilon, eye.copy(), f * eye, zero, (1 - f * f) * eye)
