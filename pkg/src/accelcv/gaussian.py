"""Two-mode Gaussian states: covariances, symplectic spectra, log-negativity.

Quadratures are ordered ``(q_I, p_I, q_II, p_II)`` and covariances use the
convention in which the vacuum is the identity. Logarithms are base 2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "OMEGA",
    "GaussianState",
    "EntanglementReport",
    "StandardFormError",
    "vacuum",
    "tmsv_state",
    "partial_transpose",
    "symplectic_eigenvalues",
    "physicality_margin",
    "standard_form_parameters",
    "log_negativity",
]

_J = np.array([[0.0, 1.0], [-1.0, 0.0]])
OMEGA = np.block([[_J, np.zeros((2, 2))], [np.zeros((2, 2)), _J]])
OMEGA.setflags(write=False)

_PT = np.diag([1.0, 1.0, 1.0, -1.0])
SYMMETRY_TOL = 1e-12
PHYSICALITY_TOL = 1e-10


class StandardFormError(ValueError):
    """The fast path needs ``sigma_I = a 1``, ``sigma_II = b 1``, ``gamma = diag(-c, c)``."""


@dataclass(frozen=True, eq=False)
class GaussianState:
    """First moments and covariance of a two-mode Gaussian state.

    ``partially_transposed`` marks the output of :func:`partial_transpose`,
    which need not describe a physical state.
    """

    first_moments: np.ndarray
    covariance: np.ndarray
    partially_transposed: bool = False

    def __post_init__(self):
        mean = np.array(self.first_moments, dtype=float).reshape(4)
        cov = np.array(self.covariance, dtype=float)
        if cov.shape != (4, 4):
            raise ValueError(f"covariance must be 4x4, got {cov.shape}")
        scale = max(1.0, float(np.abs(cov).max()))
        if np.abs(cov - cov.T).max() > SYMMETRY_TOL * scale:
            raise ValueError("covariance is not symmetric")
        mean.setflags(write=False)
        cov.setflags(write=False)
        object.__setattr__(self, "first_moments", mean)
        object.__setattr__(self, "covariance", cov)

    @classmethod
    def from_covariance(cls, covariance) -> "GaussianState":
        return cls(np.zeros(4), covariance)

    @property
    def sigma_I(self) -> np.ndarray:
        return self.covariance[:2, :2]

    @property
    def sigma_II(self) -> np.ndarray:
        return self.covariance[2:, 2:]

    @property
    def gamma(self) -> np.ndarray:
        return self.covariance[:2, 2:]

    def is_physical(self, tol: float = PHYSICALITY_TOL) -> bool:
        return physicality_margin(self.covariance) >= -tol


def physicality_margin(sigma) -> float:
    """Smallest eigenvalue of ``sigma + i Omega``; non-negative for physical states."""
    sigma = np.asarray(sigma, dtype=float)
    return float(np.linalg.eigvalsh(sigma + 1j * OMEGA).min())


def vacuum() -> GaussianState:
    return GaussianState(np.zeros(4), np.eye(4))


def tmsv_state(r: float) -> GaussianState:
    """Two-mode squeezed vacuum with squeezing ``r`` (q anti-correlated, p correlated)."""
    if r < 0:
        raise ValueError(f"squeezing must be non-negative, got {r}")
    ch, sh = math.cosh(2 * r), math.sinh(2 * r)
    cov = np.array(
        [
            [ch, 0.0, -sh, 0.0],
            [0.0, ch, 0.0, sh],
            [-sh, 0.0, ch, 0.0],
            [0.0, sh, 0.0, ch],
        ]
    )
    return GaussianState(np.zeros(4), cov)


def partial_transpose(state: GaussianState) -> GaussianState:
    """Flip the sign of ``p_II``."""
    return GaussianState(
        _PT @ state.first_moments,
        _PT @ state.covariance @ _PT,
        partially_transposed=not state.partially_transposed,
    )


def symplectic_eigenvalues(sigma) -> tuple[float, float]:
    """Symplectic eigenvalues of a 4x4 covariance, ascending.

    The eigenvalues of ``Omega sigma`` come in pairs ``+/- i nu``.
    """
    sigma = np.asarray(sigma, dtype=float)
    moduli = np.sort(np.abs(np.linalg.eigvals(OMEGA @ sigma)))
    return float(moduli[0]), float(moduli[2])


def standard_form_parameters(state: GaussianState, tol: float = 1e-12) -> tuple[float, float, float]:
    """Return ``(a, b, c)`` if the covariance has the accelerated-TMSV pattern."""
    s = state.covariance
    a, b, c = s[0, 0], s[2, 2], s[1, 3]
    pattern = np.array(
        [
            [a, 0.0, -c, 0.0],
            [0.0, a, 0.0, c],
            [-c, 0.0, b, 0.0],
            [0.0, c, 0.0, b],
        ]
    )
    if np.abs(s - pattern).max() > tol * max(1.0, np.abs(s).max()):
        raise StandardFormError("covariance is not in standard form")
    return float(a), float(b), float(c)


@dataclass(frozen=True)
class EntanglementReport:
    delta: float
    nu_pt_min: float
    log_negativity: float


def _pt_invariant(state: GaussianState) -> float:
    # det(sigma_I) + det(sigma_II) - 2 det(gamma); equals a^2 + b^2 + 2c^2 in standard form
    return float(np.linalg.det(state.sigma_I) + np.linalg.det(state.sigma_II) - 2.0 * np.linalg.det(state.gamma))


def log_negativity(state: GaussianState, method: str = "auto") -> EntanglementReport:
    """Logarithmic negativity in ebits.

    ``method="standard"`` uses ``nu^2 = (D - sqrt(D^2 - 4 det sigma)) / 2`` with
    ``D = a^2 + b^2 + 2 c^2``; ``"general"`` diagonalizes the partial
    transpose; ``"auto"`` picks the former when the state allows it.
    """
    if method not in ("auto", "standard", "general"):
        raise ValueError(f"unknown method {method!r}")
    delta = _pt_invariant(state)
    nu = None
    if method in ("auto", "standard"):
        try:
            a, b, c = standard_form_parameters(state)
        except StandardFormError:
            if method == "standard":
                raise
        else:
            delta = a * a + b * b + 2 * c * c
            det = (a * b - c * c) ** 2
            # D^2 - 4 det factors as (a + b)^2 ((a - b)^2 + 4 c^2); using the factored
            # root and the conjugate form avoids cancellation near degeneracy and at large r
            root = (a + b) * math.hypot(a - b, 2.0 * c)
            nu = math.sqrt(2.0 * det / (delta + root))
    if nu is None:
        nu = symplectic_eigenvalues(partial_transpose(state).covariance)[0]
    return EntanglementReport(delta=delta, nu_pt_min=nu, log_negativity=max(0.0, -math.log2(nu)))
