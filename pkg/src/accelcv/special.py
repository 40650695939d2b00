r"""Complex log-gamma and modified Bessel functions of imaginary order.

The Rindler wavepackets need :math:`I_{i\nu}(z)` for real :math:`z > 0` and
orders :math:`\nu` of a few hundred. Its magnitude carries the factor
:math:`1/|\Gamma(1 + i\nu)| \sim e^{\pi\nu/2}`, which leaves the double range
near :math:`\nu \approx 450` and is already unwieldy well before that, so
values are carried in log-scaled form (:class:`ScaledComplex`).

We use the ascending series

.. math::
    I_{i\nu}(z) = \frac{(z/2)^{i\nu}}{\Gamma(1+i\nu)}
        \sum_{k\ge 0} \frac{(z^2/4)^k}{k!\,(1+i\nu)_k},

whose reduced sum is a well-conditioned :math:`{}_0F_1` for :math:`z \lesssim 10`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ScaledComplex",
    "PoleError",
    "BesselConvergenceError",
    "log_gamma_complex",
    "bessel_I_imag_order",
    "rindler_radial_profile",
]

# Lanczos coefficients, g = 7, n = 9.
_LANCZOS_G = 7.0
_LANCZOS_P = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_LOG_PI = math.log(math.pi)

POLE_TOLERANCE = 1e-14
SERIES_RTOL = 1e-15
SERIES_PATIENCE = 3
SERIES_MAX_TERMS = 500


class PoleError(ValueError):
    """Argument sits on a pole of the gamma function."""


class BesselConvergenceError(RuntimeError):
    """The ascending series did not settle within the term budget."""


def _wrap_phase(phase):
    """Map angles to (-pi, pi]."""
    wrapped = np.mod(np.asarray(phase, dtype=float) + np.pi, 2.0 * np.pi) - np.pi
    return np.where(wrapped <= -np.pi, np.pi, wrapped)


@dataclass(frozen=True)
class ScaledComplex:
    """Complex number stored as ``exp(log_magnitude) * exp(1j * phase)``."""

    log_magnitude: float
    phase: float

    def __post_init__(self):
        object.__setattr__(self, "phase", float(_wrap_phase(self.phase)))

    @classmethod
    def from_complex(cls, value: complex) -> "ScaledComplex":
        if value == 0:
            return cls(-math.inf, 0.0)
        return cls(math.log(abs(value)), math.atan2(value.imag, value.real))

    def to_complex(self) -> complex:
        # may underflow or overflow; that is the caller's problem
        return complex(np.exp(self.log_magnitude) * np.exp(1j * self.phase))

    def conjugate(self) -> "ScaledComplex":
        return ScaledComplex(self.log_magnitude, -self.phase)

    def __mul__(self, other: "ScaledComplex") -> "ScaledComplex":
        return ScaledComplex(self.log_magnitude + other.log_magnitude, self.phase + other.phase)


def _lanczos_log_gamma(z):
    # valid for Re z >= 1/2
    z = z - 1.0
    acc = np.full_like(z, _LANCZOS_P[0])
    for i, p in enumerate(_LANCZOS_P[1:], start=1):
        acc = acc + p / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * np.log(t) - t + np.log(acc)


def _log_sin_pi(z):
    """A branch of log(sin(pi z)) that stays finite for large |Im z|."""
    z = np.asarray(z, dtype=complex)
    # fold Im z >= 0 so exp(2i pi z) is bounded by one
    flip = z.imag < 0
    w = np.where(flip, np.conj(z), z)
    out = -1j * np.pi * w + np.log1p(-np.exp(2j * np.pi * w)) + (1j * np.pi / 2 - math.log(2.0))
    return np.where(flip, np.conj(out), out)


def log_gamma_complex(z):
    """Principal branch of ``log Gamma(z)`` for complex ``z``.

    Accepts scalars or arrays. The branch agrees with the real log-gamma on
    the positive axis and is continuous off the non-positive real axis, so
    ``log_gamma_complex(z + 1) == log(z) + log_gamma_complex(z)`` there.

    Raises
    ------
    PoleError
        If any ``z`` lies within 1e-14 of a non-positive integer.
    """
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    nearest = np.round(z.real)
    on_pole = (nearest <= 0) & (np.abs(z - nearest) < POLE_TOLERANCE)
    if np.any(on_pole):
        raise PoleError(f"log-gamma pole at z = {z[on_pole][0]}")

    out = np.empty_like(z)
    right = z.real >= 0.5
    out[right] = _lanczos_log_gamma(z[right])
    if np.any(~right):
        zl = z[~right]
        # the linear -i*pi*z term of _log_sin_pi already selects the principal sheet
        out[~right] = _LOG_PI - _log_sin_pi(zl) - _lanczos_log_gamma(1.0 - zl)
    return complex(out[0]) if scalar else out


def _reduced_series(nu: float, z, *, rtol: float = SERIES_RTOL, max_terms: int = SERIES_MAX_TERMS):
    """Sum_k (z^2/4)^k / (k! (1 + i nu)_k) for an array of z."""
    q = 0.25 * np.asarray(z, dtype=float) ** 2
    term = np.ones(q.shape, dtype=complex)
    total = term.copy()
    quiet = np.zeros(q.shape, dtype=int)
    for k in range(1, max_terms + 1):
        term = term * q / (k * (k + 1j * nu))
        total = total + term
        small = np.abs(term) < rtol * np.abs(total)
        quiet = np.where(small, quiet + 1, 0)
        if np.all(quiet >= SERIES_PATIENCE):
            return total
    raise BesselConvergenceError(
        f"I_(i nu) series for nu={nu} did not converge in {max_terms} terms (max z={np.max(z):.3g})"
    )


def bessel_I_imag_order(nu: float, z: float) -> ScaledComplex:
    r"""Modified Bessel function :math:`I_{i\nu}(z)` in log-scaled form.

    Parameters
    ----------
    nu : float
        Imaginary part of the order. Negative values give the conjugate,
        since :math:`I_{-i\nu}(z) = \overline{I_{i\nu}(z)}` for real arguments.
    z : float
        Positive real argument.

    Returns
    -------
    ScaledComplex
    """
    if not z > 0:
        raise ValueError(f"argument must be positive, got z={z}")
    if nu < 0:
        return bessel_I_imag_order(-nu, z).conjugate()
    series = complex(_reduced_series(nu, np.array([z]))[0])
    lg = log_gamma_complex(1.0 + 1j * nu)
    return ScaledComplex(
        log_magnitude=math.log(abs(series)) - lg.real,
        phase=nu * math.log(z / 2.0) - lg.imag + math.atan2(series.imag, series.real),
    )


def rindler_radial_profile(nu: float, m: float, x0: float, chi, *, log_reference: float | None = None):
    r"""Radial factor :math:`\mathrm{Im}[I_{-i\nu}(m x_0)\, I_{i\nu}(m\chi)]` of a Rindler packet.

    The product carries the common factor :math:`1/|\Gamma(1+i\nu)|^2`. It is
    divided out by default (``log_reference`` equal to its logarithm); any
    other reference only rescales the result by a positive constant.

    ``chi`` may be an array; the result has its shape.
    """
    if not (m > 0 and x0 > 0):
        raise ValueError("mass and x0 must be positive")
    chi = np.asarray(chi, dtype=float)
    if np.any(chi <= 0):
        raise ValueError("chi must be positive")
    # one call, so chi == x0 sees bit-identical sums and lands on the node exactly
    sums = _reduced_series(nu, m * np.concatenate(([x0], chi.ravel())))
    s_ref, s_chi = sums[0], sums[1:].reshape(chi.shape)
    log_common = -2.0 * log_gamma_complex(1.0 + 1j * nu).real
    if log_reference is None:
        log_reference = log_common
    log_mag = np.log(np.abs(s_ref)) + np.log(np.abs(s_chi)) + (log_common - log_reference)
    phase = nu * np.log(chi / x0) + (np.angle(s_chi) - np.angle(s_ref))
    return np.exp(log_mag) * np.sin(phase)
