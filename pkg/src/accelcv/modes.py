"""Localized wavepackets in the inertial and Rindler charts and their overlaps.

Both packets share the log-Gaussian envelope
``exp(-2 * ((x0 / L) * log(x / x0))**2)`` centred on ``x0 = 1 / acceleration``.
The inertial packet carries ``sin(k0 * (x - x0))`` with ``k0 = sqrt(Omega0**2 - m**2)``;
the Rindler packet carries the imaginary-order Bessel standing wave from
:func:`accelcv.special.rindler_radial_profile`. Everything lives on the
``t = 0`` slice, which coincides with ``eta = 0``, so one Klein-Gordon integral
serves both charts.

Wedge II quantities are spatial mirrors of wedge I (``x -> -x``), which keeps
``alpha_II(A) == alpha_I(A)`` bit for bit.
"""
from __future__ import annotations

import csv
import enum
import math
import warnings
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np
from scipy.interpolate import CubicSpline

from .special import rindler_radial_profile

__all__ = [
    "Wedge",
    "Chart",
    "ModeParameters",
    "ModeSpec",
    "Resolution",
    "SampledMode",
    "BogoliubovCoefficients",
    "OverlapReport",
    "ModeSpecError",
    "GridTooCoarseError",
    "NegativeFrequencyError",
    "AccelerationRangeError",
    "MIN_DIRECT_ACCELERATION",
    "inertial_profile",
    "rindler_profile",
    "mode_grid",
    "build_inertial_mode",
    "build_rindler_mode",
    "reflect",
    "project_positive_frequency",
    "kg_inner_product",
    "wedge_overlaps",
    "compute_overlaps",
    "dump_mode_csv",
]

MIN_DIRECT_ACCELERATION = 0.03
MIN_POINTS_PER_WAVELENGTH = 16
MAX_NEGATIVE_FRACTION = 0.10
SUPPORT_THRESHOLD = 1e-10


class ModeSpecError(ValueError):
    pass


class GridTooCoarseError(ModeSpecError):
    pass


class NegativeFrequencyError(ValueError):
    pass


class AccelerationRangeError(ValueError):
    pass


class Wedge(str, enum.Enum):
    I = "I"
    II = "II"

    @property
    def sign(self) -> float:
        return 1.0 if self is Wedge.I else -1.0


class Chart(str, enum.Enum):
    MINKOWSKI = "Minkowski"
    RINDLER = "Rindler"


@dataclass(frozen=True)
class ModeParameters:
    """Packet parameters shared by every mode in a computation.

    ``horizon_factor`` sets the horizon-distance rule ``1/A >= horizon_factor * L``.
    With ``L = 2`` the default admits accelerations up to 0.5; past roughly
    0.58 the Bessel factor grows exponentially inside the envelope and the
    Rindler packet stops being normalizable.
    """

    mass: float = 0.1
    width: float = 2.0
    omega0: float = 5.0
    horizon_factor: float = 1.0
    offset: float = 0.0

    def __post_init__(self):
        if not self.mass > 0:
            raise ModeSpecError(f"mass must be positive, got {self.mass}")
        if not self.width > 0:
            raise ModeSpecError(f"width must be positive, got {self.width}")
        if not self.omega0 > self.mass:
            raise ModeSpecError(f"omega0={self.omega0} must exceed the mass {self.mass}")
        if not self.horizon_factor > 0:
            raise ModeSpecError("horizon_factor must be positive")

    @property
    def max_acceleration(self) -> float:
        return 1.0 / (self.horizon_factor * self.width)

    def spec(self, acceleration: float, wedge: Wedge | str = Wedge.I, chart: Chart | str = Chart.RINDLER) -> "ModeSpec":
        wedge = Wedge(wedge)
        return ModeSpec(
            wedge=wedge,
            x0=wedge.sign / acceleration,
            width=self.width,
            omega0=self.omega0,
            mass=self.mass,
            acceleration=acceleration,
            chart=Chart(chart),
            offset=self.offset,
            horizon_factor=self.horizon_factor,
        )


@dataclass(frozen=True)
class ModeSpec:
    wedge: Wedge
    x0: float
    width: float
    omega0: float
    mass: float
    acceleration: float
    chart: Chart
    offset: float = 0.0
    horizon_factor: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "wedge", Wedge(self.wedge))
        object.__setattr__(self, "chart", Chart(self.chart))
        self.validate()

    def validate(self) -> None:
        if self.x0 == 0 or math.copysign(1.0, self.x0) != self.wedge.sign:
            raise ModeSpecError(f"x0={self.x0} lies outside wedge {self.wedge.value}")
        if not self.width > 0:
            raise ModeSpecError("width must be positive")
        if not self.mass >= 0:
            raise ModeSpecError("mass must be non-negative")
        if not self.omega0 > self.mass:
            raise ModeSpecError(f"omega0={self.omega0} must exceed the mass {self.mass}")
        if self.acceleration < 0:
            raise ModeSpecError("acceleration must be non-negative")
        if self.chart is Chart.RINDLER:
            if self.acceleration <= 0:
                raise ModeSpecError("a Rindler mode needs a positive acceleration")
            if self.mass <= 0:
                raise ModeSpecError("the Rindler profile needs a positive mass")
            if not math.isclose(abs(self.x0), 1.0 / self.acceleration, rel_tol=1e-12):
                raise ModeSpecError(f"|x0|={abs(self.x0)} must equal 1/acceleration={1.0 / self.acceleration}")
            if 1.0 / self.acceleration < self.horizon_factor * self.width * (1 - 1e-12):
                raise ModeSpecError(
                    f"acceleration {self.acceleration} puts the packet centre within "
                    f"{self.horizon_factor} widths of the horizon"
                )

    @property
    def wavenumber(self) -> float:
        return math.sqrt(self.omega0**2 - self.mass**2)

    @property
    def rindler_order(self) -> float:
        return self.omega0 * abs(self.x0)

    def mirrored(self) -> "ModeSpec":
        other = Wedge.II if self.wedge is Wedge.I else Wedge.I
        return replace(self, wedge=other, x0=-self.x0)


@dataclass(frozen=True)
class Resolution:
    points_per_wavelength: float = 32.0
    envelope_cutoff: float = 1e-12
    padding: float = 100.0

    def __post_init__(self):
        if self.points_per_wavelength < MIN_POINTS_PER_WAVELENGTH:
            raise GridTooCoarseError(
                f"{self.points_per_wavelength} points per wavelength; at least {MIN_POINTS_PER_WAVELENGTH} required"
            )
        if not 0 < self.envelope_cutoff < 1:
            raise ModeSpecError("envelope_cutoff must lie in (0, 1)")
        if self.padding < 0:
            raise ModeSpecError("padding must be non-negative")

    def refined(self, factor: float = 2.0) -> "Resolution":
        return replace(self, points_per_wavelength=self.points_per_wavelength * factor)


@dataclass(frozen=True, eq=False)
class SampledMode:
    """Cauchy data ``(values, t_derivative)`` of a mode on a uniform grid.

    ``kg_norm`` is the Klein-Gordon norm before the data were scaled to unit
    norm. ``negative_fraction`` is the share of the norm removed by the
    positive-frequency projection (``None`` until projected).
    """

    spec: ModeSpec
    grid: np.ndarray
    values: np.ndarray
    t_derivative: np.ndarray
    kg_norm: float
    negative_fraction: float | None = None

    def conj(self) -> "SampledMode":
        return replace(self, values=np.conj(self.values), t_derivative=np.conj(self.t_derivative))

    def scaled(self, factor: complex) -> "SampledMode":
        return replace(self, values=self.values * factor, t_derivative=self.t_derivative * factor)

    @property
    def spacing(self) -> float:
        return float(self.grid[1] - self.grid[0])


@dataclass(frozen=True)
class BogoliubovCoefficients:
    alpha_I: complex
    alpha_II: complex
    beta_I: complex
    beta_II: complex

    def beta_ratio(self) -> float:
        """Largest ``|beta| / |alpha|`` over the two wedges (0/0 counts as 0)."""

        def ratio(a, b):
            if b == 0:
                return 0.0
            return abs(b) / abs(a) if a != 0 else math.inf

        return max(ratio(self.alpha_I, self.beta_I), ratio(self.alpha_II, self.beta_II))


@dataclass(frozen=True)
class OverlapReport:
    acceleration: float
    alpha: complex
    beta: complex
    negative_fraction_inertial: float
    negative_fraction_rindler: float
    grid_points: int
    extras: dict = field(default_factory=dict, compare=False)


def _envelope(spec: ModeSpec, x):
    x = np.asarray(x, dtype=float)
    inside = x / spec.x0 > 0
    ratio = (abs(spec.x0) / spec.width) * np.log(np.where(inside, x / spec.x0, 1.0))
    return np.where(inside, np.exp(-2.0 * ratio**2), 0.0)


def inertial_profile(spec: ModeSpec, x):
    """Unnormalized inertial profile ``+/- env(x) sin(k0 (x - x0))`` (upper sign for wedge I)."""
    x = np.asarray(x, dtype=float) - math.copysign(spec.offset, spec.x0)
    return spec.wedge.sign * _envelope(spec, x) * np.sin(spec.wavenumber * (x - spec.x0))


def rindler_profile(spec: ModeSpec, chi):
    """Unnormalized Rindler profile ``env(chi) Im[I_{-i nu}(m|x0|) I_{i nu}(m|chi|)]``."""
    chi = np.asarray(chi, dtype=float) - math.copysign(spec.offset, spec.x0)
    radial = rindler_radial_profile(spec.rindler_order, spec.mass, abs(spec.x0), np.abs(chi))
    return _envelope(spec, chi) * radial


def _grid_and_core(spec: ModeSpec, resolution: Resolution):
    x0 = abs(spec.x0)
    spread = (spec.width / x0) * math.sqrt(math.log(1.0 / resolution.envelope_cutoff) / 2.0)
    lo, hi = x0 * math.exp(-spread), x0 * math.exp(spread)
    k_max = max(spec.wavenumber, spec.omega0 * math.exp(spread))
    n_core = int(math.ceil((hi - lo) * resolution.points_per_wavelength * k_max / (2.0 * math.pi)))
    dx = (hi - lo) / n_core
    n_pad = int(math.ceil(resolution.padding / dx))
    grid = lo - n_pad * dx + dx * np.arange(n_core + 2 * n_pad + 1) + spec.offset
    return grid, slice(n_pad, n_pad + n_core + 1)


def mode_grid(spec: ModeSpec, resolution: Resolution = Resolution()) -> np.ndarray:
    """Uniform grid covering the envelope down to ``resolution.envelope_cutoff``.

    The spacing resolves the largest local wavenumber on the window, which for
    the Rindler profile is ``Omega0 * x0 / chi`` at the inner end. The window is
    then padded with ``resolution.padding`` on both sides, room for the slowly
    decaying tails that the positive-frequency projection creates. The grid
    depends only on geometry, so the inertial and Rindler modes of one
    acceleration share it.
    """
    if spec.wedge is Wedge.II:
        return -mode_grid(spec.mirrored(), resolution)[::-1]
    return _grid_and_core(spec, resolution)[0]


def _sample(profile, spec: ModeSpec, resolution: Resolution):
    grid, core = _grid_and_core(spec, resolution)
    values = np.zeros(grid.size, dtype=complex)
    # profiles are only trusted on the envelope window; zero padding outside
    values[core] = profile(spec, grid[core])
    return grid, values


def _normalized(spec, grid, values, t_derivative, negative_fraction=None) -> SampledMode:
    norm = _kg_same_grid(grid, values, t_derivative, values, t_derivative).real
    if not norm > 0:
        raise ModeSpecError(f"non-positive Klein-Gordon norm {norm} for {spec}")
    scale = 1.0 / math.sqrt(norm)
    return SampledMode(spec, grid, values * scale, t_derivative * scale, norm, negative_fraction)


def reflect(mode: SampledMode) -> SampledMode:
    """Mirror a mode through ``x = 0``; the time derivative is unchanged."""
    return replace(
        mode,
        spec=mode.spec.mirrored(),
        grid=-mode.grid[::-1],
        values=mode.values[::-1].copy(),
        t_derivative=mode.t_derivative[::-1].copy(),
    )


def build_inertial_mode(spec: ModeSpec, resolution: Resolution = Resolution()) -> SampledMode:
    """Inertial packet with ``d/dt phi = -i Omega0 phi``, normalized but not yet projected."""
    if spec.chart is not Chart.MINKOWSKI:
        raise ModeSpecError("build_inertial_mode needs a Minkowski spec")
    if spec.wedge is Wedge.II:
        return reflect(build_inertial_mode(spec.mirrored(), resolution))
    grid, values = _sample(inertial_profile, spec, resolution)
    return _normalized(spec, grid, values, -1j * spec.omega0 * values)


def build_rindler_mode(spec: ModeSpec, resolution: Resolution = Resolution()) -> SampledMode:
    """Rindler packet on ``eta = 0`` with its inertial-time derivative.

    With ``a = 1/|x0|`` the centre's proper time is ``eta``, and
    ``d/dt = (1 / (a chi)) d/deta`` on the slice, so a single Rindler frequency
    ``Omega0`` at the centre becomes ``d/dt psi = -i Omega0 (|x0| / |chi|) psi``.
    In wedge II proper time runs against ``t`` and the same inertial-time
    expression results.
    """
    if spec.chart is not Chart.RINDLER:
        raise ModeSpecError("build_rindler_mode needs a Rindler spec")
    if spec.wedge is Wedge.II:
        return reflect(build_rindler_mode(spec.mirrored(), resolution))
    grid, values = _sample(rindler_profile, spec, resolution)
    chi = np.where(values != 0, grid - spec.offset, 1.0)
    t_derivative = -1j * spec.omega0 * (abs(spec.x0) / chi) * values
    return _normalized(spec, grid, values, t_derivative)


def _is_uniform(grid: np.ndarray) -> bool:
    steps = np.diff(grid)
    return bool(np.all(np.abs(steps - steps[0]) <= 1e-9 * abs(steps[0])))


def project_positive_frequency(mode: SampledMode) -> SampledMode:
    """Drop negative-frequency plane waves from the Cauchy data and renormalize.

    Per wavenumber ``k`` with ``w = sqrt(k**2 + m**2)`` the positive-frequency
    amplitude is ``(w f(k) + i g(k)) / (2 w)``. The grid is treated as periodic,
    which is harmless because the data vanish at both ends.

    Raises
    ------
    NegativeFrequencyError
        If more than 10% of the norm sits at negative frequencies.
    """
    if not _is_uniform(mode.grid):
        raise ValueError("projection needs a uniform grid")
    n = mode.grid.size
    k = 2.0 * np.pi * np.fft.fftfreq(n, d=mode.spacing)
    w = np.sqrt(k**2 + mode.spec.mass**2)
    f = np.fft.fft(mode.values)
    g = np.fft.fft(mode.t_derivative)
    safe_w = np.where(w > 0, w, 1.0)
    pos = np.where(w > 0, (w * f + 1j * g) / (2.0 * safe_w), 0.5 * f)
    neg = f - pos
    pos_norm = np.sum(w * np.abs(pos) ** 2)
    neg_norm = np.sum(w * np.abs(neg) ** 2)
    fraction = float(neg_norm / (pos_norm + neg_norm))
    if fraction > MAX_NEGATIVE_FRACTION:
        raise NegativeFrequencyError(
            f"{fraction:.3g} of the norm is negative-frequency; Omega0 * L is too small for {mode.spec}"
        )
    values = np.fft.ifft(pos)
    t_derivative = np.fft.ifft(-1j * w * pos)
    return _normalized(mode.spec, mode.grid, values, t_derivative, fraction)


def _trapezoid_fsum(grid, integrand) -> complex:
    # fsum is exactly rounded, so mirrored data give bit-identical results
    # spacing from the endpoints is invariant under x -> -x
    weights = np.full(grid.size, abs(grid[-1] - grid[0]) / (grid.size - 1))
    weights[0] *= 0.5
    weights[-1] *= 0.5
    terms = weights * integrand
    return complex(math.fsum(terms.real), math.fsum(terms.imag))


def _kg_same_grid(grid, a, da, b, db) -> complex:
    return 1j * _trapezoid_fsum(grid, np.conj(a) * db - np.conj(da) * b)


def _support(mode: SampledMode):
    mag = np.abs(mode.values)
    idx = np.flatnonzero(mag >= SUPPORT_THRESHOLD * mag.max())
    return mode.grid[idx[0]], mode.grid[idx[-1]]


def _resample(mode: SampledMode, grid: np.ndarray):
    out_v = np.zeros(grid.size, dtype=complex)
    out_d = np.zeros(grid.size, dtype=complex)
    inside = (grid >= mode.grid[0]) & (grid <= mode.grid[-1])
    for src, dst in ((mode.values, out_v), (mode.t_derivative, out_d)):
        dst[inside] = CubicSpline(mode.grid, src.real)(grid[inside]) + 1j * CubicSpline(mode.grid, src.imag)(grid[inside])
    return out_v, out_d


def kg_inner_product(a: SampledMode, b: SampledMode) -> complex:
    """Klein-Gordon product ``i * integral(conj(a) d_t b - conj(d_t a) b) dx`` on ``t = 0``.

    Modes on different grids are resampled onto a common uniform grid. If their
    supports do not overlap a warning is issued and ``0`` returned.
    """
    if a.grid.size == b.grid.size and np.array_equal(a.grid, b.grid):
        return _kg_same_grid(a.grid, a.values, a.t_derivative, b.values, b.t_derivative)
    a_lo, a_hi = _support(a)
    b_lo, b_hi = _support(b)
    if a_hi <= b_lo or b_hi <= a_lo:
        warnings.warn("modes have disjoint support; Klein-Gordon product set to 0", RuntimeWarning, stacklevel=2)
        return 0j
    lo, hi = min(a.grid[0], b.grid[0]), max(a.grid[-1], b.grid[-1])
    dx = min(abs(a.spacing), abs(b.spacing))
    grid = np.linspace(lo, hi, int(math.ceil((hi - lo) / dx)) + 1)
    av, ad = _resample(a, grid)
    bv, bd = _resample(b, grid)
    return _kg_same_grid(grid, av, ad, bv, bd)


@lru_cache(maxsize=16)
def _wedge_one_pair(acceleration: float, params: ModeParameters, resolution: Resolution):
    inertial = project_positive_frequency(build_inertial_mode(params.spec(acceleration, Wedge.I, Chart.MINKOWSKI), resolution))
    rindler = project_positive_frequency(build_rindler_mode(params.spec(acceleration, Wedge.I, Chart.RINDLER), resolution))
    return inertial, rindler


def wedge_overlaps(
    acceleration: float,
    wedge: Wedge | str = Wedge.I,
    params: ModeParameters = ModeParameters(),
    resolution: Resolution = Resolution(),
) -> OverlapReport:
    """``alpha = (psi, phi)`` and ``beta = -(psi, phi*)`` for one wedge, phase-fixed so alpha >= 0."""
    wedge = Wedge(wedge)
    if not MIN_DIRECT_ACCELERATION <= acceleration <= params.max_acceleration * (1 + 1e-12):
        raise AccelerationRangeError(
            f"acceleration {acceleration} outside [{MIN_DIRECT_ACCELERATION}, {params.max_acceleration}]; "
            "interpolate the alpha curve below the lower end"
        )
    inertial, rindler = _wedge_one_pair(float(acceleration), params, resolution)
    if wedge is Wedge.II:
        inertial, rindler = reflect(inertial), reflect(rindler)
    alpha = kg_inner_product(rindler, inertial)
    beta = -kg_inner_product(rindler, inertial.conj())
    # rotate psi by the phase of alpha
    phase = alpha / abs(alpha)
    return OverlapReport(
        acceleration=float(acceleration),
        alpha=complex(abs(alpha)),
        beta=beta / phase,
        negative_fraction_inertial=inertial.negative_fraction,
        negative_fraction_rindler=rindler.negative_fraction,
        grid_points=int(inertial.grid.size),
    )


def compute_overlaps(
    accel_I: float,
    accel_II: float,
    params: ModeParameters = ModeParameters(),
    resolution: Resolution = Resolution(),
) -> BogoliubovCoefficients:
    """Bogoliubov overlaps for packets accelerating with ``accel_I`` and ``accel_II``."""
    one = wedge_overlaps(accel_I, Wedge.I, params, resolution)
    two = wedge_overlaps(accel_II, Wedge.II, params, resolution)
    return BogoliubovCoefficients(one.alpha, two.alpha, one.beta, two.beta)


def dump_mode_csv(mode: SampledMode, path) -> None:
    """Write a mode as CSV: coordinate, re/im of the value, re/im of d/dt."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["coordinate", "re_value", "im_value", "re_dt", "im_dt"])
        for row in zip(mode.grid, mode.values.real, mode.values.imag, mode.t_derivative.real, mode.t_derivative.imag):
            writer.writerow([repr(float(v)) for v in row])
