import csv
import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from accelcv.modes import (
    AccelerationRangeError,
    Chart,
    GridTooCoarseError,
    ModeParameters,
    ModeSpec,
    ModeSpecError,
    NegativeFrequencyError,
    Resolution,
    Wedge,
    build_inertial_mode,
    build_rindler_mode,
    compute_overlaps,
    dump_mode_csv,
    kg_inner_product,
    mode_grid,
    project_positive_frequency,
    reflect,
    wedge_overlaps,
)

PARAMS = ModeParameters()

# regression baselines at A = 0.1 with the default resolution
ALPHA_AT_0_1 = 0.9767282173078509
NEG_FRACTION_INERTIAL_0_1 = 0.005315718580066936
NEG_FRACTION_RINDLER_0_1 = 0.005276166863026367
ZERO_CROSSINGS_0_1 = 11


def rindler(a, wedge="I", resolution=Resolution()):
    return build_rindler_mode(PARAMS.spec(a, wedge, Chart.RINDLER), resolution)


def inertial(a, wedge="I", resolution=Resolution()):
    return build_inertial_mode(PARAMS.spec(a, wedge, Chart.MINKOWSKI), resolution)


def test_spec_rejects_wrong_wedge_sign():
    with pytest.raises(ModeSpecError):
        ModeSpec(Wedge.I, -10.0, 2.0, 5.0, 0.1, 0.1, Chart.RINDLER)


def test_spec_rejects_mismatched_centre():
    with pytest.raises(ModeSpecError):
        ModeSpec(Wedge.I, 9.0, 2.0, 5.0, 0.1, 0.1, Chart.RINDLER)


def test_spec_horizon_rule():
    ModeSpec(Wedge.I, 2.0, 2.0, 5.0, 0.1, 0.5, Chart.RINDLER)
    with pytest.raises(ModeSpecError):
        ModeSpec(Wedge.I, 1.0 / 0.6, 2.0, 5.0, 0.1, 0.6, Chart.RINDLER)
    # a stricter rule moves the limit
    with pytest.raises(ModeSpecError):
        ModeSpec(Wedge.I, 4.0, 2.0, 5.0, 0.1, 0.25, Chart.RINDLER, horizon_factor=5.0)


def test_parameters_validation():
    with pytest.raises(ModeSpecError):
        ModeParameters(mass=0.0)
    with pytest.raises(ModeSpecError):
        ModeParameters(omega0=0.05)
    assert ModeParameters().max_acceleration == 0.5


def test_grid_too_coarse():
    with pytest.raises(GridTooCoarseError):
        Resolution(points_per_wavelength=8)


def test_grid_is_uniform_and_resolves_wavelength():
    spec = PARAMS.spec(0.2, "I", Chart.RINDLER)
    res = Resolution()
    grid = mode_grid(spec, res)
    steps = np.diff(grid)
    assert np.allclose(steps, steps[0], rtol=1e-9)
    # inner end of the envelope has the shortest local wavelength
    assert steps[0] <= 2 * math.pi / (spec.omega0 * res.points_per_wavelength)


def test_wedge_two_grid_is_mirror():
    a = mode_grid(PARAMS.spec(0.1, "I", Chart.RINDLER))
    b = mode_grid(PARAMS.spec(0.1, "II", Chart.RINDLER))
    assert np.array_equal(b, -a[::-1])


def test_inertial_kg_norm_matches_plane_wave_formula():
    mode = inertial(0.1)
    dx = mode.spacing
    # for d/dt phi = -i w phi the Klein-Gordon norm is 2 w |phi|^2 integrated
    norm = 2 * PARAMS.omega0 * np.sum(np.abs(mode.values) ** 2) * dx
    assert norm == pytest.approx(1.0, rel=1e-12)


def test_modes_are_unit_norm():
    for mode in (inertial(0.3), rindler(0.3), project_positive_frequency(rindler(0.3))):
        assert kg_inner_product(mode, mode).real == pytest.approx(1.0, abs=1e-13)
        assert abs(kg_inner_product(mode, mode).imag) < 1e-13


def test_kg_product_is_hermitian_and_conjugation_flips_sign():
    a, b = project_positive_frequency(inertial(0.2)), project_positive_frequency(rindler(0.2))
    ab, ba = kg_inner_product(a, b), kg_inner_product(b, a)
    assert ab == pytest.approx(ba.conjugate(), abs=1e-14)
    assert kg_inner_product(a.conj(), a.conj()).real == pytest.approx(-1.0, abs=1e-13)


def test_rindler_time_derivative_is_local_frequency():
    mode = rindler(0.1)
    chi = mode.grid
    inside = mode.values != 0
    ratio = mode.t_derivative[inside] / mode.values[inside]
    assert np.allclose(ratio, -1j * PARAMS.omega0 * (10.0 / chi[inside]), rtol=1e-14)


def test_zero_crossing_count_baseline():
    v = rindler(0.1).values.real
    big = v[np.abs(v) > 1e-3 * np.abs(v).max()]
    assert np.sum(np.sign(big[1:]) != np.sign(big[:-1])) == ZERO_CROSSINGS_0_1


def test_envelope_half_width():
    # env = 1/2 where |log(x/x0)| = (L/x0) sqrt(ln 2 / 2)
    spec = PARAMS.spec(0.1, "I", Chart.MINKOWSKI)
    from accelcv.modes import _envelope

    u = (spec.width / spec.x0) * math.sqrt(math.log(2) / 2)
    for x in (spec.x0 * math.exp(u), spec.x0 * math.exp(-u)):
        assert _envelope(spec, np.array([x]))[0] == pytest.approx(0.5, rel=1e-14)


def test_projection_baselines():
    assert project_positive_frequency(inertial(0.1)).negative_fraction == pytest.approx(NEG_FRACTION_INERTIAL_0_1, rel=1e-6)
    assert project_positive_frequency(rindler(0.1)).negative_fraction == pytest.approx(NEG_FRACTION_RINDLER_0_1, rel=1e-6)


def test_projection_is_idempotent():
    once = project_positive_frequency(rindler(0.2))
    twice = project_positive_frequency(once)
    assert twice.negative_fraction < 1e-20
    assert np.allclose(twice.values, once.values, atol=1e-13)


def test_projection_rejects_low_frequency_packets():
    params = ModeParameters(omega0=0.5)
    with pytest.raises(NegativeFrequencyError):
        project_positive_frequency(build_inertial_mode(params.spec(0.1, "I", Chart.MINKOWSKI)))


def test_alpha_baseline():
    rep = wedge_overlaps(0.1)
    assert rep.alpha.real == pytest.approx(ALPHA_AT_0_1, abs=1e-9)
    assert rep.alpha.imag == 0.0


def test_wedges_agree_bit_for_bit():
    for a in (0.05, 0.3, 0.5):
        one = wedge_overlaps(a, "I")
        two = wedge_overlaps(a, "II")
        assert one.alpha == two.alpha
        assert abs(one.beta) == abs(two.beta)


def test_compute_overlaps_pairs_wedges():
    c = compute_overlaps(0.1, 0.3)
    assert c.alpha_I == wedge_overlaps(0.1).alpha
    assert c.alpha_II == wedge_overlaps(0.3).alpha
    assert c.beta_ratio() < 1e-10


def test_alpha_converges_under_refinement():
    for a in (0.05, 0.5):
        base = wedge_overlaps(a).alpha.real
        fine = wedge_overlaps(a, resolution=Resolution().refined(2)).alpha.real
        deep = wedge_overlaps(a, resolution=Resolution(envelope_cutoff=1e-14)).alpha.real
        assert abs(fine - base) < 1e-8
        assert abs(deep - base) < 1e-8


def test_alpha_range_checks():
    with pytest.raises(AccelerationRangeError):
        wedge_overlaps(0.02)
    with pytest.raises(AccelerationRangeError):
        wedge_overlaps(0.6)


def test_alpha_bounded_and_decreasing():
    values = [wedge_overlaps(a).alpha.real for a in (0.03, 0.1, 0.2, 0.3, 0.4, 0.5)]
    assert all(0 < v <= 1 for v in values)
    assert all(b < a for a, b in zip(values, values[1:]))


def test_kg_product_across_grids_matches_same_grid():
    res_fine = Resolution(points_per_wavelength=48)
    phi = project_positive_frequency(inertial(0.2, resolution=res_fine))
    psi = project_positive_frequency(rindler(0.2))
    mixed = abs(kg_inner_product(psi, phi))
    same = wedge_overlaps(0.2).alpha.real
    assert mixed == pytest.approx(same, abs=1e-6)


def test_disjoint_modes_warn_and_vanish():
    a = inertial(0.1, "I")
    b = inertial(0.1, "II")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        assert kg_inner_product(a, b) == 0
    assert any("disjoint" in str(w.message) for w in caught)


def test_offset_translates_without_changing_alpha():
    shifted = ModeParameters(offset=3.0)
    a = wedge_overlaps(0.2, params=shifted).alpha.real
    assert a == pytest.approx(wedge_overlaps(0.2).alpha.real, abs=1e-10)
    mode = build_rindler_mode(shifted.spec(0.2, "I", Chart.RINDLER))
    peak = mode.grid[np.argmax(np.abs(mode.values))]
    assert abs(peak - 8.0) < 1.0


@given(st.sampled_from([0.05, 0.2, 0.4]), st.sampled_from(["I", "II"]))
def test_reflect_is_an_involution(a, wedge):
    mode = rindler(a, wedge, Resolution(padding=0.0))
    back = reflect(reflect(mode))
    assert np.array_equal(back.grid, mode.grid)
    assert np.array_equal(back.values, mode.values)
    assert back.spec == mode.spec


def test_dump_mode_csv(tmp_path):
    mode = inertial(0.2, resolution=Resolution(padding=0.0))
    path = tmp_path / "mode.csv"
    dump_mode_csv(mode, path)
    with open(path) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["coordinate", "re_value", "im_value", "re_dt", "im_dt"]
    assert len(rows) == mode.grid.size + 1
    assert float(rows[1][0]) == mode.grid[0]
