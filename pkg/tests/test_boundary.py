import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qudit_bound_lab import boundary as bd
from qudit_bound_lab.errors import ContractViolation

angles = st.floats(min_value=0.0, max_value=2 * np.pi, allow_nan=False)


def extremal_overlap(d, phi):
    """(1/d) sum_j exp(i phi_j) for phi repeated d-1 times and (1-d) phi once."""
    phi = np.asarray(phi, dtype=float)
    return ((d - 1) * np.exp(1j * phi) + np.exp(1j * (1 - d) * phi)) / d


def test_boundary_point_qutrit_vertex():
    p = bd.boundary_point(3, np.pi / 3)
    assert abs(p.r_max - 1 / 3) <= 1e-12


def test_boundary_point_at_zero():
    p = bd.boundary_point(4, 0.0)
    assert p.r_max == 1.0
    assert p.Phi == 0.0


def test_boundary_point_qutrit_pi_over_six():
    # hand substitution: sin^2(pi/4) = 1/2, arg(2 - i) = -arctan(1/2)
    p = bd.boundary_point(3, np.pi / 6)
    assert abs(p.r_max - np.sqrt(5) / 3) <= 1e-12
    assert abs(p.Phi - (np.pi / 6 - np.arctan(0.5))) <= 1e-12
    assert abs(p.r_max - 0.7453559924999299) <= 1e-12
    assert abs(p.Phi - 0.0599511665974927) <= 1e-12


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
def test_boundary_matches_extremal_configuration(d):
    phi = np.linspace(0, 2 * np.pi, 1001)
    r, big_phi, _, _ = bd.boundary_arrays(d, phi)
    o = extremal_overlap(d, phi)
    assert np.max(np.abs(r - np.abs(o))) <= 1e-12
    z = r * np.exp(1j * big_phi)
    assert np.max(np.abs(z - o)) <= 1e-12


def test_qubit_product_state_is_unit_circle():
    for phi in np.linspace(0, 2 * np.pi, 17):
        r, big_phi = bd.qubit_boundary_point(0.0, phi)
        assert r == 1.0
        assert abs(big_phi - phi) <= 1e-12


def test_qubit_maximal_is_segment():
    for phi in np.linspace(0, 2 * np.pi, 33):
        r, big_phi = bd.qubit_boundary_point(1.0, phi)
        assert abs(r - abs(np.cos(phi))) <= 1e-12
        assert min(abs(np.exp(1j * big_phi) - 1), abs(np.exp(1j * big_phi) + 1)) <= 1e-12


def test_qubit_partial_value():
    c, phi = 0.94, np.pi / 4
    r, big_phi = bd.qubit_boundary_point(c, phi)
    assert abs(r - np.sqrt(1 - c**2 / 2)) <= 1e-12
    assert abs(big_phi - np.arctan(np.sqrt(1 - c**2))) <= 1e-12
    assert abs(r - 0.747127833774114) <= 1e-12
    assert abs(big_phi - 0.3287908745913587) <= 1e-12


@pytest.mark.parametrize("c", [0.1, 0.5, 0.94, 0.999])
def test_qubit_curve_is_ellipse(c):
    # x^2 + y^2 / (1 - C^2) = 1 is an independent closed form of the same curve
    r, big_phi = bd.qubit_arrays(c, np.linspace(0, 2 * np.pi, 2001))
    x, y = r * np.cos(big_phi), r * np.sin(big_phi)
    assert np.max(np.abs(x**2 + y**2 / (1 - c**2) - 1)) <= 1e-12


def test_qubit_phase_is_continuous():
    phi = np.linspace(0, 2 * np.pi, 4001)
    _, big_phi = bd.qubit_arrays(0.94, phi)
    assert np.max(np.abs(np.diff(big_phi))) < 0.01
    assert big_phi[0] == 0.0 and abs(big_phi[-1] - 2 * np.pi) <= 1e-12


def test_topological_phases():
    assert bd.topological_phases(2) == [0.0, np.pi]
    assert np.allclose(bd.topological_phases(3), [0, 2 * np.pi / 3, 4 * np.pi / 3], atol=0)
    assert np.allclose(bd.topological_phases(4), [0, np.pi / 2, np.pi, 3 * np.pi / 2], atol=0)


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_unit_radius_at_topological_phases(d):
    for t in bd.topological_phases(d):
        assert abs(bd.boundary_point(d, t).r_max - 1) <= 1e-12
        assert abs(bd.max_radius(d, t) - 1) <= 1e-12


def test_contains_examples():
    assert bd.contains(3, 0.99)
    assert not bd.contains(3, 0.5 * np.exp(1j * np.pi / 3))
    assert not bd.contains(2, 0.3 * np.exp(0.2j))
    assert bd.contains(2, -0.7 + 1e-17j)
    assert bd.contains(3, (1 / 3 - 1e-12) * np.exp(1j * np.pi / 3))


def test_contains_rejects_out_of_range():
    with pytest.raises(ContractViolation):
        bd.contains(3, 1.1)


@pytest.mark.parametrize("d", [3, 4, 5])
def test_max_radius_against_dense_curve(d):
    # independent route: evaluate the extremal configuration densely and
    # interpolate its radius as a function of its phase
    phi = np.linspace(0, 2 * np.pi / d, 200_001)
    o = extremal_overlap(d, phi)
    ph = np.unwrap(np.angle(o))
    q = np.linspace(0.05, 2 * np.pi / d - 0.05, 97)
    expected = np.interp(q, ph, np.abs(o))
    assert np.max(np.abs(bd.max_radius(d, q) - expected)) <= 1e-6


def test_max_radius_qubit_partial_is_ellipse():
    c = 0.94
    s = np.sqrt(1 - c * c)
    q = np.linspace(-np.pi, np.pi, 101)
    r = bd.max_radius(2, q, concurrence=c)
    assert np.max(np.abs((r * np.cos(q)) ** 2 + (r * np.sin(q) / s) ** 2 - 1)) <= 1e-12


@pytest.mark.parametrize("d", range(3, 9))
def test_phase_is_monotone(d):
    rep = bd.phase_monotonicity(d)
    assert rep.monotone, rep


def test_curve_qubit_segment():
    c = bd.curve(2, 256)
    a = c.arrays()
    assert a["r_max"][0] == 1.0 and a["Phi"][0] == 0.0
    i = 128
    assert a["phi"][i] == np.pi and abs(a["r_max"][i] - 1) <= 1e-12
    assert abs(a["Phi"][i] - np.pi) <= 1e-12
    assert np.min(a["r_max"]) <= 1e-12
    z = c.complex_points()
    assert np.max(np.abs(z.imag)) <= 1e-12
    assert np.max(np.abs(z.real)) <= 1 + 1e-12


def test_curve_qutrit_minima():
    c = bd.curve(3, 999)
    a = c.arrays()
    assert len(c) == 999
    assert set(c.branches) == {0, 1, 2}
    for n in range(3):
        on = a["branch"] == n
        lo, hi = 2 * n * np.pi / 3, 2 * (n + 1) * np.pi / 3
        assert np.all((a["phi"][on] >= lo) & (a["phi"][on] < hi))
        k = np.argmin(np.where(on, a["r_max"], np.inf))
        # pi/3 + 2 n pi/3 falls between grid points; r_max is flat there
        assert abs(a["phi"][k] - (2 * n + 1) * np.pi / 3) <= 2 * np.pi / 999
        assert abs(a["r_max"][k] - 1 / 3) <= 1e-4
    assert abs(a["r_max"][333] - 1) <= 1e-12 and abs(a["r_max"][666] - 1) <= 1e-12


def test_curve_unit_circle():
    c = bd.curve(2, 64, concurrence=0.0)
    z = c.complex_points()
    assert np.max(np.abs(np.abs(z) - 1)) <= 1e-12


def test_curve_rejects_too_few_points():
    with pytest.raises(ContractViolation):
        bd.curve(4, 31)


@settings(max_examples=300)
@given(phi=angles, d=st.sampled_from([2, 3, 4, 5]))
def test_branch_symmetry(phi, d):
    r0, p0, _, _ = bd.boundary_arrays(d, phi)
    r1, p1, _, _ = bd.boundary_arrays(d, phi + 2 * np.pi / d)
    assert abs(r1 - r0) <= 1e-12
    if r0 > 1e-6:  # the d = 2 phase jumps where the radius vanishes
        assert abs(p1 - p0 - 2 * np.pi / d) <= 1e-9


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_stationarity_and_lambda(d, rng):
    phi = rng.uniform(0, 2 * np.pi, 1000)
    r1, r2 = bd.stationarity_residuals(d, phi)
    assert np.max(np.abs(r1)) <= 1e-9 and np.max(np.abs(r2)) <= 1e-9
    _, _, _, lam = bd.boundary_arrays(d, phi)
    assert np.max(np.abs(lam - np.cos(d * phi / 2) / d)) <= 1e-12


@given(
    c1=st.floats(0.0, 1.0),
    c2=st.floats(0.0, 1.0),
    phi=angles,
)
def test_concurrence_nesting(c1, c2, phi):
    lo, hi = sorted((c1, c2))
    assert bd.qubit_boundary_point(hi, phi)[0] <= bd.qubit_boundary_point(lo, phi)[0] + 1e-15


@given(phi=angles)
def test_qubit_dimension_consistency(phi):
    assert abs(bd.boundary_point(2, phi).r_max - bd.qubit_boundary_point(1.0, phi)[0]) <= 1e-12


def test_excess_values():
    assert abs(bd.excess(3, 0.9 * np.exp(1j * np.pi / 3)) - (0.9 - 1 / 3)) <= 1e-12
    assert bd.excess(3, 0.2) == 0.0
    assert abs(bd.excess(2, 0.5 + 0.1j) - 0.1) <= 1e-15
