import numpy as np
import pytest

from qudit_bound_lab.errors import ContractViolation
from qudit_bound_lab.interferometer import (
    DensityState,
    apply_dephasing,
    build_pps,
    controlled,
    local_unitary,
    readout,
    run_interferometry,
)
from qudit_bound_lab.linalg import haar_unitary
from qudit_bound_lab.state import (
    evolve_local,
    from_schmidt,
    maximally_entangled,
    overlap,
    random_state,
    schmidt_for_concurrence,
)
from qudit_bound_lab.sweep import rxrz_unitary

BELL = maximally_entangled(2)


def test_pps_pure_at_full_polarisation():
    rho = build_pps(BELL, 1.0)
    rho.check()
    assert abs(rho.purity() - 1) <= 1e-12
    assert rho.dim == 8


@pytest.mark.parametrize("eps", [1e-5, 0.3])
def test_pps_purity(eps):
    rho = build_pps(BELL, eps)
    rho.check()
    dim = rho.dim
    assert abs(rho.purity() - ((1 - eps**2) / dim + eps**2)) <= 1e-12


def test_pps_rejects_bad_polarisation():
    for eps in (0.0, -0.1, 1.5):
        with pytest.raises(ContractViolation):
            build_pps(BELL, eps)


def test_density_state_shape_checks():
    with pytest.raises(ContractViolation):
        DensityState(np.eye(3))
    with pytest.raises(ContractViolation):
        DensityState(np.ones((2, 4)))
    with pytest.raises(ContractViolation):
        DensityState(2 * np.eye(2) / 2 + np.diag([0.5, 0])).check()


def test_identity_reads_one():
    assert abs(run_interferometry(BELL, np.eye(4)).signal - 1) <= 1e-12


def test_bell_with_z_reads_zero():
    u = local_unitary(1j * np.diag([1, -1]), np.eye(2))
    assert abs(run_interferometry(BELL, u).signal) <= 1e-12


@pytest.mark.parametrize("c", [0.0, 0.5, 0.94, 1.0])
def test_matches_direct_overlap_rxrz(c, rng):
    psi = from_schmidt(schmidt_for_concurrence(c))
    for t, b in rng.uniform(0, 4 * np.pi, (20, 2)):
        ua = rxrz_unitary(t, b)
        direct = overlap(psi, evolve_local(psi, ua, np.eye(2)))
        got = run_interferometry(psi, local_unitary(ua, np.eye(2))).signal
        assert abs(got - direct) <= 1e-12


def test_qutrit_cross_check(rng):
    psi = random_state(3, rng)
    for _ in range(10):
        ua, ub = haar_unitary(3, rng), haar_unitary(3, rng)
        direct = overlap(psi, evolve_local(psi, ua, ub))
        got = run_interferometry(psi, local_unitary(ua, ub), epsilon=0.2).normalized
        assert abs(got - direct) <= 1e-12


def test_local_unitary_matches_matrix_form(rng):
    psi = random_state(3, rng)
    ua, ub = haar_unitary(3, rng), haar_unitary(3, rng)
    lhs = local_unitary(ua, ub) @ psi.vector()
    assert np.allclose(lhs, evolve_local(psi, ua, ub).vector(), atol=1e-13)


def test_signal_linear_in_polarisation(rng):
    psi = random_state(2, rng)
    u = local_unitary(haar_unitary(2, rng), haar_unitary(2, rng))
    full = run_interferometry(psi, u).signal
    for eps in (1e-5, 0.01, 0.5):
        assert abs(run_interferometry(psi, u, epsilon=eps).signal - eps * full) <= 1e-12


@pytest.mark.parametrize("gamma,scale", [(0.0, 1.0), (0.1, 0.9), (1.0, 0.0)])
def test_dephasing_scales_signal(gamma, scale, rng):
    psi = random_state(2, rng)
    u = local_unitary(haar_unitary(2, rng), np.eye(2))
    ref = run_interferometry(psi, u).signal
    got = run_interferometry(psi, u, gamma=gamma).signal
    assert abs(got - scale * ref) <= 1e-12


def test_dephasing_keeps_state_physical(rng):
    psi = random_state(2, rng)
    state = build_pps(psi, 0.7)
    gate = controlled(local_unitary(haar_unitary(2, rng), np.eye(2)))
    rho = DensityState(gate @ state.rho @ gate.conj().T)
    for g in (0.0, 0.4, 1.0):
        apply_dephasing(rho, g).check()
    with pytest.raises(ContractViolation):
        apply_dephasing(rho, 1.2)


def test_readout_of_ground_ancilla_is_zero():
    assert readout(build_pps(BELL, 1.0)) == 0


def test_controlled_layout():
    u = np.array([[0, 1], [1, 0]])
    assert np.array_equal(controlled(u), np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]))


def test_run_rejects_bad_unitary():
    with pytest.raises(ContractViolation):
        run_interferometry(BELL, np.eye(9))
    with pytest.raises(ContractViolation):
        run_interferometry(BELL, 2 * np.eye(4))
