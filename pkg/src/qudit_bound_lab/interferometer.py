"""Density-matrix model of the ancilla interferometer that reads out an overlap.

The register is ``ancilla (x) qudit A (x) qudit B`` with total dimension
``D = 2 d^2``. The ancilla is put into superposition by a Hadamard gate,
the system evolves under ``U`` only on the ancilla ``|1>`` branch, and
``<sigma_x> + i <sigma_y>`` of the ancilla then equals ``eps <psi|U|psi>``
for a pseudo-pure input of polarisation ``eps``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation
from .linalg import adjoint, is_unitary
from .state import TwoQuditState

__all__ = [
    "DensityState",
    "ReadoutResult",
    "apply_dephasing",
    "build_pps",
    "controlled",
    "local_unitary",
    "readout",
    "run_interferometry",
]

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
# sigma_x + i sigma_y = 2 |0><1|
_RAISE = np.array([[0, 2], [0, 0]], dtype=complex)


@dataclass(frozen=True, eq=False)
class DensityState:
    rho: np.ndarray

    def __post_init__(self):
        rho = np.array(self.rho, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1] or rho.shape[0] % 2:
            raise ContractViolation("density matrix must be square with an ancilla factor of 2")
        object.__setattr__(self, "rho", rho)

    @property
    def dim(self) -> int:
        return self.rho.shape[0]

    def check(self, atol: float = 1e-10) -> None:
        """Raise unless the state has unit trace, is Hermitian and positive."""
        if abs(np.trace(self.rho) - 1) > atol:
            raise ContractViolation("density matrix trace differs from 1")
        if np.max(np.abs(self.rho - adjoint(self.rho))) > atol:
            raise ContractViolation("density matrix is not Hermitian")
        if np.linalg.eigvalsh(self.rho).min() < -1e-9:
            raise ContractViolation("density matrix has a negative eigenvalue")

    def purity(self) -> float:
        return float(np.real(np.vdot(self.rho, self.rho)))


@dataclass(frozen=True)
class ReadoutResult:
    signal: complex
    epsilon: float

    @property
    def normalized(self) -> complex:
        return self.signal / self.epsilon


def _check_epsilon(epsilon: float) -> float:
    epsilon = float(epsilon)
    if not 0.0 < epsilon <= 1.0:
        raise ContractViolation(f"polarisation must lie in (0, 1], got {epsilon}")
    return epsilon


def build_pps(system: TwoQuditState, epsilon: float) -> DensityState:
    """``(1 - eps) I / D + eps |0><0| (x) |psi><psi|`` with the ancilla in ``|0>``."""
    epsilon = _check_epsilon(epsilon)
    psi = system.vector()
    pure = np.kron(np.diag([1.0, 0.0]), np.outer(psi, psi.conj()))
    dim = pure.shape[0]
    return DensityState((1 - epsilon) * np.eye(dim) / dim + epsilon * pure)


def local_unitary(u_a: np.ndarray, u_b: np.ndarray) -> np.ndarray:
    """``U_A (x) U_B`` on the product basis ``|ij>`` used by :class:`TwoQuditState`."""
    return np.kron(u_a, u_b)


def controlled(u: np.ndarray) -> np.ndarray:
    n = u.shape[0]
    out = np.eye(2 * n, dtype=complex)
    out[n:, n:] = u
    return out


def apply_dephasing(state: DensityState, gamma: float) -> DensityState:
    """Shrink the ancilla coherences (off-diagonal ancilla blocks) by ``1 - gamma``."""
    gamma = float(gamma)
    if not 0.0 <= gamma <= 1.0:
        raise ContractViolation(f"dephasing strength must lie in [0, 1], got {gamma}")
    rho = state.rho.copy()
    n = state.dim // 2
    rho[:n, n:] *= 1 - gamma
    rho[n:, :n] *= 1 - gamma
    return DensityState(rho)


def readout(state: DensityState) -> complex:
    """``Tr[rho (sigma_x + i sigma_y) (x) I]``, i.e. twice the trace of the lower-left ancilla block."""
    n = state.dim // 2
    return complex(np.trace(np.kron(_RAISE, np.eye(n)) @ state.rho))


def run_interferometry(
    system: TwoQuditState,
    u: np.ndarray,
    epsilon: float = 1.0,
    gamma: float = 0.0,
) -> ReadoutResult:
    """Simulate the circuit H(ancilla), controlled-U, optional dephasing, Pauli readout.

    Parameters
    ----------
    system : TwoQuditState
        The probed state ``|psi>``.
    u : ndarray, shape (d*d, d*d)
        Unitary acting on both qudits, e.g. :func:`local_unitary` output.
    epsilon : float
        Polarisation of the pseudo-pure state, in (0, 1].
    gamma : float
        Ancilla dephasing applied just before readout.
    """
    u = np.asarray(u, dtype=complex)
    n = system.d**2
    if u.shape != (n, n):
        raise ContractViolation(f"unitary must be {n}x{n} for d={system.d}")
    if not is_unitary(u):
        raise ContractViolation("controlled operation must be unitary")
    rho = build_pps(system, epsilon).rho
    gate = controlled(u) @ np.kron(HADAMARD, np.eye(n))
    out = DensityState(gate @ rho @ adjoint(gate))
    if gamma:
        out = apply_dephasing(out, gamma)
    return ReadoutResult(signal=readout(out), epsilon=float(epsilon))
