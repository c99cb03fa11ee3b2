"""Two-qudit pure states stored as d x d coefficient matrices.

A state ``sum_ij M_ij |ij>`` is kept as the matrix ``M``. Local unitaries
act as ``M -> U_A M U_B^T``, and the coefficient matrix factorises as
``M = exp(i theta) Q S`` into a global phase, a Hermitian positive factor
and a special unitary factor, each of which evolves on its own.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ContractViolation, UnsupportedDimension
from .linalg import canonical_angle, is_unitary, polar_decompose

__all__ = [
    "SchmidtSpec",
    "SectorDecomposition",
    "TwoQuditState",
    "concurrence",
    "decompose_sectors",
    "evolve_local",
    "from_schmidt",
    "maximally_entangled",
    "overlap",
    "random_state",
    "schmidt_for_concurrence",
    "schmidt_weights",
]

NORM_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class TwoQuditState:
    """Normalised pure state of two d-level systems."""

    M: np.ndarray

    def __post_init__(self):
        m = np.array(self.M, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ContractViolation("coefficient matrix must be square")
        norm = np.vdot(m, m).real
        if abs(norm - 1.0) > NORM_TOL:
            raise ContractViolation(f"state is not normalised: Tr(M^dagger M) = {norm!r}")
        m.setflags(write=False)
        object.__setattr__(self, "M", m)

    @property
    def d(self) -> int:
        return self.M.shape[0]

    def vector(self) -> np.ndarray:
        """Amplitudes in the product basis ``|ij>``, index ``i * d + j``."""
        return self.M.reshape(-1).copy()

    @classmethod
    def from_vector(cls, psi, d: int) -> "TwoQuditState":
        return cls(np.asarray(psi, dtype=complex).reshape(d, d))


@dataclass(frozen=True)
class SchmidtSpec:
    """Schmidt weights of a state, non-negative and in descending order."""

    d: int
    weights: tuple[float, ...]

    def __post_init__(self):
        w = tuple(float(x) for x in self.weights)
        if len(w) != self.d:
            raise ContractViolation("need one Schmidt weight per level")
        if any(x < 0 for x in w):
            raise ContractViolation("Schmidt weights must be non-negative")
        if any(a < b for a, b in zip(w, w[1:])):
            raise ContractViolation("Schmidt weights must be in descending order")
        if abs(sum(x * x for x in w) - 1.0) > NORM_TOL:
            raise ContractViolation("squared Schmidt weights must sum to 1")
        object.__setattr__(self, "weights", w)

    @property
    def is_maximally_entangled(self) -> bool:
        return bool(np.allclose(self.weights, 1 / np.sqrt(self.d), rtol=0, atol=1e-12))


@dataclass(frozen=True, eq=False)
class SectorDecomposition:
    theta: float
    Q: np.ndarray
    S: np.ndarray = field(repr=False)

    def reconstruct(self) -> np.ndarray:
        return np.exp(1j * self.theta) * self.Q @ self.S


def from_schmidt(spec: SchmidtSpec) -> TwoQuditState:
    return TwoQuditState(np.diag(np.asarray(spec.weights, dtype=complex)))


def maximally_entangled(d: int) -> TwoQuditState:
    return from_schmidt(SchmidtSpec(d, (1 / np.sqrt(d),) * d))


def schmidt_for_concurrence(c: float) -> SchmidtSpec:
    """Two-qubit Schmidt weights ``(cos a, sin a)`` with ``sin 2a = c``."""
    if not 0.0 <= c <= 1.0:
        raise ContractViolation("concurrence must lie in [0, 1]")
    a = 0.5 * np.arcsin(c)
    return SchmidtSpec(2, (np.cos(a), np.sin(a)))


def decompose_sectors(state: TwoQuditState) -> SectorDecomposition:
    """Split ``M`` into ``exp(i theta) Q S``.

    ``theta`` is taken on the principal branch (-pi/d, pi/d], which fixes
    the Z_d ambiguity shared between the U(1) and SU(d) factors.

    Raises
    ------
    SingularCoefficientMatrix
        When the Schmidt rank is below d.
    """
    q, u = polar_decompose(state.M)
    d = state.d
    alpha = canonical_angle(np.angle(np.linalg.det(u)))
    theta = alpha / d
    return SectorDecomposition(theta=float(theta), Q=q, S=np.exp(-1j * theta) * u)


def evolve_local(state: TwoQuditState, u_a: np.ndarray, u_b: np.ndarray) -> TwoQuditState:
    """Apply ``U_A (x) U_B``: the coefficient matrix becomes ``U_A M U_B^T``."""
    u_a = np.asarray(u_a, dtype=complex)
    u_b = np.asarray(u_b, dtype=complex)
    d = state.d
    if u_a.shape != (d, d) or u_b.shape != (d, d):
        raise ContractViolation(f"local unitaries must be {d}x{d}")
    if not (is_unitary(u_a) and is_unitary(u_b)):
        raise ContractViolation("local operations must be unitary")
    return TwoQuditState(u_a @ state.M @ u_b.T)


def overlap(initial: TwoQuditState, evolved: TwoQuditState) -> complex:
    """``<psi(0)|psi(t)> = Tr[M(0)^dagger M(t)]``."""
    if initial.d != evolved.d:
        raise ContractViolation("states have different dimensions")
    return complex(np.vdot(initial.M, evolved.M))


def concurrence(state: TwoQuditState) -> float:
    if state.d != 2:
        raise UnsupportedDimension("concurrence is defined here for qubit pairs only")
    return float(min(1.0, 2 * abs(np.linalg.det(state.M))))


def random_state(d: int, rng: np.random.Generator) -> TwoQuditState:
    """Uniformly random pure state (normalised complex Gaussian vector)."""
    v = rng.standard_normal(d * d) + 1j * rng.standard_normal(d * d)
    return TwoQuditState.from_vector(v / np.linalg.norm(v), d)


def schmidt_weights(state: TwoQuditState) -> np.ndarray:
    return np.linalg.svd(state.M, compute_uv=False)
