"""Dense complex linear algebra for small qudit dimensions (2 <= d <= 8).

Everything here works on plain ``numpy`` arrays of dtype ``complex128``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation, DimensionOutOfRange, SingularCoefficientMatrix

MAX_DIM = 8

__all__ = [
    "MAX_DIM",
    "EigenphaseConfig",
    "adjoint",
    "canonical_angle",
    "eigenphases",
    "haar_su",
    "haar_unitary",
    "is_unitary",
    "polar_decompose",
    "project_su",
]


def adjoint(a: np.ndarray) -> np.ndarray:
    return np.conj(a).swapaxes(-1, -2)


def canonical_angle(x):
    """Map angles to the half-open interval (-pi, pi]."""
    y = np.mod(np.asarray(x, dtype=float) + np.pi, 2 * np.pi) - np.pi
    y = np.where(y <= -np.pi, y + 2 * np.pi, y)
    return y if y.ndim else float(y)


def _check_dim(d: int) -> int:
    d = int(d)
    if d < 2 or d > MAX_DIM:
        raise DimensionOutOfRange(f"dimension must lie in [2, {MAX_DIM}], got {d}")
    return d


def is_unitary(u: np.ndarray, atol: float = 1e-9) -> bool:
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return bool(np.max(np.abs(adjoint(u) @ u - np.eye(u.shape[0]))) <= atol)


def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Draw a Haar-distributed unitary from U(d).

    QR-decomposes a complex Ginibre matrix and absorbs the phases of the
    diagonal of R into Q. Without that correction the distribution of Q
    depends on the sign convention of the QR routine and is not Haar.

    Parameters
    ----------
    d : int
        Matrix dimension, ``2 <= d <= 8``.
    rng : numpy.random.Generator
        Source of randomness; consumed for exactly ``2 * d * d`` normals.

    Returns
    -------
    ndarray, shape (d, d)
    """
    d = _check_dim(d)
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    diag = np.diag(r)
    return q * (diag / np.abs(diag))


def project_su(u: np.ndarray) -> np.ndarray:
    """Rescale a unitary by the principal d-th root of its determinant.

    The result has unit determinant. The remaining Z_d center ambiguity is
    left in place on purpose.
    """
    u = np.asarray(u, dtype=complex)
    if not is_unitary(u):
        raise ContractViolation("project_su expects a unitary matrix")
    d = u.shape[0]
    alpha = canonical_angle(np.angle(np.linalg.det(u)))
    return np.exp(-1j * alpha / d) * u


def haar_su(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random element of SU(d)."""
    return project_su(haar_unitary(d, rng))


def polar_decompose(m: np.ndarray, tol: float = 1e-12) -> tuple[np.ndarray, np.ndarray]:
    """Left polar decomposition ``M = Q U``.

    ``Q = (M M^dagger)^{1/2}`` is Hermitian positive definite and ``U`` is
    unitary. Both are assembled from one SVD, ``M = W diag(s) V^dagger``.

    Raises
    ------
    SingularCoefficientMatrix
        If ``|det M| <= tol``.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ContractViolation("polar_decompose expects a square matrix")
    if abs(np.linalg.det(m)) <= tol:
        raise SingularCoefficientMatrix(
            "coefficient matrix is singular; the polar factor U is not unique"
        )
    w, s, vh = np.linalg.svd(m)
    q = (w * s) @ adjoint(w)
    q = 0.5 * (q + adjoint(q))
    return q, w @ vh


@dataclass(frozen=True)
class EigenphaseConfig:
    """Eigenphases of a special unitary, each in (-pi, pi], sorted ascending."""

    d: int
    phases: tuple[float, ...]

    def __post_init__(self):
        if len(self.phases) != self.d:
            raise ContractViolation("expected one phase per dimension")
        if abs(canonical_angle(sum(self.phases))) > 1e-9:
            raise ContractViolation("eigenphases must sum to 0 mod 2pi")

    def as_array(self) -> np.ndarray:
        return np.array(self.phases)

    def eigenvalues(self) -> np.ndarray:
        return np.exp(1j * self.as_array())


def eigenphases(s: np.ndarray) -> EigenphaseConfig:
    """Eigenphases of a special unitary matrix.

    Ties in the ascending sort are resolved by the stable order in which
    the eigensolver returned them.
    """
    s = np.asarray(s, dtype=complex)
    if not is_unitary(s) or abs(np.linalg.det(s) - 1) > 1e-9:
        raise ContractViolation("eigenphases expects an SU(d) matrix")
    phases = canonical_angle(np.angle(np.linalg.eigvals(s)))
    order = np.argsort(phases, kind="stable")
    return EigenphaseConfig(d=s.shape[0], phases=tuple(float(p) for p in phases[order]))
