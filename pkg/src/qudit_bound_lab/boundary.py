"""Closed-form boundary of the overlap region.

For a maximally entangled pair of qudits the overlap ``O = Tr(S)/d`` of an
SU(d) factor ``S`` is confined to a closed curve with d branches, traced by
putting d-1 eigenphases at ``phi`` and the last one at ``(1-d) phi``::

    O(phi) = exp(i phi) (d - 1 + exp(-i d phi)) / d

For two qubits with concurrence C the reachable region is bounded by the
curve ``R = sqrt(1 - C^2 sin^2 phi)``, ``Phi = arctan(sqrt(1 - C^2) tan phi)``,
which is the ellipse ``x^2 + y^2 / (1 - C^2) = 1``.
"""

from __future__ import annotations

import functools
import logging
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ContractViolation

__all__ = [
    "BoundaryCurve",
    "BoundaryPoint",
    "MonotonicityReport",
    "boundary_arrays",
    "boundary_point",
    "contains",
    "curve",
    "excess",
    "max_radius",
    "phase_monotonicity",
    "qubit_arrays",
    "qubit_boundary_point",
    "stationarity_residuals",
    "topological_phases",
]

log = logging.getLogger(__name__)

DEFAULT_TOL = 1e-9
_TWO_PI = 2 * np.pi
# angular slack used to decide that a phase sits exactly on a cusp
_CUSP_ATOL = 1e-12


@dataclass(frozen=True)
class BoundaryPoint:
    phi: float
    r_max: float
    Phi: float
    theta: float
    Lambda: float


@dataclass(frozen=True)
class BoundaryCurve:
    d: int
    concurrence: Optional[float]
    points: tuple[BoundaryPoint, ...]
    branches: tuple[int, ...]

    def arrays(self) -> dict[str, np.ndarray]:
        cols = ("phi", "r_max", "Phi", "theta", "Lambda")
        out = {c: np.array([getattr(p, c) for p in self.points]) for c in cols}
        out["branch"] = np.array(self.branches, dtype=int)
        return out

    def complex_points(self) -> np.ndarray:
        a = self.arrays()
        return a["r_max"] * np.exp(1j * a["Phi"])

    def __len__(self) -> int:
        return len(self.points)


def _check_d(d: int) -> int:
    d = int(d)
    if d < 2:
        raise ContractViolation(f"dimension must be at least 2, got {d}")
    return d


def _check_c(c: float) -> float:
    c = float(c)
    if not 0.0 <= c <= 1.0:
        raise ContractViolation(f"concurrence must lie in [0, 1], got {c}")
    return c


def boundary_arrays(d: int, phi) -> tuple[np.ndarray, ...]:
    """Vectorised ``(r_max, Phi, theta, Lambda)`` at parameter values ``phi``.

    ``Phi`` needs no explicit unwrapping: ``Re(d - 1 + exp(-i d phi)) >= d - 2 >= 0``
    keeps the principal ``arg`` inside [-pi/2, pi/2], so ``phi + arg(...)``
    is already the continuous branch with ``Phi(0) = 0``.
    """
    d = _check_d(d)
    phi = np.asarray(phi, dtype=float)
    s = np.sin(0.5 * d * phi)
    r = np.sqrt(np.clip(1.0 - 4.0 * (d - 1) / d**2 * s * s, 0.0, None))
    big_phi = phi + np.angle(d - 1 + np.exp(-1j * d * phi))
    theta = 0.5 * np.pi - big_phi - 0.5 * (d - 2) * phi
    lam = np.cos(0.5 * d * phi) / d
    return r, big_phi, theta, lam


def boundary_point(d: int, phi: float) -> BoundaryPoint:
    r, big_phi, theta, lam = boundary_arrays(d, phi)
    return BoundaryPoint(float(phi), float(r), float(big_phi), float(theta), float(lam))


def stationarity_residuals(d: int, phi) -> tuple[np.ndarray, np.ndarray]:
    """Residuals of ``sin(Phi + theta - phi_k) / d - Lambda`` at the extremal phases.

    Returns the residual for the (d-1)-fold phase ``phi`` and for the
    opposing phase ``(1 - d) phi``.
    """
    _, big_phi, theta, lam = boundary_arrays(d, phi)
    phi = np.asarray(phi, dtype=float)
    res = []
    for phi_k in (phi, (1 - d) * phi):
        res.append(np.sin(big_phi + theta - phi_k) / d - lam)
    return res[0], res[1]


def qubit_arrays(c: float, phi) -> tuple[np.ndarray, np.ndarray]:
    c = _check_c(c)
    phi = np.asarray(phi, dtype=float)
    s = np.sqrt(1.0 - c * c)
    r = np.sqrt(np.clip(1.0 - c * c * np.sin(phi) ** 2, 0.0, None))
    # arctan(s tan phi) in the quadrant of phi, then shifted to stay next to phi
    principal = np.arctan2(s * np.sin(phi), np.cos(phi))
    big_phi = principal + _TWO_PI * np.round((phi - principal) / _TWO_PI)
    return r, big_phi


def qubit_boundary_point(c: float, phi: float) -> tuple[float, float]:
    r, big_phi = qubit_arrays(c, phi)
    return float(r), float(big_phi)


def topological_phases(d: int) -> list[float]:
    d = _check_d(d)
    return [_TWO_PI * n / d for n in range(d)]


@dataclass(frozen=True)
class MonotonicityReport:
    d: int
    samples: int
    monotone: bool
    min_step: float
    worst_phi: float


def phase_monotonicity(d: int, samples: int = 4097) -> MonotonicityReport:
    """Check by dense sampling that ``Phi(phi)`` does not decrease on a branch."""
    d = _check_d(d)
    phi = np.linspace(0.0, _TWO_PI / d, samples)
    _, big_phi, _, _ = boundary_arrays(d, phi)
    steps = np.diff(big_phi)
    i = int(np.argmin(steps))
    return MonotonicityReport(
        d=d,
        samples=samples,
        monotone=bool(steps[i] >= -1e-13),
        min_step=float(steps[i]),
        worst_phi=float(phi[i]),
    )


@functools.lru_cache(maxsize=None)
def _branch_table(d: int) -> tuple[bool, np.ndarray, np.ndarray]:
    report = phase_monotonicity(d)
    phi = np.linspace(0.0, _TWO_PI / d, 1 << 16)
    r, big_phi, _, _ = boundary_arrays(d, phi)
    if not report.monotone:
        warnings.warn(
            f"Phi(phi) is not monotone on a branch for d={d} "
            f"(step {report.min_step:.3e} at phi={report.worst_phi:.6f}); "
            "falling back to dense-grid lookup",
            RuntimeWarning,
            stacklevel=3,
        )
    return report.monotone, big_phi, r


def _radius_multibranch(d: int, big_phi: np.ndarray) -> np.ndarray:
    width = _TWO_PI / d
    red = np.mod(big_phi, width)
    monotone, tab_phase, tab_r = _branch_table(d)
    if monotone:
        lo = np.zeros_like(red)
        hi = np.full_like(red, width)
        for _ in range(64):
            mid = 0.5 * (lo + hi)
            _, f, _, _ = boundary_arrays(d, mid)
            below = f < red
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
        r = boundary_arrays(d, 0.5 * (lo + hi))[0]
    else:
        half = 0.5 * width / len(tab_phase)
        r = np.array(
            [tab_r[np.abs(tab_phase - q) <= max(half, np.min(np.abs(tab_phase - q)))].max() for q in red]
        )
    # a cusp joins two branches; both give r = 1 there
    on_cusp = (red <= _CUSP_ATOL) | (width - red <= _CUSP_ATOL)
    return np.where(on_cusp, 1.0, r)


def _degenerate(d: int, concurrence: Optional[float]) -> bool:
    if concurrence is not None:
        return _check_c(concurrence) == 1.0
    return d == 2


def max_radius(d: int, big_phi, concurrence: Optional[float] = None):
    """Largest reachable ``|O|`` at overlap phase ``big_phi``.

    With ``concurrence`` given the two-qubit curve is used (``d`` must be 2),
    otherwise the maximally entangled d-branch curve. In the degenerate
    cases (d = 2 maximally entangled, or C = 1) the region is the segment
    [-1, 1] and the radius is 1 at phases 0 and pi and 0 elsewhere.
    """
    d = _check_d(d)
    if concurrence is not None and d != 2:
        raise ContractViolation("a concurrence-dependent boundary exists only for d = 2")
    q = np.asarray(big_phi, dtype=float)
    if _degenerate(d, concurrence):
        red = np.mod(q, np.pi)
        out = np.where((red <= _CUSP_ATOL) | (np.pi - red <= _CUSP_ATOL), 1.0, 0.0)
    elif concurrence is not None:
        s = np.sqrt(1.0 - concurrence**2)
        out = s / np.sqrt((s * np.cos(q)) ** 2 + np.sin(q) ** 2)
    else:
        out = _radius_multibranch(d, np.atleast_1d(q)).reshape(q.shape)
    return out if out.ndim else float(out)


def excess(d: int, o, concurrence: Optional[float] = None):
    """How far overlaps ``o`` stick out of the boundary (0 when inside).

    Normally this is the radial excess ``max(0, |O| - R_max(arg O))``. For
    the degenerate segment the radial form is discontinuous in the phase,
    so the Euclidean distance to [-1, 1] is returned instead; for points on
    the real axis the two agree.
    """
    o = np.asarray(o, dtype=complex)
    if _degenerate(_check_d(d), concurrence):
        out = np.hypot(o.imag, np.clip(np.abs(o.real) - 1.0, 0.0, None))
    else:
        out = np.clip(np.abs(o) - max_radius(d, np.angle(o), concurrence), 0.0, None)
    return out if out.ndim else float(out)


def contains(d: int, o: complex, tol: float = DEFAULT_TOL, concurrence: Optional[float] = None) -> bool:
    if abs(o) > 1.0 + tol:
        raise ContractViolation(f"|O| = {abs(o)!r} exceeds 1; not an overlap")
    return bool(excess(d, o, concurrence) <= tol)


def curve(d: int, n: int, concurrence: Optional[float] = None) -> BoundaryCurve:
    """Sample the boundary at ``n`` equally spaced ``phi`` in [0, 2 pi).

    For the two-qubit curve ``theta`` and ``Lambda`` are not defined and are
    stored as NaN.
    """
    d = _check_d(d)
    if n < 8 * d:
        raise ContractViolation(f"need at least {8 * d} samples for d={d}, got {n}")
    phi = _TWO_PI * np.arange(n) / n
    branch = np.minimum((phi * d / _TWO_PI).astype(int), d - 1)
    if concurrence is None:
        r, big_phi, theta, lam = boundary_arrays(d, phi)
    else:
        if d != 2:
            raise ContractViolation("a concurrence-dependent boundary exists only for d = 2")
        r, big_phi = qubit_arrays(concurrence, phi)
        theta = lam = np.full_like(phi, np.nan)
    points = tuple(
        BoundaryPoint(float(a), float(b), float(c), float(e), float(f))
        for a, b, c, e, f in zip(phi, r, big_phi, theta, lam)
    )
    return BoundaryCurve(
        d=d,
        concurrence=None if concurrence is None else float(concurrence),
        points=points,
        branches=tuple(int(b) for b in branch),
    )
