"""Brute-force check of the analytic boundary.

Eigenphases ``phi_1 .. phi_{d-1}`` are enumerated on a uniform grid, the
last one is fixed by ``sum phi_j = 0``, and the largest ``|O|`` found in
each overlap-phase bin is kept. Taking the phase of ``O`` as the bin
coordinate makes the imaginary-part constraint hold automatically, so the
search needs no Lagrange multipliers at all.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import boundary
from .errors import ContractViolation, DimensionOutOfRange
from .linalg import EigenphaseConfig, canonical_angle
from .sweep import bin_edges, bin_index

__all__ = [
    "BoundaryComparison",
    "EmpiricalBoundary",
    "compare_boundaries",
    "grid_max_overlap",
    "verify_stationarity",
]

MAX_BLOCK = 1 << 20
MAX_STEPS_D4 = 256


@dataclass(frozen=True, eq=False)
class EmpiricalBoundary:
    d: int
    n_bins: int
    steps_per_axis: int
    n_random: int
    centers: np.ndarray
    max_R: np.ndarray  # NaN for bins no configuration reached
    overlaps: np.ndarray  # the maximising overlap per bin
    phases: np.ndarray  # (n_bins, d) maximising eigenphases, NaN rows for empty bins

    @property
    def bins(self) -> list[tuple[float, float, Optional[EigenphaseConfig]]]:
        out = []
        for c, r, ph in zip(self.centers, self.max_R, self.phases):
            cfg = None if np.isnan(r) else EigenphaseConfig(self.d, tuple(float(x) for x in ph))
            out.append((float(c), float(r), cfg))
        return out

    @property
    def filled(self) -> np.ndarray:
        return ~np.isnan(self.max_R)


class _BinMax:
    """Running per-bin maximum of ``|O|`` with the configuration attaining it."""

    def __init__(self, d: int, n_bins: int):
        self.n_bins = n_bins
        self.r = np.full(n_bins, -np.inf)
        self.o = np.full(n_bins, np.nan, dtype=complex)
        self.phases = np.full((n_bins, d), np.nan)

    def update(self, free: np.ndarray) -> "_BinMax":
        """Fold in configurations given by their ``d - 1`` free eigenphases."""
        # the closing phase enters O unwrapped; for d = 2 this keeps Im O exactly 0
        full = np.column_stack([free, -free.sum(axis=1)])
        o = np.exp(1j * full).mean(axis=1)
        phases = canonical_angle(full)
        r = np.abs(o)
        b = bin_index(np.angle(o), self.n_bins)
        # stable sort: ties keep the earliest configuration
        order = np.lexsort((-r, b))
        first = order[np.r_[True, b[order][1:] != b[order][:-1]]]
        for i in first:
            k = b[i]
            if r[i] > self.r[k]:
                self.r[k] = r[i]
                self.o[k] = o[i]
                self.phases[k] = phases[i]
        return self

    def merge(self, other: "_BinMax") -> "_BinMax":
        better = other.r > self.r
        self.r = np.where(better, other.r, self.r)
        self.o = np.where(better, other.o, self.o)
        self.phases = np.where(better[:, None], other.phases, self.phases)
        return self


def _grid_block(d: int, steps: int, n_bins: int, axis0: np.ndarray) -> _BinMax:
    grid = 2 * np.pi * np.arange(steps) / steps
    acc = _BinMax(d, n_bins)
    rest = [grid] * (d - 2)
    mesh = np.meshgrid(grid[axis0], *rest, indexing="ij")
    free = np.stack([m.reshape(-1) for m in mesh], axis=1)
    return acc.update(free)


def _random_block(d: int, n_bins: int, seed: int, block: int, size: int) -> _BinMax:
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(block,)))
    free = rng.uniform(0.0, 2 * np.pi, size=(size, d - 1))
    return _BinMax(d, n_bins).update(free)


def grid_max_overlap(
    d: int,
    steps_per_axis: int,
    n_bins: int = 360,
    n_random: int = 0,
    seed: int = 0,
    workers: Optional[int] = None,
) -> EmpiricalBoundary:
    """Per-bin maximum overlap modulus over a grid of eigenphase configurations.

    Parameters
    ----------
    d : int
        2, 3 or 4. Larger dimensions are refused: the grid has
        ``steps_per_axis ** (d - 1)`` points.
    steps_per_axis : int
        Grid points per free eigenphase, at least 64 (at most 256 for d = 4).
    n_bins : int
        Number of equal-width phase bins over (-pi, pi].
    n_random : int
        Extra uniformly random configurations, drawn from substreams of ``seed``.
    workers : int, optional
        Thread cap. The result does not depend on it.
    """
    d = int(d)
    if d not in (2, 3, 4):
        raise DimensionOutOfRange(
            f"exhaustive search is limited to d in {{2, 3, 4}} (got d={d}); "
            "the grid grows as steps**(d-1)"
        )
    if steps_per_axis < 64:
        raise ContractViolation("steps_per_axis must be at least 64")
    if d == 4 and steps_per_axis > MAX_STEPS_D4:
        raise ContractViolation(f"d=4 grids are capped at {MAX_STEPS_D4} steps per axis")
    if n_bins < 2:
        raise ContractViolation("need at least two bins")

    per_slice = steps_per_axis ** (d - 2)
    rows = max(1, MAX_BLOCK // per_slice)
    tasks = []
    for lo in range(0, steps_per_axis, rows):
        axis0 = np.arange(lo, min(lo + rows, steps_per_axis))
        tasks.append(lambda a=axis0: _grid_block(d, steps_per_axis, n_bins, a))
    for k, lo in enumerate(range(0, n_random, MAX_BLOCK)):
        size = min(MAX_BLOCK, n_random - lo)
        tasks.append(lambda k=k, size=size: _random_block(d, n_bins, seed, k, size))

    workers = max(1, int(workers or 1))
    if workers == 1:
        parts = (t() for t in tasks)
    else:
        pool = ThreadPoolExecutor(max_workers=workers)
        parts = pool.map(lambda t: t(), tasks)
    acc = _BinMax(d, n_bins)
    for part in parts:
        acc.merge(part)
    if workers != 1:
        pool.shutdown()

    edges = bin_edges(n_bins)
    max_r = np.where(np.isfinite(acc.r), acc.r, np.nan)
    return EmpiricalBoundary(
        d=d,
        n_bins=n_bins,
        steps_per_axis=steps_per_axis,
        n_random=n_random,
        centers=0.5 * (edges[:-1] + edges[1:]),
        max_R=max_r,
        overlaps=acc.o,
        phases=acc.phases,
    )


def verify_stationarity(d: int, phi: float, tol: float = 1e-9) -> bool:
    """True when both extremal eigenphases satisfy the Lagrange condition at ``phi``."""
    r1, r2 = boundary.stationarity_residuals(d, phi)
    return bool(np.all(np.abs(r1) <= tol) and np.all(np.abs(r2) <= tol))


@dataclass(frozen=True, eq=False)
class BoundaryComparison:
    d: int
    centers: np.ndarray
    gaps: np.ndarray  # NaN where no configuration reached the bin
    envelope_gaps: np.ndarray
    soundness_excess: np.ndarray
    max_gap: float
    max_envelope_gap: float
    max_soundness_excess: float

    def sound(self, tol: float = 1e-9) -> bool:
        return self.max_soundness_excess <= tol and bool(np.all(self.gaps[~np.isnan(self.gaps)] >= -tol))

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "max_gap": self.max_gap,
            "max_envelope_gap": self.max_envelope_gap,
            "max_soundness_excess": self.max_soundness_excess,
            "bins_evaluated": int(np.sum(~np.isnan(self.gaps))),
            "bins_total": int(self.gaps.size),
        }


def _analytic_sup(d: int, n_bins: int, analytic: boundary.BoundaryCurve) -> np.ndarray:
    edges = bin_edges(n_bins)
    sup = np.maximum(boundary.max_radius(d, edges[:-1]), boundary.max_radius(d, edges[1:]))
    a = analytic.arrays()
    b = bin_index(a["Phi"], n_bins)
    np.maximum.at(sup, b, a["r_max"])
    return sup


def compare_boundaries(
    empirical: EmpiricalBoundary,
    analytic: Optional[boundary.BoundaryCurve] = None,
) -> BoundaryComparison:
    """Certify the analytic curve against a brute-force envelope.

    Per filled bin, with ``O_b`` the best configuration found there:

    * ``gaps``: ``R_max(arg O_b) - |O_b|``, the radial distance of ``O_b``
      below the analytic curve at its own phase. It is never below zero if
      the curve is an upper bound and shrinks as the grid is refined.
    * ``soundness_excess``: how far ``O_b`` lies outside the analytic region.
    * ``envelope_gaps``: supremum of the analytic radius over the closed
      bin minus ``|O_b|``. Stricter, since it also charges the bin width
      wherever ``R_max`` varies quickly with the phase.

    Empty bins are NaN and excluded from the maxima.
    """
    d = empirical.d
    n_bins = empirical.n_bins
    if analytic is None:
        analytic = boundary.curve(d, max(10 * n_bins, 64 * d))
    if analytic.d != d or analytic.concurrence is not None:
        raise ContractViolation("analytic curve does not match the empirical boundary")
    if len(analytic) < 10 * n_bins:
        raise ContractViolation("analytic curve must be sampled at >= 10x the bin count")

    filled = empirical.filled
    o = empirical.overlaps[filled]
    gaps = np.full(n_bins, np.nan)
    sound = np.full(n_bins, np.nan)
    env = np.full(n_bins, np.nan)
    if d == 2:
        # the region is the segment [-1, 1]; every filled bin holds a real overlap
        gaps[filled] = 1.0 - np.abs(o.real)
    else:
        gaps[filled] = boundary.max_radius(d, np.angle(o)) - np.abs(o)
    sound[filled] = boundary.excess(d, o)
    env[filled] = _analytic_sup(d, n_bins, analytic)[filled] - np.abs(o)
    return BoundaryComparison(
        d=d,
        centers=empirical.centers,
        gaps=gaps,
        envelope_gaps=env,
        soundness_excess=sound,
        max_gap=float(np.nanmax(gaps)) if filled.any() else float("nan"),
        max_envelope_gap=float(np.nanmax(env)) if filled.any() else float("nan"),
        max_soundness_excess=float(np.nanmax(sound)) if filled.any() else 0.0,
    )
