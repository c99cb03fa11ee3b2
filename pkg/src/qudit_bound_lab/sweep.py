"""Monte Carlo sweeps of random local evolutions.

Sample ``k`` of a sweep draws from its own generator, keyed by
``(seed, k)`` through :class:`numpy.random.SeedSequence`. The output is
therefore identical whatever the chunking or the number of worker threads.
"""

from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from . import boundary
from .errors import ContractViolation, UnsupportedStrategy
from .linalg import canonical_angle, haar_su
from .state import SchmidtSpec, TwoQuditState, concurrence, evolve_local, from_schmidt, overlap

__all__ = [
    "CHUNK_SIZE",
    "ConfinementReport",
    "OverlapSample",
    "Strategy",
    "SweepConfig",
    "bin_edges",
    "bin_index",
    "check_confinement",
    "confinement_for",
    "max_radius_per_bin",
    "phase_histogram",
    "run_sweep",
    "rx",
    "rxrz_unitary",
    "rz",
    "sample_generator",
    "sample_unitaries",
]

CHUNK_SIZE = 512
DEFAULT_BINS = 36


class Strategy(str, enum.Enum):
    HAAR_TWO_SIDED = "haar-two-sided"
    HAAR_ONE_SIDED = "haar-one-sided"
    RXRZ = "rxrz"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class SweepConfig:
    d: int
    schmidt: SchmidtSpec
    strategy: Strategy = Strategy.HAAR_TWO_SIDED
    n_samples: int = 1000
    seed: int = 0
    tol: float = boundary.DEFAULT_TOL

    def __post_init__(self):
        object.__setattr__(self, "strategy", Strategy(self.strategy))
        if self.n_samples < 1:
            raise ContractViolation("n_samples must be positive")
        if self.schmidt.d != self.d:
            raise ContractViolation("Schmidt spec and sweep disagree on d")
        if self.strategy is Strategy.RXRZ and self.d != 2:
            raise UnsupportedStrategy("the rxrz family acts on qubits only (d = 2)")
        if not 0 <= self.seed < 2**64:
            raise ContractViolation("seed must be a non-negative 64-bit integer")

    @property
    def initial_state(self) -> TwoQuditState:
        return from_schmidt(self.schmidt)


@dataclass(frozen=True)
class OverlapSample:
    O: complex
    index: int
    strategy: Strategy
    seed: int
    R: float = field(init=False)
    Phi: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "O", complex(self.O))
        object.__setattr__(self, "R", abs(self.O))
        object.__setattr__(self, "Phi", canonical_angle(np.angle(self.O)))


@dataclass(frozen=True)
class ConfinementReport:
    total: int
    violations: tuple[tuple[int, complex, float], ...]
    max_excess: float
    # largest excess over all samples, including ones within tolerance
    worst_excess: float = 0.0
    reference: str = ""

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "reference": self.reference,
            "n_violations": len(self.violations),
            "max_excess": self.max_excess,
            "worst_excess": self.worst_excess,
            "violations": [
                {"index": i, "re": o.real, "im": o.imag, "excess": e} for i, o, e in self.violations
            ],
        }


def rx(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]])


def rz(beta: float) -> np.ndarray:
    return np.diag([np.exp(-0.5j * beta), np.exp(0.5j * beta)])


def rxrz_unitary(theta: float, beta: float) -> np.ndarray:
    return rx(theta) @ rz(beta)


def sample_generator(seed: int, k: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(k,)))


def sample_unitaries(config: SweepConfig, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Local unitaries ``(U_A, U_B)`` of sample ``k``; a pure function of ``(seed, k)``."""
    if not 0 <= k < config.n_samples:
        raise ContractViolation(f"sample index {k} outside [0, {config.n_samples})")
    rng = sample_generator(config.seed, k)
    d = config.d
    if config.strategy is Strategy.HAAR_TWO_SIDED:
        return haar_su(d, rng), haar_su(d, rng)
    if config.strategy is Strategy.HAAR_ONE_SIDED:
        return haar_su(d, rng), np.eye(d, dtype=complex)
    theta, beta = rng.uniform(0.0, 4 * np.pi, size=2)
    return rxrz_unitary(theta, beta), np.eye(2, dtype=complex)


def _run_chunk(config: SweepConfig, psi0: TwoQuditState, indices: range) -> list[OverlapSample]:
    out = []
    for k in indices:
        u_a, u_b = sample_unitaries(config, k)
        o = overlap(psi0, evolve_local(psi0, u_a, u_b))
        out.append(OverlapSample(o, k, config.strategy, config.seed))
    return out


def run_sweep(config: SweepConfig, workers: Optional[int] = None) -> list[OverlapSample]:
    """Overlaps ``<psi(0)| U_A (x) U_B |psi(0)>`` for every sample of the sweep.

    ``workers`` caps the thread count; results come back in index order
    and do not depend on it.
    """
    psi0 = config.initial_state
    chunks = [
        range(lo, min(lo + CHUNK_SIZE, config.n_samples))
        for lo in range(0, config.n_samples, CHUNK_SIZE)
    ]
    workers = max(1, int(workers or 1))
    if workers == 1 or len(chunks) == 1:
        parts = [_run_chunk(config, psi0, c) for c in chunks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda c: _run_chunk(config, psi0, c), chunks))
    return [s for part in parts for s in part]


def _overlaps(samples: Iterable) -> np.ndarray:
    return np.array([s.O if isinstance(s, OverlapSample) else s for s in samples], dtype=complex)


def check_confinement(
    samples: Sequence,
    d: int,
    concurrence: Optional[float] = None,
    tol: float = boundary.DEFAULT_TOL,
    disk_only: bool = False,
) -> ConfinementReport:
    """Compare overlaps against the analytic boundary.

    ``samples`` may hold :class:`OverlapSample` objects or bare complex
    numbers (indexed by position). ``disk_only`` checks against the unit
    disk, the only bound available for partially entangled qudits with d > 2.
    """
    if len(samples) == 0:
        raise ContractViolation("no samples to check")
    o = _overlaps(samples)
    idx = [s.index if isinstance(s, OverlapSample) else i for i, s in enumerate(samples)]
    if disk_only:
        exc = np.clip(np.abs(o) - 1.0, 0.0, None)
        ref = "unit-disk"
    else:
        exc = np.atleast_1d(boundary.excess(d, o, concurrence))
        ref = f"qubit C={concurrence:g}" if concurrence is not None else f"max-entangled d={d}"
    bad = np.flatnonzero(exc > tol)
    violations = tuple((int(idx[i]), complex(o[i]), float(exc[i])) for i in bad)
    return ConfinementReport(
        total=len(o),
        violations=violations,
        max_excess=float(exc[bad].max()) if len(bad) else 0.0,
        worst_excess=float(exc.max()),
        reference=ref,
    )


def confinement_for(config: SweepConfig, samples: Sequence) -> ConfinementReport:
    """Check a sweep against the tightest boundary known for its initial state."""
    if config.schmidt.is_maximally_entangled:
        return check_confinement(samples, config.d, tol=config.tol)
    if config.d == 2:
        c = concurrence(config.initial_state)
        return check_confinement(samples, 2, concurrence=c, tol=config.tol)
    return check_confinement(samples, config.d, tol=config.tol, disk_only=True)


def _phases(samples: Iterable) -> np.ndarray:
    return np.array(
        [s.Phi if isinstance(s, OverlapSample) else canonical_angle(np.angle(s)) for s in samples],
        dtype=float,
    )


def bin_edges(n_bins: int) -> np.ndarray:
    return -np.pi + 2 * np.pi * np.arange(n_bins + 1) / n_bins


def bin_index(phases, n_bins: int) -> np.ndarray:
    """Bin of each phase in (-pi, pi]; bins are [lo, hi) except the last, which includes pi."""
    phases = canonical_angle(np.atleast_1d(np.asarray(phases, dtype=float)))
    width = 2 * np.pi / n_bins
    return np.clip(np.floor((phases + np.pi) / width).astype(int), 0, n_bins - 1)


def phase_histogram(samples: Sequence, n_bins: int = DEFAULT_BINS) -> list[tuple[float, int]]:
    if n_bins < 2:
        raise ContractViolation("need at least two bins")
    counts = np.bincount(bin_index(_phases(samples), n_bins), minlength=n_bins)
    edges = bin_edges(n_bins)
    centers = 0.5 * (edges[:-1] + edges[1:])
    return [(float(c), int(n)) for c, n in zip(centers, counts)]


def max_radius_per_bin(samples: Sequence, n_bins: int = DEFAULT_BINS) -> list[tuple[float, float, int]]:
    """Empirical ``(bin_center, max |O|, count)`` per phase bin; NaN for empty bins."""
    o = _overlaps(samples)
    b = bin_index(_phases(samples), n_bins)
    best = np.full(n_bins, np.nan)
    for i in range(n_bins):
        sel = np.abs(o[b == i])
        if sel.size:
            best[i] = sel.max()
    counts = np.bincount(b, minlength=n_bins)
    edges = bin_edges(n_bins)
    centers = 0.5 * (edges[:-1] + edges[1:])
    return [(float(c), float(m), int(n)) for c, m, n in zip(centers, best, counts)]
