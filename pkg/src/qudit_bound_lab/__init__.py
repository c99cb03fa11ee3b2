"""Intrinsic overlap bounds of two-qudit states under random local SU(d) evolution."""

__version__ = "0.1.0"

from .errors import (
    ContractViolation,
    DimensionOutOfRange,
    SingularCoefficientMatrix,
    UnsupportedDimension,
    UnsupportedStrategy,
)
from .linalg import EigenphaseConfig, eigenphases, haar_su, haar_unitary, polar_decompose, project_su
from .state import (
    SchmidtSpec,
    SectorDecomposition,
    TwoQuditState,
    concurrence,
    decompose_sectors,
    evolve_local,
    from_schmidt,
    overlap,
)
from .boundary import (
    BoundaryCurve,
    BoundaryPoint,
    boundary_point,
    contains,
    curve,
    max_radius,
    qubit_boundary_point,
    topological_phases,
)

__all__ = [
    "__version__",
    "ContractViolation",
    "DimensionOutOfRange",
    "SingularCoefficientMatrix",
    "UnsupportedDimension",
    "UnsupportedStrategy",
    "EigenphaseConfig",
    "eigenphases",
    "haar_su",
    "haar_unitary",
    "polar_decompose",
    "project_su",
    "SchmidtSpec",
    "SectorDecomposition",
    "TwoQuditState",
    "concurrence",
    "decompose_sectors",
    "evolve_local",
    "from_schmidt",
    "overlap",
    "BoundaryCurve",
    "BoundaryPoint",
    "boundary_point",
    "contains",
    "curve",
    "max_radius",
    "qubit_boundary_point",
    "topological_phases",
]
