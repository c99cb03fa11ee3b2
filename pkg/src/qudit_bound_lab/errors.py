"""Exception types raised across the package."""


class ContractViolation(ValueError):
    """An input does not satisfy the precondition of an operation."""


class SingularCoefficientMatrix(ContractViolation):
    """The coefficient matrix has Schmidt rank below d; the sector split is not unique."""


class UnsupportedDimension(ContractViolation):
    pass


class UnsupportedStrategy(ContractViolation):
    pass


class DimensionOutOfRange(ContractViolation):
    pass
