"""Exception hierarchy shared by all modules.

Validation problems derive from ``ValueError`` and numerical failures from
``ArithmeticError`` so that the command line can map them to exit codes.
"""


class ValidationError(ValueError):
    """Input rejected before any computation."""


class NumericalError(ArithmeticError):
    """A numerical routine did not converge or hit a singular case."""


class NonUnitDeterminant(ValidationError):
    pass


class NotHyperbolic(ValidationError):
    pass


class PointOnBoundary(ValidationError):
    pass


class DegenerateInput(ValidationError):
    pass


class ImaginaryLPrime(ValidationError):
    pass


class UnsupportedCase(ValidationError):
    pass


class WrongAngle(ValidationError):
    pass


class InvalidTiling(ValidationError):
    pass


class BadParity(ValidationError):
    pass


class AngleConditionViolated(ValidationError):
    pass


class DegenerateParameter(ValidationError):
    pass


class DomainError(ValidationError):
    pass


class BranchUnsupported(ValidationError):
    pass


class NotBalanced(ValidationError):
    pass


class MissingMarkers(ValidationError):
    pass


class NotApplicable(ValidationError):
    pass


class NoIntersection(NumericalError):
    pass


class ConvergenceFailure(NumericalError):
    pass


class MeshFailure(NumericalError):
    pass


class NotConverged(NumericalError):
    pass


class NoSolution(NumericalError):
    pass
