"""Exception hierarchy.

Everything a caller can fix by changing the input derives from
``ValidationError`` (CLI exit code 2).  Resource and budget guards derive
from ``LimitExceeded`` (exit code 3).
"""


class InvPermError(Exception):
    """Base class for all library errors."""


class ValidationError(InvPermError, ValueError):
    """Input violates a precondition."""


class LimitExceeded(InvPermError):
    """A size, degree or evaluation-budget guard was hit."""


# core_model
class ParseError(ValidationError):
    pass


class DuplicateLeaf(ValidationError):
    pass


class MissingNode(ValidationError):
    pass


class OutOfRange(ValidationError):
    pass


# counting
class DomainMismatch(ValidationError):
    pass


class Overlap(ValidationError):
    pass


class NotAPartition(ValidationError):
    pass


class InvalidRankSum(ValidationError):
    pass


# minimizer
class BadPermutation(ValidationError):
    pass


# permutahedron
class NotBinary(ValidationError):
    pass


class NotDegree2(ValidationError):
    pass


class LeafCountMismatch(ValidationError):
    pass


class PartitionPropertyViolated(ValidationError):
    pass


# traces
class Cyclic(ValidationError):
    pass


class NotAnExtension(ValidationError):
    pass


class InvalidEncoding(ValidationError):
    pass


# distribution
class QuadratureFailure(LimitExceeded):
    """Tolerance not reached within the evaluation budget."""


# reductions
class InconsistentTable(ValidationError):
    pass


class IsolatedVertex(ValidationError):
    pass


class ParallelArcs(ValidationError):
    pass


class Infeasible(ValidationError):
    pass
