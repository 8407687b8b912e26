"""Exception hierarchy shared by the numerical core."""


class QkinemaError(Exception):
    """Root of every error raised by qkinema."""


class ValidationError(QkinemaError, ValueError):
    """An input violates a type invariant or an operation precondition."""


class DimensionMismatchError(ValidationError):
    """Operands live on Hilbert spaces of different dimension."""


class UnknownLabelError(ValidationError):
    """An event refers to an outcome label the POVM does not have."""


class NonProjectiveMeasurementError(ValidationError):
    """The projection postulate was requested for a non-projective POVM."""


class ZeroProbabilityBranchError(ValidationError):
    """Tr(ρF_k) is at or below the probability floor, so ϱ_k is undefined."""


class IndistinguishableEnsemblesError(ValidationError):
    """A functional gives the same value on ensembles it is meant to separate."""


class EigensolverError(QkinemaError):
    """The Hermitian eigensolver did not converge."""


class ConsistencyError(QkinemaError):
    """An identity that must hold numerically did not."""


class StateMapViolationError(ConsistencyError):
    """A StateMap produced something that is not a density operator."""
