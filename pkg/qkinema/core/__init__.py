"""Numerical core: operators, state spaces, measurements, dynamics and signaling."""

from .errors import (
    ConsistencyError,
    DimensionMismatchError,
    EigensolverError,
    IndistinguishableEnsemblesError,
    NonProjectiveMeasurementError,
    QkinemaError,
    StateMapViolationError,
    UnknownLabelError,
    ValidationError,
    ZeroProbabilityBranchError,
)
