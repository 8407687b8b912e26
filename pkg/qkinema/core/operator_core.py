"""
Dense complex-matrix algebra at small dimension.

Matrices are plain ``numpy`` complex128 arrays. Every constructor here returns
a read-only copy, so values handed around the package are immutable and the
functions below are safe to call from many threads at once.
"""

from functools import reduce
from typing import Literal, Sequence, Tuple, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

from config.settings import Config

from .errors import DimensionMismatchError, EigensolverError, ValidationError


CMatrix = NDArray[np.complex128]
Subsystem = Literal["A", "B"]


# ================================================================
# 🧱 LAYER 1: Construction & Validation
# ================================================================

def _freeze(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


def as_cmatrix(data: ArrayLike) -> CMatrix:
    """Validate ``data`` as a finite 2-D complex matrix and return a frozen copy."""
    matrix = np.array(data, dtype=np.complex128, copy=True)
    if matrix.ndim != 2 or 0 in matrix.shape:
        raise ValidationError(f"expected a non-empty 2-D matrix, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise ValidationError("matrix has NaN or infinite entries")
    return _freeze(matrix)


def is_hermitian(m: ArrayLike, tol: float = None) -> bool:
    tol = Config.HERM_TOL if tol is None else tol
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return max_entry_distance(m, m.conj().T) <= tol


def as_hermitian(data: ArrayLike, tol: float = None) -> CMatrix:
    """Validate ``data`` as Hermitian within ``tol`` (default HERM_TOL)."""
    matrix = as_cmatrix(data)
    if matrix.shape[0] != matrix.shape[1]:
        raise ValidationError(f"Hermitian matrix must be square, got {matrix.shape}")
    if not is_hermitian(matrix, tol):
        raise ValidationError(
            f"matrix is not Hermitian: ‖A − A†‖_max = {max_entry_distance(matrix, matrix.conj().T):.3e}"
        )
    return matrix


def identity(dim: int) -> CMatrix:
    return _freeze(np.eye(dim, dtype=np.complex128))


def projector(vector: ArrayLike) -> CMatrix:
    """|v⟩⟨v| for a column vector given as a flat array (not normalised here)."""
    v = np.asarray(vector, dtype=np.complex128).reshape(-1)
    return _freeze(np.outer(v, v.conj()))


PAULI_I = identity(2)
PAULI_X = _freeze(np.array([[0, 1], [1, 0]], dtype=np.complex128))
PAULI_Y = _freeze(np.array([[0, -1j], [1j, 0]], dtype=np.complex128))
PAULI_Z = _freeze(np.array([[1, 0], [0, -1]], dtype=np.complex128))


def shift_operator(dim: int) -> CMatrix:
    """Weyl shift X|j⟩ = |j+1 mod d⟩; equals σx at d = 2."""
    return _freeze(np.roll(np.eye(dim, dtype=np.complex128), 1, axis=0))


def clock_operator(dim: int) -> CMatrix:
    """Weyl clock Z|j⟩ = ω^j |j⟩; equals σz at d = 2."""
    omega = np.exp(2j * np.pi / dim)
    return _freeze(np.diag(omega ** np.arange(dim)).astype(np.complex128))


# ================================================================
# ⚙️ LAYER 2: Products & Partial Trace
# ================================================================

def tensor(*factors: ArrayLike) -> CMatrix:
    """Kronecker product of two or more matrices (left factor is subsystem A)."""
    if len(factors) < 2:
        raise ValidationError("tensor needs at least two factors")
    mats = [as_cmatrix(f) for f in factors]
    return _freeze(reduce(np.kron, mats))


def partial_trace(m: ArrayLike, dims: Tuple[int, int], keep: Subsystem = "A") -> CMatrix:
    """
    Trace out one factor of a bipartite operator on H_A ⊗ H_B.

    Args:
        m: square matrix of side dA·dB
        dims: (dA, dB)
        keep: "A" returns Tr_B m, "B" returns Tr_A m

    Returns:
        dA×dA or dB×dB matrix with the same trace as ``m``
    """
    matrix = as_cmatrix(m)
    d_a, d_b = (int(d) for d in dims)
    if d_a < 1 or d_b < 1:
        raise ValidationError(f"subsystem dimensions must be positive, got {dims}")
    if matrix.shape != (d_a * d_b, d_a * d_b):
        raise DimensionMismatchError(
            f"matrix of shape {matrix.shape} does not match dims {d_a}x{d_b}"
        )

    blocks = matrix.reshape(d_a, d_b, d_a, d_b)
    if keep == "A":
        reduced = np.einsum("ijkj->ik", blocks)
    elif keep == "B":
        reduced = np.einsum("ijil->jl", blocks)
    else:
        raise ValidationError(f"keep must be 'A' or 'B', got {keep!r}")
    return _freeze(np.ascontiguousarray(reduced))


# ================================================================
# 🔬 LAYER 3: Spectra, Positivity & Distances
# ================================================================

def symmetrize(m: ArrayLike) -> CMatrix:
    m = np.asarray(m, dtype=np.complex128)
    return _freeze((m + m.conj().T) / 2)


def hermitian_eigh(m: ArrayLike) -> Tuple[NDArray[np.float64], CMatrix]:
    """Eigen-decomposition of the Hermitian part of ``m`` (ascending eigenvalues)."""
    try:
        values, vectors = np.linalg.eigh(symmetrize(m))
    except np.linalg.LinAlgError as e:
        raise EigensolverError(f"Hermitian eigensolver failed: {e}") from e
    return values, vectors


def hermitian_eigvalsh(m: ArrayLike) -> NDArray[np.float64]:
    try:
        return np.linalg.eigvalsh(symmetrize(m))
    except np.linalg.LinAlgError as e:
        raise EigensolverError(f"Hermitian eigensolver failed: {e}") from e


def is_positive(h: ArrayLike, tol: float = None) -> bool:
    """True iff the smallest eigenvalue of the Hermitian part is ≥ −tol."""
    tol = Config.POSITIVITY_TOL if tol is None else tol
    matrix = as_hermitian(h)
    return bool(hermitian_eigvalsh(matrix)[0] >= -tol)


def max_entry_distance(a: ArrayLike, b: ArrayLike) -> float:
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"shapes differ: {a.shape} vs {b.shape}")
    return float(np.max(np.abs(a - b)))


def operators_equal(a: ArrayLike, b: ArrayLike, tol: float = None) -> bool:
    """Operator equality convention: max-entry distance ≤ tol (default 1e-10)."""
    tol = Config.EQUALITY_TOL if tol is None else tol
    return max_entry_distance(a, b) <= tol


def _matrix_of(state: Union[ArrayLike, "object"]) -> np.ndarray:
    # accepts DensityOperator-like objects without importing kinematics
    return np.asarray(getattr(state, "matrix", state), dtype=np.complex128)


def trace_distance(a, b) -> float:
    """
    T(a, b) = ½ Σ |eig(a − b)|.

    Accepts DensityOperator instances or raw matrices. The result is clipped
    into [0, 1].
    """
    ma = _matrix_of(a)
    mb = _matrix_of(b)
    if ma.shape != mb.shape:
        raise DimensionMismatchError(f"trace distance between {ma.shape} and {mb.shape} states")
    value = 0.5 * float(np.sum(np.abs(hermitian_eigvalsh(ma - mb))))
    return min(max(value, 0.0), 1.0)


def weighted_sum(weights: Sequence[float], matrices: Sequence[ArrayLike]) -> CMatrix:
    """Σ w_i M_i as a frozen complex matrix."""
    stack = np.asarray([np.asarray(m, dtype=np.complex128) for m in matrices])
    return _freeze(np.tensordot(np.asarray(weights, dtype=np.float64), stack, axes=1))
