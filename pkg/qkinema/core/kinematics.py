"""
State spaces: S(H) of density operators, K(H) of ensembles (genuine mixtures)
and their convex structure, plus seeded random generation.

K(H) is represented by finite-support ensembles only. Ensembles are never
canonicalised: two decompositions of the same density operator are different
points of K(H) and compare unequal structurally.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence, Tuple, Union

import numpy as np
from numpy.typing import ArrayLike

from config.settings import Config

from .errors import DimensionMismatchError, ValidationError
from .operator_core import (
    CMatrix,
    _freeze,
    as_hermitian,
    hermitian_eigh,
    is_positive,
    max_entry_distance,
    projector,
    symmetrize,
    trace_distance,
    weighted_sum,
)

logger = logging.getLogger(__name__)

SeedLike = Union[None, int, np.random.SeedSequence, np.random.Generator]

_EIGEN_DROP = 1e-12


def get_generator(seed: SeedLike) -> np.random.Generator:
    """Random generator from an int, SeedSequence or an existing Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


# ================================================================
# 🧩 LAYER 1: Domain Types
# ================================================================

@dataclass(frozen=True, eq=False)
class DensityOperator:
    """A point of S(H): ϱ = ϱ†, ϱ ≥ 0, Tr ϱ = 1."""

    matrix: CMatrix

    def __post_init__(self):
        matrix = as_hermitian(self.matrix)
        trace = np.trace(matrix).real
        if abs(trace - 1.0) > Config.TRACE_TOL:
            raise ValidationError(f"density operator must have unit trace, got {trace!r}")
        if not is_positive(matrix):
            raise ValidationError("density operator is not positive semidefinite")
        object.__setattr__(self, "matrix", symmetrize(matrix))

    @classmethod
    def from_pure(cls, state: "PureState") -> "DensityOperator":
        return cls(state.projector())

    @classmethod
    def from_unnormalized(cls, m: ArrayLike) -> "DensityOperator":
        """
        Normalise a positive operator such as F ρ F into a state.

        The Hermitian part is taken and its negative spectrum clipped before
        dividing by the remaining trace; entry noise of ~1e-16 in ``m`` grows
        by 1/Tr m otherwise.
        """
        values, vectors = hermitian_eigh(m)
        values = np.clip(values, 0.0, None)
        total = values.sum()
        if total <= 0.0:
            raise ValidationError("operator has no positive spectrum to normalise")
        return cls((vectors * (values / total)) @ vectors.conj().T)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def purity(self) -> float:
        """Tr ϱ², in [1/d, 1]."""
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    def __repr__(self) -> str:
        return f"DensityOperator(dim={self.dim}, purity={self.purity():.6f})"


@dataclass(frozen=True, eq=False)
class PureState:
    """Unit vector |ψ⟩; its projector is an extremal point of S(H)."""

    amplitudes: np.ndarray

    def __post_init__(self):
        vector = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if vector.size == 0 or not np.all(np.isfinite(vector)):
            raise ValidationError("pure state needs finite amplitudes")
        norm = np.vdot(vector, vector).real
        if abs(norm - 1.0) > Config.TRACE_TOL:
            raise ValidationError(f"pure state must have ⟨ψ|ψ⟩ = 1, got {norm!r}")
        object.__setattr__(self, "amplitudes", _freeze(vector))

    @classmethod
    def normalized(cls, amplitudes: ArrayLike) -> "PureState":
        vector = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        norm = np.linalg.norm(vector)
        if norm == 0:
            raise ValidationError("cannot normalise the zero vector")
        return cls(vector / norm)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def projector(self) -> CMatrix:
        return projector(self.amplitudes)

    def density(self) -> DensityOperator:
        return DensityOperator.from_pure(self)


class EnsembleKind(str, Enum):
    ELEMENTARY = "elementary"
    GENUINE = "genuine"


@dataclass(frozen=True, eq=False)
class Ensemble:
    """
    A point of K(H): a finite weighted list {p_j, ϱ_j} of density operators.

    ``kind`` labels a single-component, weight-1 ensemble as an elementary
    mixture (a reduced density operator taken as one point); everything else is
    a genuine mixture.
    """

    components: Tuple[Tuple[float, DensityOperator], ...]
    kind: EnsembleKind = EnsembleKind.GENUINE

    def __post_init__(self):
        components = tuple((float(w), s) for w, s in self.components)
        if not components:
            raise ValidationError("ensemble must have at least one component")
        if not all(isinstance(s, DensityOperator) for _, s in components):
            raise ValidationError("ensemble components must be DensityOperator instances")
        dims = {s.dim for _, s in components}
        if len(dims) != 1:
            raise DimensionMismatchError(f"ensemble mixes state dimensions {sorted(dims)}")
        weights = np.array([w for w, _ in components])
        if not np.all(np.isfinite(weights)) or np.any(weights < 0):
            raise ValidationError("ensemble weights must be finite and non-negative")
        if abs(weights.sum() - 1.0) > Config.TRACE_TOL:
            raise ValidationError(f"ensemble weights sum to {weights.sum()!r}, not 1")
        kind = EnsembleKind(self.kind)
        if kind is EnsembleKind.ELEMENTARY and (
            len(components) != 1 or abs(components[0][0] - 1.0) > Config.TRACE_TOL
        ):
            raise ValidationError("an elementary mixture has exactly one component of weight 1")
        object.__setattr__(self, "components", components)
        object.__setattr__(self, "kind", kind)

    @classmethod
    def dirac(cls, state: DensityOperator) -> "Ensemble":
        """{(1, ϱ)} as a genuine (Dirac) distribution on S(H)."""
        return cls(((1.0, state),))

    @classmethod
    def elementary(cls, state: DensityOperator) -> "Ensemble":
        return cls(((1.0, state),), EnsembleKind.ELEMENTARY)

    @classmethod
    def from_pure_states(cls, weights: Sequence[float], states: Sequence[PureState]) -> "Ensemble":
        if len(weights) != len(states):
            raise ValidationError("weights and states differ in length")
        return cls(tuple((w, s.density()) for w, s in zip(weights, states)))

    @property
    def weights(self) -> Tuple[float, ...]:
        return tuple(w for w, _ in self.components)

    @property
    def states(self) -> Tuple[DensityOperator, ...]:
        return tuple(s for _, s in self.components)

    @property
    def dim(self) -> int:
        return self.components[0][1].dim

    def __len__(self) -> int:
        return len(self.components)

    def __repr__(self) -> str:
        weights = ", ".join(f"{w:.4g}" for w in self.weights)
        return f"Ensemble(kind={self.kind.value}, dim={self.dim}, weights=[{weights}])"


# ================================================================
# ⚖️ LAYER 2: Convex Structure
# ================================================================

def barycenter(e: Ensemble) -> DensityOperator:
    """Σ_j p_j ϱ_j, the density operator an ensemble represents in QM."""
    return DensityOperator(weighted_sum(e.weights, [s.matrix for s in e.states]))


def mix_ensembles(parts: Iterable[Tuple[float, Ensemble]]) -> Ensemble:
    """
    Mix preparations: concatenate components, scaling each ensemble's weights.

    Zero-probability parts are kept as zero-weight components so the result
    still records every preparation that was offered.
    """
    parts = [(float(q), e) for q, e in parts]
    if not parts:
        raise ValidationError("nothing to mix")
    qs = np.array([q for q, _ in parts])
    if np.any(qs < 0) or abs(qs.sum() - 1.0) > Config.TRACE_TOL:
        raise ValidationError(f"mixing probabilities must be ≥ 0 and sum to 1, got {qs.tolist()}")
    dims = {e.dim for _, e in parts}
    if len(dims) != 1:
        raise DimensionMismatchError(f"cannot mix ensembles of dimensions {sorted(dims)}")

    components = [(q * w, s) for q, e in parts for w, s in e.components]
    return Ensemble(tuple(components))


def equivalent_in_qm(e1: Ensemble, e2: Ensemble, tol: float = None) -> bool:
    """True iff both ensembles represent the same density operator."""
    tol = Config.EQUIVALENCE_TOL if tol is None else tol
    if e1.dim != e2.dim:
        raise DimensionMismatchError(f"ensembles on dimensions {e1.dim} and {e2.dim}")
    return trace_distance(barycenter(e1), barycenter(e2)) <= tol


def structurally_equal(e1: Ensemble, e2: Ensemble, tol: float = None) -> bool:
    """Same components in the same order: weights and states equal within ``tol``."""
    tol = Config.EQUALITY_TOL if tol is None else tol
    if len(e1) != len(e2) or e1.dim != e2.dim:
        return False
    for (w1, s1), (w2, s2) in zip(e1.components, e2.components):
        if abs(w1 - w2) > tol or max_entry_distance(s1.matrix, s2.matrix) > tol:
            return False
    return True


def is_pure_ensemble(e: Ensemble, tol: float = None) -> bool:
    """Membership in D(H): every component is a pure state."""
    tol = Config.TRACE_TOL if tol is None else tol
    return all(abs(s.purity() - 1.0) <= tol for s in e.states)


def eigen_decomposition_ensemble(rho: DensityOperator) -> Ensemble:
    """Spectral decomposition {(λ_i, |v_i⟩⟨v_i|)} with negligible eigenvalues dropped."""
    values, vectors = hermitian_eigh(rho.matrix)
    keep = values > _EIGEN_DROP
    if not keep.all():
        logger.debug(f"dropping {int((~keep).sum())} negligible eigenvalues of a dim-{rho.dim} state")
    values = values[keep]
    vectors = vectors[:, keep]
    # descending order: dominant eigenvector first
    order = np.argsort(values)[::-1]
    weights = values[order] / values.sum()
    states = [PureState.normalized(vectors[:, i]).density() for i in order]
    return Ensemble(tuple(zip(weights.tolist(), states)))


# ================================================================
# 📌 LAYER 3: Named States
# ================================================================

def basis_state(dim: int, index: int) -> PureState:
    if not 0 <= index < dim:
        raise ValidationError(f"basis index {index} out of range for dimension {dim}")
    vector = np.zeros(dim, dtype=np.complex128)
    vector[index] = 1.0
    return PureState(vector)


def plus_state() -> PureState:
    return PureState.normalized([1, 1])


def minus_state() -> PureState:
    return PureState.normalized([1, -1])


def singlet_state() -> PureState:
    """(|01⟩ − |10⟩)/√2 in the basis {00, 01, 10, 11}, A first."""
    return PureState.normalized([0, 1, -1, 0])


def maximally_mixed(dim: int) -> DensityOperator:
    return DensityOperator(np.eye(dim, dtype=np.complex128) / dim)


# ================================================================
# 🎲 LAYER 4: Random Generation
# ================================================================

def _ginibre(shape: Tuple[int, ...], rng: np.random.Generator) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def _check_dim(dim: int, name: str = "dim") -> int:
    if int(dim) < 1:
        raise ValidationError(f"{name} must be ≥ 1, got {dim}")
    return int(dim)


def random_density(dim: int, seed: SeedLike = None) -> DensityOperator:
    """Ginibre state GG†/Tr(GG†); deterministic for a fixed seed."""
    dim = _check_dim(dim)
    rng = get_generator(seed)
    g = _ginibre((dim, dim), rng)
    rho = g @ g.conj().T
    rho = (rho + rho.conj().T) / 2
    return DensityOperator(rho / np.trace(rho).real)


def random_pure(dim: int, seed: SeedLike = None) -> PureState:
    dim = _check_dim(dim)
    rng = get_generator(seed)
    return PureState.normalized(_ginibre((dim,), rng))


def random_bipartite_pure(d_a: int, d_b: int, seed: SeedLike = None) -> PureState:
    """Normalised complex Gaussian vector on H_A ⊗ H_B."""
    _check_dim(d_a, "dA")
    _check_dim(d_b, "dB")
    return random_pure(d_a * d_b, seed)


def random_ensemble(dim: int, n_components: int, seed: SeedLike = None) -> Ensemble:
    """Flat-Dirichlet weights over ``n_components`` Ginibre states."""
    dim = _check_dim(dim)
    n_components = _check_dim(n_components, "n_components")
    rng = get_generator(seed)
    weights = rng.dirichlet(np.ones(n_components))
    # Dirichlet draws sum to 1 up to rounding; fix the last weight exactly
    weights[-1] = max(0.0, 1.0 - weights[:-1].sum())
    states = [random_density(dim, rng) for _ in range(n_components)]
    return Ensemble(tuple(zip(weights.tolist(), states)))
