"""
POVMs, the trace rule, event probabilities over finite outcome sets, and
ensemble functionals on K(H).

A finite set of outcome labels stands in for the Borel sets of a general
operator-valued measure; both measure axioms (normalisation and finite
additivity) survive intact.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Collection, List, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import ArrayLike

from config.settings import Config

from .errors import ConsistencyError, DimensionMismatchError, UnknownLabelError, ValidationError
from .kinematics import (
    DensityOperator,
    Ensemble,
    PureState,
    SeedLike,
    _ginibre,
    get_generator,
    minus_state,
    plus_state,
)
from .operator_core import (
    CMatrix,
    as_hermitian,
    identity,
    is_positive,
    max_entry_distance,
    projector,
)

logger = logging.getLogger(__name__)

_PROJECTIVE_TOL = 1e-9


# ================================================================
# 📏 LAYER 1: POVMs
# ================================================================

@dataclass(frozen=True, eq=False)
class Povm:
    """Finite POVM {(λ_k, F_k)}: F_k ≥ 0, Σ_k F_k = 𝟙, distinct real labels."""

    effects: Tuple[Tuple[float, CMatrix], ...]
    name: str = "povm"

    def __post_init__(self):
        effects = tuple((float(label), as_hermitian(op)) for label, op in self.effects)
        if not effects:
            raise ValidationError("a POVM needs at least one effect")
        labels = [label for label, _ in effects]
        if len(set(labels)) != len(labels):
            raise ValidationError(f"POVM labels must be distinct, got {labels}")
        shapes = {op.shape for _, op in effects}
        if len(shapes) != 1:
            raise DimensionMismatchError(f"POVM effects have shapes {sorted(shapes)}")
        for label, op in effects:
            if not is_positive(op):
                raise ValidationError(f"effect {label} of {self.name!r} is not positive")
        total = sum(op for _, op in effects)
        dim = effects[0][1].shape[0]
        if max_entry_distance(total, identity(dim)) > Config.TRACE_TOL:
            raise ValidationError(f"effects of {self.name!r} do not sum to the identity")
        object.__setattr__(self, "effects", effects)

    @classmethod
    def from_projectors(
        cls,
        operators: Sequence[ArrayLike],
        labels: Optional[Sequence[float]] = None,
        name: str = "povm",
    ) -> "Povm":
        """Build a POVM from effect matrices; labels default to 0, 1, 2, ..."""
        labels = list(range(len(operators))) if labels is None else list(labels)
        if len(labels) != len(operators):
            raise ValidationError("labels and operators differ in length")
        return cls(tuple(zip(labels, operators)), name)

    @property
    def labels(self) -> Tuple[float, ...]:
        return tuple(label for label, _ in self.effects)

    @property
    def operators(self) -> Tuple[CMatrix, ...]:
        return tuple(op for _, op in self.effects)

    @property
    def dim(self) -> int:
        return self.effects[0][1].shape[0]

    def index_of(self, label: float) -> int:
        try:
            return self.labels.index(float(label))
        except ValueError:
            raise UnknownLabelError(f"{label!r} is not an outcome of {self.name!r}") from None

    def __len__(self) -> int:
        return len(self.effects)

    def __repr__(self) -> str:
        return f"Povm(name={self.name!r}, dim={self.dim}, outcomes={len(self)})"


def basis_povm(vectors: Sequence[PureState], name: str = "basis") -> Povm:
    """Rank-1 projective measurement onto an orthonormal basis."""
    return Povm.from_projectors([v.projector() for v in vectors], name=name)


def computational_basis_povm(dim: int = 2) -> Povm:
    return Povm.from_projectors([projector(row) for row in np.eye(dim)], name="Z")


def x_basis_povm() -> Povm:
    """{|+⟩⟨+|, |−⟩⟨−|} on a qubit."""
    return basis_povm([plus_state(), minus_state()], name="X")


def trivial_povm(dim: int) -> Povm:
    """Single-outcome measurement {𝟙}."""
    return Povm(((0.0, identity(dim)),), name="trivial")


def random_projective_povm(dim: int, seed: SeedLike = None, name: str = "random") -> Povm:
    """Rank-1 projective POVM onto a Haar-random orthonormal basis."""
    rng = get_generator(seed)
    q, r = np.linalg.qr(_ginibre((dim, dim), rng))
    # fix column phases so the distribution is Haar
    phases = np.diag(r) / np.abs(np.diag(r))
    unitary = q * phases
    return Povm.from_projectors([projector(unitary[:, i]) for i in range(dim)], name=name)


# ================================================================
# 🎯 LAYER 2: Trace Rule & Event Probabilities
# ================================================================

def _check_dims(m: Povm, rho: DensityOperator):
    if m.dim != rho.dim:
        raise DimensionMismatchError(f"POVM {m.name!r} acts on dim {m.dim}, state has dim {rho.dim}")


def outcome_probabilities(m: Povm, rho: DensityOperator) -> List[float]:
    """
    Trace rule p_k = Re Tr(ρ F_k), in effect order.

    Values within 1e-10 of [0, 1] are clipped into it; anything further out is
    a ConsistencyError.
    """
    _check_dims(m, rho)
    edge = Config.TRACE_TOL
    probs = []
    for label, op in m.effects:
        p = float(np.real(np.trace(rho.matrix @ op)))
        if p < -edge or p > 1 + edge:
            raise ConsistencyError(f"trace rule gave p={p!r} for outcome {label} of {m.name!r}")
        if not 0.0 <= p <= 1.0:
            logger.debug(f"clipping p={p!r} for outcome {label} of {m.name!r}")
        probs.append(min(max(p, 0.0), 1.0))
    total = sum(probs)
    if abs(total - 1.0) > Config.PROB_SUM_TOL:
        raise ConsistencyError(f"outcome probabilities of {m.name!r} sum to {total!r}")
    return probs


def event_probability(m: Povm, rho: DensityOperator, event: Collection[float]) -> float:
    """P_M(A, ρ) for a finite event A ⊆ labels."""
    indices = {m.index_of(label) for label in event}
    probs = outcome_probabilities(m, rho)
    return float(sum(probs[i] for i in indices))


def is_projective(m: Povm, tol: float = _PROJECTIVE_TOL) -> bool:
    """Every effect idempotent and effects mutually orthogonal, within ``tol``."""
    ops = m.operators
    for op in ops:
        if max_entry_distance(op @ op, op) > tol:
            return False
    zero = np.zeros_like(ops[0])
    for i in range(len(ops)):
        for j in range(i + 1, len(ops)):
            if max_entry_distance(ops[i] @ ops[j], zero) > tol:
                return False
    return True


# ================================================================
# 🧮 LAYER 3: Ensemble Functionals
# ================================================================

@dataclass(frozen=True)
class EnsembleFunctional:
    """
    A real-valued observable on K(H).

    Every functional must be affine under mix_ensembles. ``nonlinear`` flags a
    functional that is not a function of the barycenter alone, i.e. one that
    can tell two decompositions of the same density operator apart.
    """

    name: str
    evaluate: Callable[[Ensemble], float]
    nonlinear: bool = False

    def __call__(self, e: Ensemble) -> float:
        return float(self.evaluate(e))


def basis_overlap_functional(basis_state: PureState) -> EnsembleFunctional:
    """f(π) = Σ_j p_j ⟨φ|ρ_j|φ⟩²: linear in the weights, quadratic in each ρ_j."""
    phi = basis_state.amplitudes

    def evaluate(e: Ensemble) -> float:
        if e.dim != phi.size:
            raise DimensionMismatchError(f"functional on dim {phi.size}, ensemble has dim {e.dim}")
        overlaps = [np.real(np.vdot(phi, s.matrix @ phi)) for s in e.states]
        return float(np.dot(e.weights, np.square(overlaps)))

    return EnsembleFunctional("basis_overlap", evaluate, nonlinear=True)


def trace_rule_functional(m: Povm, label: float) -> EnsembleFunctional:
    """
    The QM observable P_M({λ}, ·) lifted to K(H): f(π) = Σ_j p_j Tr(ρ_j F_λ).

    It only sees the barycenter, so it can never distinguish decompositions.
    """
    op = m.operators[m.index_of(label)]

    def evaluate(e: Ensemble) -> float:
        if e.dim != m.dim:
            raise DimensionMismatchError(f"functional on dim {m.dim}, ensemble has dim {e.dim}")
        return float(sum(w * np.real(np.trace(s.matrix @ op)) for w, s in e.components))

    return EnsembleFunctional(f"trace_rule[{m.name}:{label:g}]", evaluate, nonlinear=False)


def functional_gap(f: EnsembleFunctional, e1: Ensemble, e2: Ensemble) -> float:
    """|f(e1) − f(e2)|."""
    return abs(f(e1) - f(e2))
