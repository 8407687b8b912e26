"""
State maps, Kraus channels, the ensemble lift and the affinity certifier.

The certifier searches for two preparations of the same density operator
whose images under a map differ. Finding such a pair proves the map is not
affine. Not finding one after many trials is evidence, not proof, which is why
the passing verdict is called ``certified_affine`` rather than "affine".
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Tuple

import numpy as np

from config.settings import Config

from .errors import DimensionMismatchError, StateMapViolationError, ValidationError
from .kinematics import (
    DensityOperator,
    Ensemble,
    SeedLike,
    barycenter,
    eigen_decomposition_ensemble,
    random_ensemble,
)
from .operator_core import (
    CMatrix,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    as_cmatrix,
    clock_operator,
    identity,
    max_entry_distance,
    shift_operator,
    trace_distance,
    weighted_sum,
)

logger = logging.getLogger(__name__)


# ================================================================
# 🔄 LAYER 1: State Maps & Kraus Channels
# ================================================================

@dataclass(frozen=True)
class StateMap:
    """
    A transformation Λ: S(H) → S(H), possibly nonlinear.

    Calling the map validates its output; an output that is not a density
    operator raises StateMapViolationError naming the input that caused it.
    """

    name: str
    apply: Callable[[DensityOperator], object]
    dim_in: int
    dim_out: int

    def __post_init__(self):
        if self.dim_in < 1 or self.dim_out < 1:
            raise ValidationError(f"StateMap {self.name!r} needs positive dimensions")

    def __call__(self, rho: DensityOperator) -> DensityOperator:
        if rho.dim != self.dim_in:
            raise DimensionMismatchError(
                f"StateMap {self.name!r} expects dim {self.dim_in}, got {rho.dim}"
            )
        out = self.apply(rho)
        try:
            if not isinstance(out, DensityOperator):
                out = DensityOperator(out)
        except ValidationError as e:
            raise StateMapViolationError(
                f"StateMap {self.name!r} produced an invalid state from input "
                f"{np.array2string(rho.matrix, precision=6)}: {e}"
            ) from e
        if out.dim != self.dim_out:
            raise StateMapViolationError(
                f"StateMap {self.name!r} produced dim {out.dim}, declared {self.dim_out}"
            )
        return out


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """Trace-preserving channel ρ ↦ Σ K_i ρ K_i†."""

    kraus_operators: Tuple[CMatrix, ...]
    name: str = "kraus"

    def __post_init__(self):
        ops = tuple(as_cmatrix(k) for k in self.kraus_operators)
        if not ops:
            raise ValidationError("a Kraus channel needs at least one operator")
        shapes = {k.shape for k in ops}
        if len(shapes) != 1:
            raise DimensionMismatchError(f"Kraus operators have shapes {sorted(shapes)}")
        d_out, d_in = ops[0].shape
        completeness = sum(k.conj().T @ k for k in ops)
        if max_entry_distance(completeness, identity(d_in)) > Config.TRACE_TOL:
            raise ValidationError(f"Kraus operators of {self.name!r} are not trace preserving")
        object.__setattr__(self, "kraus_operators", ops)

    @property
    def dim_in(self) -> int:
        return self.kraus_operators[0].shape[1]

    @property
    def dim_out(self) -> int:
        return self.kraus_operators[0].shape[0]

    def as_state_map(self) -> StateMap:
        return StateMap(self.name, lambda rho: apply_kraus(self, rho), self.dim_in, self.dim_out)


def apply_kraus(c: KrausChannel, rho: DensityOperator) -> DensityOperator:
    """Σ K_i ρ K_i†."""
    if rho.dim != c.dim_in:
        raise DimensionMismatchError(f"channel {c.name!r} expects dim {c.dim_in}, got {rho.dim}")
    out = sum(k @ rho.matrix @ k.conj().T for k in c.kraus_operators)
    return DensityOperator(out)


def identity_channel(dim: int = 2) -> KrausChannel:
    return KrausChannel((identity(dim),), name="identity")


def bit_flip_channel(dim: int = 2, p: float = 1.0) -> KrausChannel:
    """ρ ↦ (1−p)ρ + p XρX† with X the Weyl shift (σx at d = 2)."""
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"bit-flip probability must be in [0, 1], got {p}")
    ops = [np.sqrt(p) * shift_operator(dim)]
    if p < 1.0:
        ops.insert(0, np.sqrt(1.0 - p) * identity(dim))
    return KrausChannel(tuple(ops), name=f"bitflip:{p:g}")


def depolarizing_channel(dim: int = 2, q: float = 0.75) -> KrausChannel:
    """
    Kraus operators √(1−q)·I and √(q/(d²−1))·X^a Z^b for (a, b) ≠ (0, 0).

    At d = 2 this is {√(1−q)·I, √(q/3)·σx, √(q/3)·σy, √(q/3)·σz} up to
    phases, and q = 3/4 sends every state to I/2.
    """
    if not 0.0 <= q <= 1.0:
        raise ValidationError(f"depolarizing strength must be in [0, 1], got {q}")
    if dim == 2:
        paulis = [PAULI_X, PAULI_Y, PAULI_Z]
    else:
        x, z = shift_operator(dim), clock_operator(dim)
        paulis = [
            np.linalg.matrix_power(x, a) @ np.linalg.matrix_power(z, b)
            for a in range(dim)
            for b in range(dim)
            if (a, b) != (0, 0)
        ]
    scale = np.sqrt(q / (dim * dim - 1))
    ops = [np.sqrt(1.0 - q) * identity(dim)] + [scale * w for w in paulis]
    return KrausChannel(tuple(ops), name=f"depolarizing:{q:g}")


def amplitude_damping_channel(gamma: float) -> KrausChannel:
    """Qubit decay |1⟩ → |0⟩ with probability gamma."""
    if not 0.0 <= gamma <= 1.0:
        raise ValidationError(f"gamma must be in [0, 1], got {gamma}")
    k0 = np.array([[1.0, 0.0], [0.0, np.sqrt(1.0 - gamma)]], dtype=np.complex128)
    k1 = np.array([[0.0, np.sqrt(gamma)], [0.0, 0.0]], dtype=np.complex128)
    return KrausChannel((k0, k1), name=f"amplitude-damping:{gamma:g}")


def identity_map(dim: int = 2) -> StateMap:
    return StateMap("identity", lambda rho: rho, dim, dim)


def nonlinear_purification_map(dim: int = 2) -> StateMap:
    """Λ(ρ) = ρ²/Tr(ρ²): fixes pure states, sharpens mixed ones, not affine."""

    def purify(rho: DensityOperator) -> CMatrix:
        square = rho.matrix @ rho.matrix
        # Tr ρ² ≥ 1/d > 0 for every density operator
        return square / np.trace(square).real

    return StateMap("purify", purify, dim, dim)


# ================================================================
# 🧪 LAYER 2: Affinity Certification
# ================================================================

class AffinityVerdict(str, Enum):
    CERTIFIED_AFFINE = "certified_affine"
    WITNESS_FOUND = "witness_found"


@dataclass(frozen=True)
class AffinityWitness:
    """Two preparations of one density operator whose images differ by ``deviation``."""

    e1: Ensemble
    e2: Ensemble
    deviation: float


@dataclass(frozen=True)
class AffinityReport:
    verdict: AffinityVerdict
    trials: int
    witness: Optional[AffinityWitness] = None
    threshold: float = None
    map_name: str = ""

    def __post_init__(self):
        verdict = AffinityVerdict(self.verdict)
        object.__setattr__(self, "verdict", verdict)
        if (self.witness is not None) != (verdict is AffinityVerdict.WITNESS_FOUND):
            raise ValidationError("a witness is present exactly when the verdict is witness_found")

    @property
    def certified(self) -> bool:
        return self.verdict is AffinityVerdict.CERTIFIED_AFFINE


def _mapped_mixture(state_map: StateMap, e: Ensemble) -> CMatrix:
    return weighted_sum(e.weights, [state_map(s).matrix for s in e.states])


def affinity_deviation(state_map: StateMap, e1: Ensemble, e2: Optional[Ensemble] = None) -> float:
    """
    Largest trace distance among Λ(ρ), Σ p_j Λ(ρ_j) over e1, and the same over e2.

    ``e2`` defaults to the eigen-decomposition of e1's barycenter. Both
    ensembles must represent the same ρ.
    """
    rho = barycenter(e1)
    e2 = eigen_decomposition_ensemble(rho) if e2 is None else e2
    if trace_distance(rho, barycenter(e2)) > Config.BARYCENTER_TOL:
        raise ValidationError("the two preparations do not represent the same density operator")
    image = state_map(rho).matrix
    mix1 = _mapped_mixture(state_map, e1)
    mix2 = _mapped_mixture(state_map, e2)
    return max(trace_distance(image, mix1), trace_distance(image, mix2), trace_distance(mix1, mix2))


def certify_affine(
    state_map: StateMap,
    dim: int = None,
    trials: int = None,
    seed: SeedLike = None,
    threshold: float = None,
    n_components: int = 3,
) -> AffinityReport:
    """
    Probabilistic affinity certification of ``state_map``.

    Each trial draws e1 = random_ensemble(dim, n_components), sets
    ρ = barycenter(e1) and e2 = eigen_decomposition_ensemble(ρ), and measures
    how far Λ(ρ), Σ p_j Λ(ρ_j) over e1 and the same over e2 are from each
    other. The first trial whose deviation exceeds ``threshold`` stops the
    search with a witness. Trials use seeds spawned from ``seed`` and run in
    index order, so the reported witness is the lowest-indexed failing trial.

    A certified_affine verdict means no witness was found; it is not a proof.
    """
    dim = state_map.dim_in if dim is None else int(dim)
    trials = Config.DEFAULT_TRIALS if trials is None else int(trials)
    threshold = Config.AFFINITY_THRESHOLD if threshold is None else float(threshold)
    if trials < 1:
        raise ValidationError(f"trials must be ≥ 1, got {trials}")
    if threshold <= 0:
        raise ValidationError(f"threshold must be positive, got {threshold}")
    if dim != state_map.dim_in:
        raise DimensionMismatchError(f"map {state_map.name!r} acts on dim {state_map.dim_in}, not {dim}")

    seed_seq = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    for index, child in enumerate(seed_seq.spawn(trials)):
        e1 = random_ensemble(dim, n_components, child)
        e2 = eigen_decomposition_ensemble(barycenter(e1))
        deviation = affinity_deviation(state_map, e1, e2)
        logger.debug(f"trial {index}: {state_map.name} deviation {deviation:.3e}")
        if deviation > threshold:
            logger.info(f"witness for {state_map.name} at trial {index}, deviation {deviation:.6g}")
            return AffinityReport(
                AffinityVerdict.WITNESS_FOUND,
                index + 1,
                AffinityWitness(e1, e2, deviation),
                threshold,
                state_map.name,
            )
    return AffinityReport(AffinityVerdict.CERTIFIED_AFFINE, trials, None, threshold, state_map.name)


# ================================================================
# 📦 LAYER 3: Evolution on K(H)
# ================================================================

def lift_to_ensemble(state_map: StateMap, e: Ensemble) -> Ensemble:
    """
    Λ[{p_j, ρ_j}] = {p_j, Λ[ρ_j]}: each member of the ensemble evolves on its own.

    The lift commutes with mix_ensembles for every StateMap, nonlinear ones
    included.
    """
    return Ensemble(tuple((w, state_map(s)) for w, s in e.components), e.kind)


def barycenter_commutes(state_map: StateMap, e: Ensemble, tol: float = None) -> bool:
    """barycenter(lift(Λ, e)) == Λ(barycenter(e)) within ``tol`` in trace distance."""
    tol = Config.AFFINITY_THRESHOLD if tol is None else tol
    lifted = barycenter(lift_to_ensemble(state_map, e))
    return trace_distance(lifted, state_map(barycenter(e))) <= tol
