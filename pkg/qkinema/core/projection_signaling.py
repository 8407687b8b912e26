"""
Projection postulate, remote steering and the two signaling verdicts.

Bipartite operators live on H_A ⊗ H_B with A as the left tensor factor. Local
measurements act on B; the party holding A sees a steered ensemble.

In QM the steered ensembles of every local measurement share one barycenter
(Tr_B ρ), so a remote measurement choice is invisible and no-signaling holds.
In EQM the ensembles themselves are states, and a nonlinear functional reads
the choice off directly.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from config.settings import Config

from .errors import (
    ConsistencyError,
    DimensionMismatchError,
    IndistinguishableEnsemblesError,
    NonProjectiveMeasurementError,
    ValidationError,
    ZeroProbabilityBranchError,
)
from .kinematics import (
    DensityOperator,
    Ensemble,
    SeedLike,
    barycenter,
    equivalent_in_qm,
    singlet_state,
)
from .measurement import (
    EnsembleFunctional,
    Povm,
    computational_basis_povm,
    is_projective,
    outcome_probabilities,
    x_basis_povm,
)
from .operator_core import identity, partial_trace, tensor, trace_distance

logger = logging.getLogger(__name__)

_FUNCTIONAL_GAP_FLOOR = 1e-9


# ================================================================
# 🧩 LAYER 1: Domain Types
# ================================================================

@dataclass(frozen=True)
class MeasurementRecord:
    """Outcome k of a projective measurement with p_k and ϱ_k = F_k ρ F_k / p_k."""

    outcome_index: int
    label: float
    probability: float
    post_state: DensityOperator

    def __post_init__(self):
        if not 0.0 < self.probability <= 1.0:
            raise ValidationError(f"record probability must be in (0, 1], got {self.probability}")


@dataclass(frozen=True)
class SteeredEnsemble:
    """ϱ_A^M = {p_k, Tr_B ϱ_k}: what a measurement M on B prepares on A."""

    ensemble: Ensemble
    measurement_name: str


class Theory(str, Enum):
    QM = "QM"
    EQM = "EQM"


@dataclass(frozen=True)
class SignalingVerdict:
    theory: Theory
    signaling: bool
    channel_gap: float
    detail: str
    evidence: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        theory = Theory(self.theory)
        object.__setattr__(self, "theory", theory)
        if theory is Theory.QM and self.signaling:
            raise ConsistencyError("a QM verdict can never report signaling")


# ================================================================
# 📐 LAYER 2: Projection Postulate
# ================================================================

def _require_projective(m: Povm):
    if not is_projective(m):
        raise NonProjectiveMeasurementError(
            f"the projection postulate is stated for projective measurements; {m.name!r} is not"
        )


def project(m: Povm, rho: DensityOperator, k: int, prob_floor: float = None) -> MeasurementRecord:
    """ϱ_k = F_k ρ F_k / Tr(ρ F_k) after observing outcome ``k``."""
    prob_floor = Config.PROB_FLOOR if prob_floor is None else prob_floor
    _require_projective(m)
    if rho.dim != m.dim:
        raise DimensionMismatchError(f"POVM {m.name!r} acts on dim {m.dim}, state has dim {rho.dim}")
    if not 0 <= k < len(m):
        raise ValidationError(f"outcome index {k} out of range for {m.name!r}")

    label, f_k = m.effects[k]
    p_k = float(np.real(np.trace(rho.matrix @ f_k)))
    if p_k <= prob_floor:
        raise ZeroProbabilityBranchError(
            f"outcome {k} of {m.name!r} has probability {p_k:.3e}; ϱ_k is undefined"
        )
    post = DensityOperator.from_unnormalized(f_k @ rho.matrix @ f_k)
    return MeasurementRecord(k, label, min(p_k, 1.0), post)


def repeat_measurement(m: Povm, record: MeasurementRecord) -> List[float]:
    """Outcome probabilities of measuring ``m`` again on a post-measurement state."""
    return outcome_probabilities(m, record.post_state)


def post_measurement_ensemble(m: Povm, rho: DensityOperator, prob_floor: float = None) -> Ensemble:
    """{p_k, ϱ_k} over outcomes with p_k above the floor; barycenter Σ_k F_k ρ F_k."""
    prob_floor = Config.PROB_FLOOR if prob_floor is None else prob_floor
    _require_projective(m)
    probs = outcome_probabilities(m, rho)
    records = [project(m, rho, k, prob_floor) for k, p in enumerate(probs) if p > prob_floor]
    total = sum(r.probability for r in records)
    return Ensemble(tuple((r.probability / total, r.post_state) for r in records))


def local_measurement_on_B(p: Povm, d_a: int) -> Povm:
    """F_k = 𝟙_A ⊗ P_k."""
    _require_projective(p)
    effects = tuple((label, tensor(identity(d_a), op)) for label, op in p.effects)
    return Povm(effects, name=f"1⊗{p.name}")


# ================================================================
# 📡 LAYER 3: Steering & No-Signaling
# ================================================================

def _bipartite_dims(rho_ab: DensityOperator, p: Povm, dims: Optional[Tuple[int, int]]) -> Tuple[int, int]:
    if dims is None:
        d_b = p.dim
        if rho_ab.dim % d_b:
            raise DimensionMismatchError(f"state dim {rho_ab.dim} is not a multiple of dB={d_b}")
        dims = (rho_ab.dim // d_b, d_b)
    d_a, d_b = (int(d) for d in dims)
    if d_a * d_b != rho_ab.dim or d_b != p.dim:
        raise DimensionMismatchError(
            f"dims {d_a}x{d_b} do not fit state dim {rho_ab.dim} and measurement dim {p.dim}"
        )
    return d_a, d_b


def steer(
    rho_ab: DensityOperator, p: Povm, dims: Optional[Tuple[int, int]] = None
) -> SteeredEnsemble:
    """Measure ``p`` on B and return the ensemble {p_k, Tr_B ϱ_k} prepared on A."""
    d_a, d_b = _bipartite_dims(rho_ab, p, dims)
    joint = post_measurement_ensemble(local_measurement_on_B(p, d_a), rho_ab)
    components = tuple(
        (w, DensityOperator(partial_trace(s.matrix, (d_a, d_b), keep="A")))
        for w, s in joint.components
    )
    return SteeredEnsemble(Ensemble(components), p.name)


def verify_no_signaling(
    rho_ab: DensityOperator,
    measurements: Sequence[Povm],
    dims: Optional[Tuple[int, int]] = None,
    tol: float = None,
) -> SignalingVerdict:
    """
    Check ϱ_A^M = Σ_k p_k Tr_B ϱ_k = Tr_B ρ for every local measurement M.

    The identity always holds in QM, so a distance above ``tol`` means a bug
    and raises ConsistencyError instead of producing a signaling verdict.
    """
    tol = Config.NO_SIGNALING_TOL if tol is None else tol
    if not measurements:
        raise ValidationError("need at least one local measurement")
    d_a, d_b = _bipartite_dims(rho_ab, measurements[0], dims)
    rho_a = partial_trace(rho_ab.matrix, (d_a, d_b), keep="A")

    gaps = {}
    for index, m in enumerate(measurements):
        steered = steer(rho_ab, m, (d_a, d_b))
        gap = trace_distance(barycenter(steered.ensemble), rho_a)
        gaps[f"{index}:{m.name}"] = gap
        if gap > tol:
            raise ConsistencyError(
                f"steered barycenter for {m.name!r} is {gap:.3e} from Tr_B ρ (tol {tol:.1e})"
            )
    channel_gap = max(gaps.values())
    logger.debug(f"no-signaling holds over {len(gaps)} measurements, max gap {channel_gap:.3e}")
    return SignalingVerdict(
        Theory.QM,
        False,
        channel_gap,
        f"all {len(gaps)} steered ensembles have barycenter Tr_B ρ",
        {"gaps": gaps, "dims": [d_a, d_b]},
    )


# ================================================================
# 🚀 LAYER 4: EQM Signaling Protocol
# ================================================================

def simulate_eqm_signaling(
    functional: EnsembleFunctional, n_shots: int = None, seed: SeedLike = None
) -> SignalingVerdict:
    """
    Superluminal signaling in EQM with the projection postulate.

    Alice holds subsystem B of a singlet and encodes bit 0 by measuring Z and
    bit 1 by measuring X. Bob holds A and, with EQM powers, evaluates
    ``functional`` on the ensemble his half was steered into, decoding with
    the midpoint of the two analytic values. Alice's projection completes
    before Bob evaluates; no spacetime model is involved.
    """
    n_shots = Config.DEFAULT_SHOTS if n_shots is None else int(n_shots)
    if n_shots < 1:
        raise ValidationError(f"n_shots must be ≥ 1, got {n_shots}")
    if not functional.nonlinear:
        raise ValidationError(f"functional {functional.name!r} is not flagged nonlinear")

    singlet = singlet_state().density()
    encodings = {0: computational_basis_povm(2), 1: x_basis_povm()}
    steered = {bit: steer(singlet, m, (2, 2)).ensemble for bit, m in encodings.items()}
    values = {bit: functional(e) for bit, e in steered.items()}
    gap = abs(values[0] - values[1])
    if gap < _FUNCTIONAL_GAP_FLOOR:
        raise IndistinguishableEnsemblesError("functional cannot distinguish the steered ensembles")
    threshold = (values[0] + values[1]) / 2
    qm_equivalent = equivalent_in_qm(steered[0], steered[1])

    def decode(value: float) -> int:
        return 0 if (value > threshold) == (values[0] > threshold) else 1

    seed_seq = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    transcript = []
    for shot, child in enumerate(seed_seq.spawn(n_shots)):
        bit = int(np.random.default_rng(child).integers(2))
        # Alice's measurement steers Bob's half before he looks
        received = steer(singlet, encodings[bit], (2, 2)).ensemble
        value = functional(received)
        transcript.append({"shot": shot, "sent": bit, "basis": encodings[bit].name,
                           "value": value, "decoded": decode(value)})

    success_rate = sum(t["sent"] == t["decoded"] for t in transcript) / n_shots
    signaling = success_rate == 1.0
    return SignalingVerdict(
        Theory.EQM,
        signaling,
        gap,
        f"{functional.name} separates Alice's Z and X preparations by {gap:.6g}; "
        f"QM-equivalent={qm_equivalent}",
        {
            "functional": functional.name,
            "values": {"Z": values[0], "X": values[1]},
            "threshold": threshold,
            "qm_equivalent": qm_equivalent,
            "success_rate": success_rate,
            "transcript": transcript,
        },
    )
