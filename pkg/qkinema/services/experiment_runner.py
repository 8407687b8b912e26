"""
=============================================================================
🧪 EXPERIMENT RUNNER
=============================================================================
Builds the JSON reports behind every CLI command:
1. Singlet demonstration (projection postulate, steering, reduced states)
2. Classical push-forward demonstration
3. Randomized no-signaling sweep over bipartite states
4. Affinity certification of a named state map
5. EQM signaling protocol
=============================================================================
"""

import logging
from datetime import datetime
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from ..core import classical
from ..core.dynamics import (
    StateMap,
    affinity_deviation,
    amplitude_damping_channel,
    bit_flip_channel,
    certify_affine,
    depolarizing_channel,
    identity_map,
    nonlinear_purification_map,
)
from ..core.errors import ValidationError
from ..core.kinematics import (
    Ensemble,
    basis_state,
    random_bipartite_pure,
    random_density,
    singlet_state,
)
from ..core.measurement import (
    basis_overlap_functional,
    computational_basis_povm,
    outcome_probabilities,
    random_projective_povm,
    x_basis_povm,
)
from ..core.operator_core import max_entry_distance, partial_trace, projector, tensor
from ..core.projection_signaling import (
    SignalingVerdict,
    Theory,
    local_measurement_on_B,
    project,
    simulate_eqm_signaling,
    steer,
    verify_no_signaling,
)
from ..utils.data_types import DataConverter
from .config_manager import ConfigManager

logger = logging.getLogger(__name__)

REGRESSION_TOL = 1e-12


def parse_map_spec(spec: str, dim: int) -> StateMap:
    """
    Build a StateMap from ``identity | bitflip[:p] | depolarizing:q |
    amplitude-damping:g | purify``.
    """
    name, _, arg = spec.strip().partition(":")
    name = name.lower()

    def parameter() -> float:
        try:
            return float(arg)
        except ValueError:
            raise ValidationError(f"map {name!r} needs a numeric parameter, got {arg!r}") from None

    if name == "identity" and not arg:
        return identity_map(dim)
    if name == "purify" and not arg:
        return nonlinear_purification_map(dim)
    if name == "bitflip":
        return bit_flip_channel(dim, parameter() if arg else 1.0).as_state_map()
    if name == "depolarizing" and arg:
        return depolarizing_channel(dim, parameter()).as_state_map()
    if name == "amplitude-damping" and arg:
        if dim != 2:
            raise ValidationError("amplitude-damping is a qubit channel (dim 2)")
        return amplitude_damping_channel(parameter()).as_state_map()
    raise ValidationError(
        f"unknown map {spec!r}; expected identity, bitflip[:p], depolarizing:q, "
        "amplitude-damping:g or purify"
    )


class ExperimentRunner:
    """
    =======================================================================
    🧪 EXPERIMENT RUNNER CLASS
    =======================================================================

    Every ``run_*`` method returns a JSON-ready dict with ``command``,
    ``version``, ``timestamp``, ``expected`` and ``ok`` plus its own results.
    """

    def __init__(self, config_manager: Optional[ConfigManager] = None):
        self.config_manager = config_manager or ConfigManager()
        self.tolerances = self.config_manager.get_tolerances()
        self.run_defaults = self.config_manager.get_run_defaults()
        logger.info("✅ ExperimentRunner initialized")

    def _header(self, command: str, expected: str) -> Dict:
        return {
            "command": command,
            "version": self.config_manager.get("VERSION"),
            "timestamp": datetime.now().isoformat(),
            "expected": expected,
        }

    def _seed(self, seed: Optional[int]) -> int:
        return self.run_defaults["DEFAULT_SEED"] if seed is None else int(seed)

    def _trials(self, trials: Optional[int]) -> int:
        return self.run_defaults["DEFAULT_TRIALS"] if trials is None else int(trials)

    # ================================================================
    # 🔔 Singlet demonstration
    # ================================================================

    def run_example2(self) -> Dict:
        """Singlet + Z measurement on B: probabilities, ϱ₀, ϱ₁, Tr_B ϱ₀, ρ_A."""
        report = self._header("demo example2", "reproduces the singlet projection values")
        singlet = singlet_state().density()
        z_on_b = local_measurement_on_B(computational_basis_povm(2), 2)
        probs = outcome_probabilities(z_on_b, singlet)
        records = [project(z_on_b, singlet, k) for k in range(len(z_on_b))]
        reduced_after_0 = partial_trace(records[0].post_state.matrix, (2, 2), keep="A")
        rho_a = partial_trace(singlet.matrix, (2, 2), keep="A")

        ket0, ket1 = projector([1, 0]), projector([0, 1])
        checks = {
            "probabilities": max(abs(p - 0.5) for p in probs),
            "post_state_0": max_entry_distance(records[0].post_state.matrix, tensor(ket1, ket0)),
            "post_state_1": max_entry_distance(records[1].post_state.matrix, tensor(ket0, ket1)),
            "reduced_post_state_0": max_entry_distance(reduced_after_0, ket1),
            "rho_A": max_entry_distance(rho_a, np.eye(2) / 2),
        }

        steered = {
            "Z": steer(singlet, computational_basis_povm(2), (2, 2)).ensemble,
            "X": steer(singlet, x_basis_povm(), (2, 2)).ensemble,
        }
        verdict = verify_no_signaling(
            singlet, [computational_basis_povm(2), x_basis_povm()], (2, 2),
            self.tolerances["NO_SIGNALING_TOL"],
        )

        report.update({
            "probabilities": probs,
            "post_states": [DataConverter.matrix_to_json(r.post_state) for r in records],
            "reduced_post_state_0": DataConverter.matrix_to_json(reduced_after_0),
            "rho_A": DataConverter.matrix_to_json(rho_a),
            "steered_ensembles": {k: DataConverter.ensemble_to_json(e) for k, e in steered.items()},
            "no_signaling": DataConverter.verdict_to_json(verdict),
            "max_errors": checks,
            "ok": all(err <= REGRESSION_TOL for err in checks.values()),
        })
        logger.info(f"🔔 Singlet demonstration ok={report['ok']}")
        return DataConverter.sanitize_report(report)

    # ================================================================
    # 🎲 Classical push-forward demonstration
    # ================================================================

    def run_classical_demo(self, size: int = 5, seed: Optional[int] = None, trials: int = 200) -> Dict:
        """ω ↦ ω² mod N lifted to P(Ω), plus an affinity residual over random maps."""
        report = self._header("demo classical", "push-forward is affine for any point map")
        space = classical.PhaseSpace(size)
        square = classical.square_mod_map(space)
        examples = []
        for omega in range(size):
            pushed = classical.push_forward(square, classical.dirac(space, omega))
            examples.append({"omega": omega, "image": square(omega),
                             "pushed": DataConverter.distribution_to_json(pushed)})

        collapse = None
        if size > 3:
            mixed = classical.mix_distributions(
                [(0.5, classical.dirac(space, 2)), (0.5, classical.dirac(space, 3))]
            )
            collapse = {
                "input": DataConverter.distribution_to_json(mixed),
                "pushed": DataConverter.distribution_to_json(classical.push_forward(square, mixed)),
            }

        residual = 0.0
        seed_seq = np.random.SeedSequence(self._seed(seed))
        for child in seed_seq.spawn(trials):
            rng = np.random.default_rng(child)
            f = classical.random_point_map(space, rng)
            p = classical.random_distribution(space, rng)
            q = classical.random_distribution(space, rng)
            alpha = float(rng.uniform())
            lhs = classical.push_forward(f, classical.mix_distributions([(alpha, p), (1 - alpha, q)]))
            rhs = alpha * classical.push_forward(f, p).probs + (1 - alpha) * classical.push_forward(f, q).probs
            residual = max(residual, float(np.max(np.abs(lhs.probs - rhs))))

        report.update({
            "size": size,
            "point_map": DataConverter.point_map_to_json(square),
            "dirac_images": examples,
            "many_to_one": collapse,
            "affinity_trials": trials,
            "max_affinity_residual": residual,
            "ok": residual <= REGRESSION_TOL,
        })
        logger.info(f"🎲 Classical demo residual={residual:.2e}")
        return DataConverter.sanitize_report(report)

    # ================================================================
    # 📡 No-signaling sweep
    # ================================================================

    def run_no_signaling_sweep(
        self,
        dims: Tuple[int, int] = (2, 2),
        trials: Optional[int] = None,
        seed: Optional[int] = None,
        tol: Optional[float] = None,
        measurements_per_state: Optional[int] = None,
    ) -> Dict:
        """
        Random bipartite states (pure and mixed alternately) against random
        projective bases on B. A violation raises ConsistencyError.
        """
        d_a, d_b = (int(d) for d in dims)
        if d_a < 1 or d_b < 1:
            raise ValidationError(f"dims must be positive, got {dims}")
        trials = self._trials(trials)
        if trials < 1:
            raise ValidationError(f"trials must be ≥ 1, got {trials}")
        tol = self.tolerances["NO_SIGNALING_TOL"] if tol is None else float(tol)
        per_state = measurements_per_state or self.run_defaults["MEASUREMENTS_PER_STATE"]
        report = self._header("verify nosignaling", "no signaling in QM")

        rows: List[Dict] = []
        seed_seq = np.random.SeedSequence(self._seed(seed))
        for index, child in enumerate(seed_seq.spawn(trials)):
            state_seed, *measurement_seeds = child.spawn(1 + per_state)
            if index % 2 == 0:
                kind = "pure"
                rho = random_bipartite_pure(d_a, d_b, state_seed).density()
            else:
                kind = "mixed"
                rho = random_density(d_a * d_b, state_seed)
            measurements = [random_projective_povm(d_b, s, name=f"basis{j}")
                            for j, s in enumerate(measurement_seeds)]
            state_verdict = verify_no_signaling(rho, measurements, (d_a, d_b), tol)
            rows.append({"trial": index, "kind": kind, "max_gap": state_verdict.channel_gap})

        frame = pd.DataFrame(rows)
        summary = frame.groupby("kind")["max_gap"].agg(["count", "max", "mean"])
        channel_gap = float(frame["max_gap"].max())
        per_kind = {kind: row.to_dict() for kind, row in summary.iterrows()}
        verdict = SignalingVerdict(
            Theory.QM,
            False,
            channel_gap,
            f"Tr_B ρ unchanged by {trials * per_state} local measurements",
            {"dims": [d_a, d_b], "states": trials, "measurements_per_state": per_state},
        )
        logger.info(f"📡 No-signaling sweep {d_a}x{d_b}: {trials} states, max gap {channel_gap:.2e}")

        report.update({
            "dims": [d_a, d_b],
            "trials": trials,
            "measurements_per_state": per_state,
            "tol": tol,
            "verdict": DataConverter.verdict_to_json(verdict),
            "summary": per_kind,
            "ok": True,
        })
        return DataConverter.sanitize_report(report)

    # ================================================================
    # 🧮 Affinity certification
    # ================================================================

    def run_affinity_certification(
        self,
        map_spec: str,
        dim: int = 2,
        trials: Optional[int] = None,
        seed: Optional[int] = None,
        threshold: Optional[float] = None,
    ) -> Dict:
        state_map = parse_map_spec(map_spec, dim)
        expected = "witness_found" if state_map.name == "purify" else "certified_affine"
        report = self._header("certify affine", expected)
        threshold = self.tolerances["AFFINITY_THRESHOLD"] if threshold is None else threshold
        result = certify_affine(state_map, dim, self._trials(trials), self._seed(seed), threshold)

        report.update({
            "map": map_spec,
            "dim": dim,
            "threshold": threshold,
            **DataConverter.affinity_report_to_json(result),
        })
        if state_map.name == "purify" and dim == 2:
            fixed = Ensemble(((0.75, basis_state(2, 0).density()), (0.25, basis_state(2, 1).density())))
            report["fixed_witness"] = {
                "e1": DataConverter.ensemble_to_json(fixed),
                "deviation": affinity_deviation(state_map, fixed),
            }
        report["ok"] = result.verdict.value == expected
        logger.info(f"🧮 {map_spec} on dim {dim}: {result.verdict.value} after {result.trials} trials")
        return DataConverter.sanitize_report(report)

    # ================================================================
    # 🚀 EQM signaling
    # ================================================================

    def run_eqm_signaling(self, shots: Optional[int] = None, seed: Optional[int] = None) -> Dict:
        shots = self.run_defaults["DEFAULT_SHOTS"] if shots is None else int(shots)
        report = self._header("simulate eqm-signaling", "EQM with projection postulate signals")
        verdict = simulate_eqm_signaling(basis_overlap_functional(basis_state(2, 0)), shots, self._seed(seed))
        report.update({
            "shots": shots,
            "verdict": DataConverter.verdict_to_json(verdict),
            "ok": bool(verdict.signaling and verdict.evidence["qm_equivalent"]),
        })
        logger.info(f"🚀 EQM channel gap {verdict.channel_gap:.6g}, signaling={verdict.signaling}")
        return DataConverter.sanitize_report(report)
